"""
Regression Module.

Least-squares fits of formation time against a swept parameter: polynomial
OLS with the usual summary statistics (standard errors, t values, adjusted R^2,
F-statistic), OLS in log-log coordinates, the rational model a / (1 + b x)
by Levenberg-damped Gauss-Newton, a report fitting each model against both
mean time and its inverse, and an isotonic (decreasing) smoother used for
trend checks.
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy import stats

from cloudrain.errors import DegenerateInputError, DomainError
from cloudrain.types import RegressionFit, SweepRow

logger = logging.getLogger(__name__)

_POLY_MODELS = {2: "quadratic", 3: "cubic"}
REPORT_MODELS = ("quadratic", "loglog", "rational")


def _as_arrays(x, y):
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.shape != y.shape:
        raise DegenerateInputError(
            f"Invalid Regression Input: x has {x.size} points, y has {y.size}"
        )
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DegenerateInputError("Invalid Regression Input: non-finite values")
    return x, y


def _r_squared(y: np.ndarray, rss: float) -> float:
    tss = float(np.sum((y - y.mean()) ** 2))
    if tss == 0:
        return 1.0
    return float(min(1.0, max(0.0, 1.0 - rss / tss)))


def _ols(x: np.ndarray, y: np.ndarray, design: np.ndarray, names: List[str], **fields):
    n, p = design.shape
    if np.linalg.matrix_rank(design) < p:
        raise DegenerateInputError(
            "Invalid Regression Input: design matrix is rank deficient "
            "(too few distinct x values)"
        )
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    fitted = design @ coef
    residuals = y - fitted
    rss = float(residuals @ residuals)
    df = n - p
    sigma2 = rss / df
    cov = sigma2 * np.linalg.pinv(design.T @ design)
    std_errors = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    # exact fits have no finite t or F statistics
    t_values = (coef / std_errors).tolist() if np.all(std_errors > 0) else None

    tss = float(np.sum((y - y.mean()) ** 2))
    r_squared = _r_squared(y, rss)
    adj = 1.0 - (1.0 - r_squared) * (n - 1) / df
    f_statistic = f_p_value = None
    if tss > 0 and p > 1 and rss > 0:
        f_statistic = float(((tss - rss) / (p - 1)) / (rss / df))
        f_p_value = float(stats.f.sf(f_statistic, p - 1, df))

    return RegressionFit(
        coefficient_names=names,
        coefficients=coef.tolist(),
        std_errors=std_errors.tolist(),
        t_values=t_values,
        r_squared=r_squared,
        adj_r_squared=adj,
        residual_std_error=float(np.sqrt(sigma2)),
        df_residual=df,
        f_statistic=f_statistic,
        f_p_value=f_p_value,
        rss=rss,
        x=x.tolist(),
        y=y.tolist(),
        fitted=fitted.tolist(),
        residuals=residuals.tolist(),
        **fields,
    )


def fit_polynomial(x, y, degree: int = 2, target: Optional[str] = None) -> RegressionFit:
    """OLS fit of y ~ 1 + x + ... + x^degree (degree 2 or 3).

    Needs at least degree + 2 points so one residual degree of freedom remains.

    Raises:
        DegenerateInputError: Too few points or too few distinct x values
    """
    if degree not in _POLY_MODELS:
        raise ValueError(f"Invalid Degree: {degree}, expected one of {list(_POLY_MODELS)}")
    x, y = _as_arrays(x, y)
    if x.size < degree + 2:
        raise DegenerateInputError(
            f"Invalid Regression Input: {_POLY_MODELS[degree]} fit needs at least "
            f"{degree + 2} points, got {x.size}"
        )
    design = np.vander(x, degree + 1, increasing=True)
    names = ["(Intercept)"] + [f"x^{k}" if k > 1 else "x" for k in range(1, degree + 1)]
    return _ols(x, y, design, names, model=_POLY_MODELS[degree], target=target)


def fit_quadratic(x, y, target: Optional[str] = None) -> RegressionFit:
    return fit_polynomial(x, y, 2, target)


def fit_loglog(x, y, target: Optional[str] = None) -> RegressionFit:
    """OLS of log y ~ a + b log x; the slope b is the power-law exponent.

    The returned x, y, fitted and residuals are in log coordinates.

    Raises:
        DomainError: If any x or y is not strictly positive
    """
    x, y = _as_arrays(x, y)
    if np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("Invalid Log-Log Input: x and y must be strictly positive")
    if x.size < 3:
        raise DegenerateInputError(
            f"Invalid Regression Input: log-log fit needs at least 3 points, got {x.size}"
        )
    lx, ly = np.log(x), np.log(y)
    design = np.column_stack([np.ones_like(lx), lx])
    return _ols(lx, ly, design, ["(Intercept)", "log(x)"], model="loglog", target=target)


def _rational(params: np.ndarray, x: np.ndarray) -> np.ndarray:
    return params[0] / (1.0 + params[1] * x)


def fit_rational(
    x,
    y,
    a_init: float = 0.08,
    b_init: float = 0.048,
    max_iter: int = 200,
    tol: float = 1e-10,
    target: Optional[str] = None,
    callback: Optional[Callable[[int, np.ndarray, float], None]] = None,
) -> RegressionFit:
    """Nonlinear least squares for y = a / (1 + b x).

    Levenberg-damped Gauss-Newton: a step is accepted only if it keeps
    1 + b x > 0 at every x and does not raise the residual sum of squares;
    otherwise the damping grows tenfold. Stops when the relative step is
    below `tol`. Hitting `max_iter` returns the fit with converged=False.

    Args:
        callback: Called as callback(iteration, params, sse) after each accepted step

    Raises:
        DegenerateInputError: Fewer than 3 points
        DomainError: If the start has 1 + b_init x <= 0 for some x
    """
    x, y = _as_arrays(x, y)
    if x.size < 3:
        raise DegenerateInputError(
            f"Invalid Regression Input: rational fit needs at least 3 points, got {x.size}"
        )
    params = np.array([a_init, b_init], dtype=float)
    if np.any(1.0 + params[1] * x <= 0):
        raise DomainError(
            f"Invalid Rational Start: b_init={b_init} makes 1 + b x <= 0 on the data"
        )

    residuals = y - _rational(params, x)
    sse = float(residuals @ residuals)
    damping = 1e-3
    converged = False
    iteration = 0
    while iteration < max_iter and not converged:
        iteration += 1
        denom = 1.0 + params[1] * x
        jac = np.column_stack([1.0 / denom, -params[0] * x / denom**2])
        normal = jac.T @ jac
        gradient = jac.T @ residuals
        accepted = False
        while damping < 1e16:
            damped = normal + damping * np.diag(np.diag(normal) + 1e-300)
            step = np.linalg.lstsq(damped, gradient, rcond=None)[0]
            candidate = params + step
            if np.all(1.0 + candidate[1] * x > 0):
                new_residuals = y - _rational(candidate, x)
                new_sse = float(new_residuals @ new_residuals)
                if new_sse <= sse:
                    accepted = True
                    break
            damping *= 10.0
        if not accepted:
            # no descent direction left at any damping
            converged = True
            break
        relative_step = np.linalg.norm(step) / (np.linalg.norm(params) + tol)
        params, residuals, sse = candidate, new_residuals, new_sse
        damping = max(damping / 10.0, 1e-12)
        if callback is not None:
            callback(iteration, params.copy(), sse)
        if relative_step <= tol or sse == 0:
            converged = True

    if not converged:
        logger.warning(
            "rational fit did not converge in %d iterations (a=%g, b=%g)",
            max_iter,
            params[0],
            params[1],
        )

    fitted = _rational(params, x)
    n = x.size
    df = n - 2
    correlation = None
    if np.std(y) > 0 and np.std(fitted) > 0:
        correlation = float(np.corrcoef(fitted, y)[0, 1])
    return RegressionFit(
        model="rational",
        target=target,
        coefficient_names=["a", "b"],
        coefficients=params.tolist(),
        r_squared=_r_squared(y, sse),
        residual_std_error=float(np.sqrt(sse / df)),
        df_residual=df,
        rss=sse,
        correlation=correlation,
        converged=converged,
        iterations=iteration,
        x=x.tolist(),
        y=y.tolist(),
        fitted=fitted.tolist(),
        residuals=(y - fitted).tolist(),
    )


def sweep_xy(rows: Sequence[SweepRow], target: str = "time"):
    """(value, mean time) or (value, 1 / mean time) for the uncensored rows."""
    if target not in ("time", "inverse"):
        raise ValueError(f"Invalid Target: {target}, expected 'time' or 'inverse'")
    kept = [r for r in rows if r.mean_time is not None and r.mean_time > 0]
    x = np.array([r.value for r in kept], dtype=float)
    y = np.array([r.mean_time for r in kept], dtype=float)
    return x, (1.0 / y if target == "inverse" else y)


def fit_sweep(
    rows: Sequence[SweepRow], model: str, target: str = "time", **kwargs
) -> RegressionFit:
    """Fit one of quadratic, cubic, loglog or rational to a sweep table."""
    x, y = sweep_xy(rows, target)
    if model == "quadratic":
        return fit_polynomial(x, y, 2, target)
    if model == "cubic":
        return fit_polynomial(x, y, 3, target)
    if model == "loglog":
        return fit_loglog(x, y, target)
    if model == "rational":
        return fit_rational(x, y, target=target, **kwargs)
    raise ValueError(f"Invalid Model: {model}")


def fit_all(
    rows: Sequence[SweepRow],
    models: Sequence[str] = REPORT_MODELS,
    a_init: Optional[float] = None,
    b_init: float = 1e-3,
) -> Dict[str, Dict[str, Optional[RegressionFit]]]:
    """Fit every model against both targets: {model: {"time": fit, "inverse": fit}}.

    The rational start defaults to a = first y of the target. A model that
    cannot be fitted to a target (too few points, bad start) is logged and
    reported as None.
    """
    report: Dict[str, Dict[str, Optional[RegressionFit]]] = {}
    for model in models:
        report[model] = {}
        for target in ("time", "inverse"):
            kwargs = {}
            if model == "rational":
                _, y = sweep_xy(rows, target)
                start = a_init if a_init is not None else (float(y[0]) if y.size else 1.0)
                kwargs = {"a_init": start, "b_init": b_init}
            try:
                report[model][target] = fit_sweep(rows, model, target, **kwargs)
            except (DegenerateInputError, DomainError) as e:
                logger.warning("%s fit against %s skipped: %s", model, target, e)
                report[model][target] = None
    return report


def isotonic_decreasing(y, weights=None) -> np.ndarray:
    """Least-squares nonincreasing fit by pool-adjacent-violators."""
    y = np.asarray(y, dtype=float).reshape(-1)
    w = np.ones_like(y) if weights is None else np.asarray(weights, dtype=float)
    values: List[float] = []
    sizes: List[float] = []
    counts: List[int] = []
    for yi, wi in zip(y, w):
        values.append(yi)
        sizes.append(wi)
        counts.append(1)
        while len(values) > 1 and values[-2] < values[-1]:
            total = sizes[-2] + sizes[-1]
            merged = (values[-2] * sizes[-2] + values[-1] * sizes[-1]) / total
            values[-2:] = [merged]
            sizes[-2:] = [total]
            counts[-2:] = [counts[-2] + counts[-1]]
    return np.repeat(values, counts)


__all__ = [
    "fit_polynomial",
    "fit_quadratic",
    "fit_loglog",
    "fit_rational",
    "sweep_xy",
    "fit_sweep",
    "fit_all",
    "REPORT_MODELS",
    "isotonic_decreasing",
]
