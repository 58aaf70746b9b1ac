"""Named experiment presets (sweep grids over the default configuration)."""

from typing import Dict

from cloudrain.types import SimConfig, SweepSpec

experiment_presets: Dict[str, dict] = {
    "brownian-sweep": {
        "varying": "sigma",
        "values": [round(0.1 * k, 10) for k in range(1, 11)],
        "base": {"eps_rf": 0, "eps_bm": 1},
    },
    "vortex-sweep": {
        "varying": "vortex_count",
        "values": [10, 25, 50, 75, 100, 150, 200, 300, 400, 500, 600],
        "base": {"eps_rf": 1, "eps_bm": 0, "ou_lambda": 1500.0},
    },
    "lambda-sweep": {
        "varying": "lambda",
        "values": [float(v) for v in range(100, 1101, 10)],
        "base": {"eps_rf": 1, "eps_bm": 0, "n_vortices": 200},
    },
}


def get_preset(name: str, replicas_per_value: int = 10, **overrides) -> SweepSpec:
    """SweepSpec for a named preset; `overrides` replace base SimConfig fields."""
    if name not in experiment_presets:
        raise ValueError(
            f"Invalid Preset Name: {name}, expected one of {sorted(experiment_presets)}"
        )
    preset = experiment_presets[name]
    base = SimConfig.model_validate({**preset["base"], **overrides})
    return SweepSpec(
        varying=preset["varying"],
        values=list(preset["values"]),
        replicas_per_value=replicas_per_value,
        base=base,
        name=name,
    )
