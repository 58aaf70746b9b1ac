"""Reference sweep results used to check the regression engine."""

# Brownian sweep at N = 1000, dt = 1e-4, T_MaxIt = 3000, ten replicas per sigma:
# (sigma, mean formation epoch, standard deviation)
brownian_sweep_table = [
    (0.1, 4567.0, 434.2),
    (0.2, 2896.5, 387.9338),
    (0.3, 1569.8, 260.9294),
    (0.4, 1086.9, 312.3816),
    (0.5, 917.6, 234.5115),
    (0.6, 808.0, 165.7607),
    (0.7, 734.9, 170.0514),
    (0.8, 691.5, 93.29014),
    (0.9, 641.4, 119.8025),
    (1.0, 636.0, 114.9043),
]
brownian_sweep_dt = 1e-4

# Reference regression summaries, fitted against 1 / mean formation time
brownian_fit_summaries = {
    "quadratic": {
        "residual_std_error": 0.5232,
        "df_residual": 7,
        "r_squared": 0.992,
        "adj_r_squared": 0.9897,
        "f_statistic": 431.5,
    },
    "loglog": {
        "residual_std_error": 0.1061,
        "df_residual": 8,
        "r_squared": 0.979,
        "adj_r_squared": 0.9764,
        "f_statistic": 373.6,
        "coefficients": (2.92623, 0.93251),
    },
}
vortex_fit_summaries = {"quadratic": {"r_squared": 0.9798}}
lambda_fit_summaries = {
    "quadratic": {"r_squared": 0.8392},
    "loglog": {"r_squared": 0.9145},
    "rational": {"correlation": 0.7997127, "a_init": 0.08, "b_init": 0.048},
}
