"""t-product tensor algebra and the randomized Kaczmarz solver family."""

from ._trek import (
    default_stepsizes,
    frobenius_norm,
    inner,
    lambda_col,
    lambda_row,
    load_tensor,
    pinv_apply,
    save_tensor,
    sigma_min_nonzero,
    soft_shrinkage,
    solve,
    spectral_norm,
    theoretical_rates,
    tprod,
    transpose,
)

__version__ = "0.1.0"

__all__ = [
    "default_stepsizes",
    "frobenius_norm",
    "inner",
    "lambda_col",
    "lambda_row",
    "load_tensor",
    "pinv_apply",
    "save_tensor",
    "sigma_min_nonzero",
    "soft_shrinkage",
    "solve",
    "spectral_norm",
    "theoretical_rates",
    "tprod",
    "transpose",
]
