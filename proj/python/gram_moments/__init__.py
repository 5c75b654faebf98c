"""Exact and asymptotic moments of one-sided correlated Gram matrices.

The heavy lifting lives in the compiled extension; this package re-exports
its surface unchanged.
"""

from ._gram_moments import (
    AsymptoticState,
    ConditioningError,
    ConvergenceError,
    ExactEngine,
    LossCurve,
    MomentEstimate,
    SeriesValue,
    Spectrum,
    ValidationError,
    asymptotic_inverse_moment,
    bessel_spectrum,
    blue_mse,
    build_engine,
    compute_derivatives,
    lmmse_mse_high_snr,
    lmmse_mse_low_snr,
    make_spectrum,
    mc_blue,
    mc_empirical_moment,
    mc_lmmse,
    mc_scm,
    optimize_lambda,
    scale_spectrum,
    scm_loss,
    shifted_wishart_spectrum,
    solve_fixed_point,
    spectrum_from_matrix,
    weight_spectrum,
)

__all__ = [
    "AsymptoticState",
    "ConditioningError",
    "ConvergenceError",
    "ExactEngine",
    "LossCurve",
    "MomentEstimate",
    "SeriesValue",
    "Spectrum",
    "ValidationError",
    "asymptotic_inverse_moment",
    "bessel_spectrum",
    "blue_mse",
    "build_engine",
    "compute_derivatives",
    "lmmse_mse_high_snr",
    "lmmse_mse_low_snr",
    "make_spectrum",
    "mc_blue",
    "mc_empirical_moment",
    "mc_lmmse",
    "mc_scm",
    "optimize_lambda",
    "scale_spectrum",
    "scm_loss",
    "shifted_wishart_spectrum",
    "solve_fixed_point",
    "spectrum_from_matrix",
    "weight_spectrum",
]

__version__ = "0.1.0"
