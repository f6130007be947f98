"""Exact distribution and ROC analysis for detection of a rank-one signal in
colored noise via the largest generalized eigenvalue of the whitened sample
covariance pair."""

from .asymptotic import AsymptoticRegime, limit_cdf_fixed_alpha, limit_cdf_scaled_snr
from .finite_cdf import (ConditioningError, ProblemDims, SpikeParam, cdf_lambda_max,
                         cdf_lambda_max_general, cdf_null, cdf_test_statistic,
                         phi_entry, psi_entry, psi_minor_determinant)
from .monte_carlo import (EmpiricalCdf, McConfig, joint_density_cdf_m2, ks_distance,
                          sample_lambda_max)
from .roc import (BracketingError, RocCurve, RocPoint, asymptotic_roc_p_infinity,
                  asymptotic_roc_scaled, calibrate_threshold, detection_probability,
                  low_snr_slope, low_snr_slope_balanced, optimize_pstar, pstar_approx,
                  pstar_bounds, roc_closed_form_alpha0, roc_curve, snr_from_db,
                  snr_to_db)
from .specfun import LogScaled

__version__ = "0.1.0"

__all__ = [
    "AsymptoticRegime",
    "BracketingError",
    "ConditioningError",
    "EmpiricalCdf",
    "LogScaled",
    "McConfig",
    "ProblemDims",
    "RocCurve",
    "RocPoint",
    "SpikeParam",
    "asymptotic_roc_p_infinity",
    "asymptotic_roc_scaled",
    "calibrate_threshold",
    "cdf_lambda_max",
    "cdf_lambda_max_general",
    "cdf_null",
    "cdf_test_statistic",
    "detection_probability",
    "joint_density_cdf_m2",
    "ks_distance",
    "limit_cdf_fixed_alpha",
    "limit_cdf_scaled_snr",
    "low_snr_slope",
    "low_snr_slope_balanced",
    "optimize_pstar",
    "phi_entry",
    "psi_entry",
    "psi_minor_determinant",
    "pstar_approx",
    "pstar_bounds",
    "roc_closed_form_alpha0",
    "roc_curve",
    "sample_lambda_max",
    "snr_from_db",
    "snr_to_db",
]
