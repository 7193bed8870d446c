"""Robust Phase I charting for high-dimensional data.

Row indices returned here are 0-based; the command-line tool reports 1-based.
"""

from ._core import (
    ChartResult,
    Error,
    MomentEstimates,
    RmdpResult,
    RobustEstimates,
    __version__,
    asymptotic_power,
    asymptotic_type2_error,
    cdf_accuracy,
    cf_coefficient,
    classical_estimates,
    correction_c,
    est_tr_rho2,
    est_tr_rho3,
    exhaustive_mdp,
    false_alarm_rate,
    power,
    raw_mdp,
    rmdp,
    sample,
    scaling_factor,
    trace_power,
    z_chart,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
