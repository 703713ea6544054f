"""Extreme value index estimation for randomly right-censored heavy-tailed data.

The package covers the full workflow: heavy-tailed model simulation,
censored-sample handling, five tail index estimators (including a randomly
weighted one that stays stable under strong censoring), the exact piecewise
tail step function behind it, Kolmogorov-Smirnov / Cramer-von Mises fit
statistics with Monte Carlo p-values, adaptive threshold selection, and a
seeded Monte Carlo harness.  The ``tailcens`` CLI exposes the same
operations for batch use.
"""

from .censored import SortedCensoredSample, censor, generate_censored, sort_censored
from .distributions import (
    Burr,
    CensoringProfile,
    Frechet,
    HeavyTailModel,
    LogGamma,
    ModelSpecError,
    Pareto,
    censoring_profile,
    format_model,
    parse_model,
)
from .estimators import (
    ESTIMATOR_IDS,
    EstimateReport,
    KaplanMeierCurve,
    UndefinedEstimateError,
    asymptotic_ci,
    efg,
    estimate_report,
    evaluate,
    hill,
    kaplan_meier,
    new_weighted,
    p_hat,
    sweep,
    weighted_functional,
    ww1,
    ww2,
)
from .harness import McConfig, McResult, default_k_grid, run_bias_rmse, run_variance_check
from .io import CsvFormatError, derive_survival, read_censored_csv, read_raw_records, write_censored_csv
from .rng import stream
from .selection import KSelection, reiss_thomas_k
from .tailprocess import (
    DegenerateNullError,
    GofReport,
    TailProcessCurve,
    cvm_stat,
    delta_curve,
    gof_pvalue,
    integrate_delta,
    ks_stat,
)

__version__ = "0.1.0"
