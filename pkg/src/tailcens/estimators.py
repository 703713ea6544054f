"""Point estimators of the lifetime extreme value index under censoring.

All operations act on a :class:`~tailcens.censored.SortedCensoredSample`
``s`` and a threshold count ``k`` (number of top order statistics used) and
depend on the data only through ratios of order statistics, so they are
scale invariant.  In the formulas below, ``Z(m)`` is the m-th ascending
order statistic, ``t = Z(n-k)`` the threshold, ``S(i)`` the number of
uncensored observations among the top ``i``.

* ``hill``:          mean of log(Z(n-i+1)/t), i = 1..k, the minimum's index.
* ``p_hat``:         S(k)/k, the fraction of uncensored top observations.
* ``efg``:           hill / p_hat, the censoring-adjusted lifetime index.
* ``ww1``/``ww2``:   product-limit weighted log-spacing sums.
* ``new_weighted``:  (1/k) * sum_{i<k} i*log(Z(n-i)/t) / (S(i) + i/k),
  a randomly weighted sum whose denominators are bounded below by the i/k
  term, so the value is always finite.

Estimator ids used across the CLI and the Monte Carlo harness:
``hill | efg | ww1 | ww2 | new``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .censored import SortedCensoredSample

__all__ = [
    "UndefinedEstimateError",
    "EstimateReport",
    "KaplanMeierCurve",
    "ESTIMATOR_IDS",
    "hill",
    "p_hat",
    "efg",
    "kaplan_meier",
    "ww1",
    "ww2",
    "new_weighted",
    "weighted_functional",
    "asymptotic_ci",
    "estimate_report",
    "evaluate",
    "sweep",
    "min_valid_k",
]


class UndefinedEstimateError(ValueError):
    """The estimator is undefined at the requested threshold count."""


@dataclass(frozen=True)
class KaplanMeierCurve:
    """Product-limit estimate of the lifetime cdf at each order statistic."""

    support: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class EstimateReport:
    """A point estimate with its context, ready for tabulation."""

    estimator_id: str
    k: int
    value: float
    p_hat: float
    std_err: float | None = None
    ci: tuple[float, float] | None = None
    ci_level: float | None = None


def _check_k(k: int, n: int, lo: int = 1, hi: int | None = None) -> None:
    hi = n - 1 if hi is None else hi
    if not (isinstance(k, (int, np.integer)) and lo <= k <= hi):
        raise ValueError(f"k must be an integer in [{lo}, {hi}], got {k!r}")


def hill(s: SortedCensoredSample, k: int) -> float:
    """Average log-excess of the top k observations over the threshold."""
    n = s.n
    _check_k(k, n)
    # log of the ratio, not difference of logs: keeps near-tied order
    # statistics exactly consistent with the ratio-based tail curve
    return float(np.mean(np.log(s.z[n - k :] / s.z[n - k - 1])))


def p_hat(s: SortedCensoredSample, k: int) -> float:
    """Fraction of uncensored observations among the top k."""
    _check_k(k, s.n, hi=s.n)
    return float(s.top_delta_prefix[k - 1]) / k


def efg(s: SortedCensoredSample, k: int) -> float:
    """Censoring-adjusted Hill estimate: hill(s, k) / p_hat(s, k)."""
    p = p_hat(s, k)
    if p == 0.0:
        raise UndefinedEstimateError(f"no uncensored observations among the top {k}")
    return hill(s, k) / p


def _km_survival(s: SortedCensoredSample) -> np.ndarray:
    """Product-limit survival 1 - F at each ascending order statistic."""
    n = s.n
    factors = np.where(s.delta == 1, 1.0 - 1.0 / (n - np.arange(n, dtype=float)), 1.0)
    return np.cumprod(factors)


def kaplan_meier(s: SortedCensoredSample) -> KaplanMeierCurve:
    """Product-limit estimate of the lifetime cdf on the sample's support."""
    return KaplanMeierCurve(support=s.z, values=1.0 - _km_survival(s))


def ww1(s: SortedCensoredSample, k: int) -> float:
    """Product-limit weighted sum of consecutive log spacings."""
    n = s.n
    _check_k(k, n)
    surv = _km_survival(s)
    base = surv[n - k - 1]
    if base <= 0.0:
        raise UndefinedEstimateError(f"product-limit survival vanishes at the threshold (k={k})")
    i = np.arange(1, k + 1)
    return float(np.sum(surv[n - i] / base * np.log(s.z[n - i] / s.z[n - i - 1])))


def ww2(s: SortedCensoredSample, k: int) -> float:
    """Product-limit weighted sum of log excesses of uncensored top points."""
    n = s.n
    _check_k(k, n)
    surv = _km_survival(s)
    base = surv[n - k - 1]
    if base <= 0.0:
        raise UndefinedEstimateError(f"product-limit survival vanishes at the threshold (k={k})")
    i = np.arange(1, k + 1)
    terms = surv[n - i] / base * (s.delta[n - i] / i) * np.log(s.z[n - i] / s.z[n - k - 1])
    return float(np.sum(terms))


def _weighted_log_sum(s: SortedCensoredSample, k: int, gvals, alpha: float) -> float:
    # sum_{i=1..k-1} (i/k) * g(i/(k+1)) * log(Z(n-i)/Z(n-k))**alpha / (S(i) + i/k);
    # the ratio inside the log matches the tail curve's breakpoints bit for bit
    n = s.n
    i = np.arange(1, k)
    den = s.top_delta_prefix[: k - 1] + i / k
    logs = np.log(s.z[n - 1 - i] / s.z[n - k - 1])
    return float(np.sum((i / k) * gvals / den * logs**alpha))


def new_weighted(s: SortedCensoredSample, k: int) -> float:
    """Randomly weighted log-excess sum with censoring-count denominators.

    The denominators S(i) + i/k stay >= i/k > 0, so the value is finite for
    every valid sample.  Note the flip side of the guard: when no uncensored
    observation ranks above position i, the i-th term is damped only by i/k
    and can dominate the sum, which inflates the estimate under censoring.
    """
    _check_k(k, s.n, lo=2)
    return _weighted_log_sum(s, k, 1.0, 1.0)


def weighted_functional(s: SortedCensoredSample, k: int, g=None, alpha: float = 1.0) -> float:
    """Weighted power-of-log functional generalizing :func:`new_weighted`.

    ``g`` is a nonnegative weight function on (0, 1) (``None`` means the
    constant 1) and ``alpha`` a positive exponent.  The sum of weighted log
    excesses is normalized by ``int_0^1 g(x) * (-log x)**alpha dx``; with
    ``g = None`` and ``alpha = 1`` the normalizer is 1 and the value reduces
    exactly to :func:`new_weighted`.
    """
    _check_k(k, s.n, lo=2)
    if not alpha > 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    if g is None:
        norm = float(special.gamma(alpha + 1.0))
        gvals = 1.0
    else:
        norm, _ = integrate.quad(lambda x: g(x) * (-np.log(x)) ** alpha, 0.0, 1.0, epsabs=1e-10)
        if not np.isfinite(norm) or norm <= 0.0:
            raise ValueError(f"normalizer integral must be finite and > 0, got {norm}")
        i = np.arange(1, k)
        gvals = np.asarray([g(t) for t in i / (k + 1)], dtype=float)
        if np.any(gvals < 0) or not np.all(np.isfinite(gvals)):
            raise ValueError("weight function must be finite and nonnegative on (0, 1)")
    return _weighted_log_sum(s, k, gvals, alpha) / norm


def asymptotic_ci(gamma1_hat: float, p: float, k: int, level: float = 0.95) -> tuple[float, float, float]:
    """Normal-approximation interval for the weighted estimator.

    The limiting variance of sqrt(k) times the estimation error is
    (9 - 8p) * gamma1**2 / p, treated as centered (no bias correction).
    Returns (std_err, lower, upper) with the lower end truncated at 0.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    if not gamma1_hat > 0:
        raise ValueError(f"gamma1_hat must be > 0, got {gamma1_hat}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level}")
    std_err = float(gamma1_hat * np.sqrt((9.0 - 8.0 * p) / p) / np.sqrt(k))
    zq = float(special.ndtri(0.5 * (1.0 + level)))
    return std_err, max(0.0, gamma1_hat - zq * std_err), gamma1_hat + zq * std_err


_DISPATCH = {
    "hill": hill,
    "efg": efg,
    "ww1": ww1,
    "ww2": ww2,
    "new": new_weighted,
}

ESTIMATOR_IDS = tuple(_DISPATCH)

_MIN_K = {"hill": 1, "efg": 1, "ww1": 1, "ww2": 1, "new": 2}


def min_valid_k(estimator_id: str) -> int:
    """Smallest threshold count at which the estimator is defined."""
    return _MIN_K[_checked_id(estimator_id)]


def _checked_id(estimator_id: str) -> str:
    if estimator_id not in _DISPATCH:
        raise ValueError(f"unknown estimator {estimator_id!r} (expected one of {'|'.join(ESTIMATOR_IDS)})")
    return estimator_id


def evaluate(s: SortedCensoredSample, k: int, estimator_id: str) -> float:
    """Evaluate the estimator named by ``estimator_id`` at threshold ``k``."""
    return _DISPATCH[_checked_id(estimator_id)](s, k)


def estimate_report(
    s: SortedCensoredSample,
    k: int,
    estimator_id: str,
    ci_level: float | None = None,
) -> EstimateReport:
    """Evaluate one estimator at one threshold and assemble a report.

    Confidence intervals are attached for the ``new`` estimator only; the
    limiting variance above does not describe the others.
    """
    value = _DISPATCH[_checked_id(estimator_id)](s, k)
    p = p_hat(s, k)
    std_err = ci = None
    if ci_level is not None and estimator_id == "new":
        std_err, lo, hi = asymptotic_ci(value, p, k, ci_level)
        ci = (lo, hi)
    return EstimateReport(
        estimator_id=estimator_id,
        k=int(k),
        value=value,
        p_hat=p,
        std_err=std_err,
        ci=ci,
        ci_level=ci_level if ci is not None else None,
    )


def sweep(s: SortedCensoredSample, estimator_id: str, ks) -> np.ndarray:
    """Evaluate one estimator over many thresholds; NaN where undefined.

    Thresholds outside the estimator's valid range and thresholds where the
    estimate does not exist (e.g. ``efg`` with no uncensored top points)
    yield NaN rather than raising.
    """
    fn = _DISPATCH[_checked_id(estimator_id)]
    lo = _MIN_K[estimator_id]
    n = s.n
    ks = np.asarray(ks, dtype=np.int64)
    out = np.full(ks.shape, np.nan)
    for j, k in enumerate(ks):
        if lo <= k <= n - 1:
            try:
                out[j] = fn(s, int(k))
            except UndefinedEstimateError:
                pass
    return out
