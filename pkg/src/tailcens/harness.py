"""Seeded Monte Carlo experiments: bias/RMSE sweeps and variance checks.

Replicate r draws its data from stream (seed, r), with lifetime and
censoring sub-streams spawned per replicate, so results are bit-identical
across runs and across worker counts.  Undefined estimator values (an
estimator can fail at a given threshold on a given draw) are excluded from
that cell's aggregation and counted instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .censored import generate_censored, sort_censored
from .distributions import HeavyTailModel, format_model
from .estimators import ESTIMATOR_IDS, new_weighted, sweep
from .io import fmt
from .parallel import replicate_map
from .rng import stream

__all__ = [
    "McConfig",
    "McResult",
    "default_k_grid",
    "run_bias_rmse",
    "run_variance_check",
    "write_result_csv",
    "write_meta",
    "RESULT_CSV_HEADER",
]

RESULT_CSV_HEADER = "estimator,k,bias,rmse,undefined_count"


def default_k_grid(n: int) -> tuple[int, ...]:
    """Every k from 5 to n-5, thinned to at most 100 grid points."""
    lo, hi = 5, n - 5
    if hi < lo:
        raise ValueError(f"sample size {n} leaves no room for the default grid")
    step = max(1, math.ceil((hi - lo + 1) / 100))
    return tuple(range(lo, hi + 1, step))


@dataclass(frozen=True)
class McConfig:
    """Full description of one experiment; the seed makes it reproducible."""

    model_x: HeavyTailModel
    model_y: HeavyTailModel
    n: int
    reps: int
    k_grid: tuple[int, ...]
    estimators: tuple[str, ...]
    seed: int
    complete_data: bool = False

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if self.n < 3:
            raise ValueError(f"n must be >= 3, got {self.n}")
        for k in self.k_grid:
            if not 1 <= k <= self.n - 1:
                raise ValueError(f"grid k={k} is invalid for n={self.n}")
        for est in self.estimators:
            if est not in ESTIMATOR_IDS:
                raise ValueError(f"unknown estimator {est!r}")


@dataclass(frozen=True)
class McResult:
    """Bias and RMSE per (estimator, k), plus the config that produced them.

    ``bias``/``rmse``/``undefined_count`` are (n_estimators, n_k) arrays
    aligned with ``config.estimators`` and ``config.k_grid``; cells where
    every replicate failed hold NaN with a full undefined count.
    """

    config: McConfig
    bias: np.ndarray
    rmse: np.ndarray
    undefined_count: np.ndarray


def _replicate_values(cfg: McConfig, r: int) -> np.ndarray:
    rng = stream(cfg.seed, r)
    if cfg.complete_data:
        z = cfg.model_x.sample(cfg.n, rng)
        d = np.ones(cfg.n, dtype=np.int64)
    else:
        z, d = generate_censored(cfg.model_x, cfg.model_y, cfg.n, rng)
    s = sort_censored(z, d)
    return np.stack([sweep(s, est, cfg.k_grid) for est in cfg.estimators])


def run_bias_rmse(cfg: McConfig, workers: int = 1) -> McResult:
    """Replicate the experiment and aggregate bias and RMSE per cell."""
    gamma1 = cfg.model_x.true_evi
    cube = np.stack(replicate_map(lambda r: _replicate_values(cfg, r), cfg.reps, workers))
    defined = ~np.isnan(cube)
    undefined_count = cfg.reps - defined.sum(axis=0)
    with np.errstate(invalid="ignore"):
        err = cube - gamma1
        counts = defined.sum(axis=0)
        safe = np.maximum(counts, 1)
        bias = np.where(counts > 0, np.nansum(err, axis=0) / safe, np.nan)
        rmse = np.where(counts > 0, np.sqrt(np.nansum(err * err, axis=0) / safe), np.nan)
    return McResult(config=cfg, bias=bias, rmse=rmse, undefined_count=undefined_count)


def run_variance_check(
    model_x: HeavyTailModel,
    model_y: HeavyTailModel,
    n: int,
    k: int,
    reps: int,
    seed: int,
    complete_data: bool = False,
    workers: int = 1,
) -> tuple[float, float]:
    """Mean of the weighted estimator and sample variance of its scaled error.

    Returns ``(mean, scaled_var)`` where ``scaled_var`` is the sample
    variance (ddof 1) of sqrt(k) * (estimate - true index) across
    replicates.  Meant for exact power-law pairs, where the limit variance
    has no bias contamination.
    """
    gamma1 = model_x.true_evi

    def one(r: int) -> float:
        rng = stream(seed, r)
        if complete_data:
            z = model_x.sample(n, rng)
            d = np.ones(n, dtype=np.int64)
        else:
            z, d = generate_censored(model_x, model_y, n, rng)
        return new_weighted(sort_censored(z, d), k)

    values = np.asarray(replicate_map(one, reps, workers))
    scaled = np.sqrt(k) * (values - gamma1)
    return float(values.mean()), float(scaled.var(ddof=1))


def write_result_csv(result: McResult, fh) -> None:
    """Emit ``estimator,k,bias,rmse,undefined_count`` rows, grid-ordered."""
    fh.write(RESULT_CSV_HEADER + "\n")
    cfg = result.config
    for e_idx, est in enumerate(cfg.estimators):
        for k_idx, k in enumerate(cfg.k_grid):
            fh.write(
                f"{est},{k},{fmt(result.bias[e_idx, k_idx])},"
                f"{fmt(result.rmse[e_idx, k_idx])},{int(result.undefined_count[e_idx, k_idx])}\n"
            )


def write_meta(cfg: McConfig, fh) -> None:
    """Echo the full config, one key=value per line."""
    fh.write(f"model_x={format_model(cfg.model_x)}\n")
    fh.write(f"model_y={format_model(cfg.model_y)}\n")
    fh.write(f"n={cfg.n}\n")
    fh.write(f"reps={cfg.reps}\n")
    fh.write(f"seed={cfg.seed}\n")
    fh.write(f"k_grid={','.join(str(k) for k in cfg.k_grid)}\n")
    fh.write(f"estimators={','.join(cfg.estimators)}\n")
    fh.write(f"complete_data={int(cfg.complete_data)}\n")
