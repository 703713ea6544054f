"""Right-censored samples: generation and ordering with concomitant flags.

An observation is a pair ``(z, delta)`` where ``z`` is the observed minimum
of a lifetime and an independent censoring time, and ``delta`` is 1 when the
lifetime itself was observed (uncensored).  Estimators work on the sample
sorted ascending with each indicator travelling alongside its observation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import HeavyTailModel

__all__ = ["SortedCensoredSample", "sort_censored", "censor", "generate_censored"]


@dataclass(frozen=True)
class SortedCensoredSample:
    """Ascending observations with concomitant censoring indicators.

    Attributes
    ----------
    z : ndarray
        Observed minima, sorted ascending, all positive.
    delta : ndarray
        0/1 indicators aligned with ``z`` (1 = uncensored).
    top_delta_prefix : ndarray
        ``top_delta_prefix[i-1]`` counts the uncensored observations among
        the ``i`` largest, i.e. the running sum of ``delta`` taken from the
        top of the sample downward.

    Instances are immutable (the arrays are marked read-only) and can be
    shared freely across threads.
    """

    z: np.ndarray
    delta: np.ndarray
    top_delta_prefix: np.ndarray

    @property
    def n(self) -> int:
        return self.z.size


def sort_censored(z, delta) -> SortedCensoredSample:
    """Sort observations ascending, carrying the indicators along.

    Tied observations are ordered with the uncensored ones (delta = 1)
    first, the usual survival convention of deaths preceding censorings at
    equal times.
    """
    z = np.asarray(z, dtype=float).ravel()
    delta = np.asarray(delta).ravel().astype(np.int64)
    if z.size == 0:
        raise ValueError("sample must be nonempty")
    if z.size != delta.size:
        raise ValueError(f"z and delta lengths differ: {z.size} vs {delta.size}")
    if not np.all(np.isfinite(z)) or np.any(z <= 0):
        raise ValueError("all observations must be finite and > 0")
    if not np.all((delta == 0) | (delta == 1)):
        raise ValueError("censoring indicators must be 0 or 1")
    order = np.lexsort((1 - delta, z))
    z_sorted = z[order]
    delta_sorted = delta[order]
    prefix = np.cumsum(delta_sorted[::-1])
    for arr in (z_sorted, delta_sorted, prefix):
        arr.setflags(write=False)
    return SortedCensoredSample(z=z_sorted, delta=delta_sorted, top_delta_prefix=prefix)


def censor(x, y) -> tuple[np.ndarray, np.ndarray]:
    """Pair a lifetime array with a censoring array: z = min, delta = 1{x <= y}."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.minimum(x, y), (x <= y).astype(np.int64)


def generate_censored(
    model_x: HeavyTailModel,
    model_y: HeavyTailModel,
    n: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``n`` observations of ``model_x`` censored by ``model_y``.

    The lifetime and censoring draws come from two child streams spawned
    from ``rng``, so the pair is reproducible from the parent stream's key
    alone.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng_x, rng_y = rng.spawn(2)
    x = model_x.sample(n, rng_x)
    y = model_y.sample(n, rng_y)
    return censor(x, y)
