import numpy as np
import pytest

from tailcens import Burr, Frechet, LogGamma, Pareto, generate_censored, sort_censored, stream


@pytest.fixture
def tiny5():
    """Five observations with one censored point at the second position."""
    return sort_censored([1.0, 2.0, 3.0, 4.0, 5.0], [1, 0, 1, 1, 1])


_PAIRS = [
    (Pareto(1.0), Pareto(1.0)),
    (Pareto(0.8), Pareto(2.0)),
    (Burr(1.0, 2.0, 1.0), Burr(1.0, 2.0, 2.0)),
    (Burr(2.0, 1.0, 0.8), Frechet(0.9)),
    (Frechet(1.2), Burr(1.0, 1.5, 1.0)),
    (LogGamma(2.0, 0.7), Pareto(1.5)),
]


def make_sample(seed, n=None):
    """A censored sample from a cycling catalog of model pairs."""
    rng = stream(seed)
    if n is None:
        n = int(rng.integers(20, 501))
    mx, my = _PAIRS[seed % len(_PAIRS)]
    z, d = generate_censored(mx, my, n, stream(seed, 1))
    return sort_censored(z, d)


@pytest.fixture
def sample_factory():
    return make_sample
