"""Shared generators for the test suite."""

import numpy as np

from hardyinner.series import TruncatedSeries
from hardyinner.shapiro_shields import ZeroSet
from hardyinner.weights import WeightSequence

SPACES = [WeightSequence.dirichlet(a) for a in (-1.0, 0.0, 1.0, 2.0)]


def random_zero_set(rng, max_points=4, radius=0.7, max_mult=2, separation=0.15):
    """Interior zero set with points uniform in the disc of ``radius``.

    Points closer than ``separation`` are redrawn: clustered simple zeros
    drive the Gram condition past the singularity threshold.
    """
    n = int(rng.integers(1, max_points + 1))
    pts = []
    while len(pts) < n:
        z = radius * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        if all(abs(z - q) > separation for q in pts):
            pts.append(complex(z))
    return ZeroSet(tuple((z, int(rng.integers(1, max_mult + 1))) for z in pts))


def zero_family(alpha, count=25, seed=0):
    rng = np.random.default_rng([seed, int(round(10 * alpha)) + 100])
    return [random_zero_set(rng) for _ in range(count)]


def random_series(rng, degree, scale=1.0):
    c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    return TruncatedSeries(scale * c)


def normalized_monomial(w, s, lam=1.0):
    c = np.zeros(s + 1, dtype=complex)
    c[s] = lam / np.sqrt(w.array(s + 1)[s])
    return TruncatedSeries(c)


def blaschke_coefficients(a, N):
    c = np.empty(N + 1, dtype=complex)
    c[0] = -a
    c[1:] = (1 - abs(a) ** 2) * np.conj(a) ** np.arange(N)
    return c
