"""Truncated power series and the weighted inner product.

A :class:`TruncatedSeries` is a polynomial ``sum_{k<=N} a_k z^k``.  It does
not pretend to be an infinite series: callers that approximate infinite
objects (kernels, Shapiro-Shields functions) control truncation error
themselves.

The inner product conjugates its second argument,
``<f, g> = sum a_k conj(b_k) w_k``, so that ``<g, k_a> = g(a)``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import _accel
from .weights import WeightSequence


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128, copy=True).reshape(-1)
        if c.shape[0] == 0:
            c = np.zeros(1, dtype=np.complex128)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def __len__(self):
        return self.coeffs.shape[0]

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        a, b = _pad(self.coeffs, other.coeffs)
        return TruncatedSeries(a + b)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        a, b = _pad(self.coeffs, other.coeffs)
        return TruncatedSeries(a - b)

    def scale(self, c: complex) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs * c)

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    @classmethod
    def monomial(cls, s: int, c: complex = 1.0) -> "TruncatedSeries":
        coeffs = np.zeros(s + 1, dtype=np.complex128)
        coeffs[s] = c
        return cls(coeffs)


def _pad(a: np.ndarray, b: np.ndarray):
    n = max(a.shape[0], b.shape[0])
    if a.shape[0] < n:
        a = np.concatenate([a, np.zeros(n - a.shape[0], complex)])
    if b.shape[0] < n:
        b = np.concatenate([b, np.zeros(n - b.shape[0], complex)])
    return a, b


def blaschke_factor(a: complex, N: int) -> TruncatedSeries:
    """Degree-``N`` truncation of ``(z - a) / (1 - conj(a) z)``."""
    a = complex(a)
    if abs(a) >= 1.0:
        raise ValueError("Blaschke zero must lie in the open disc")
    if N < 0:
        raise ValueError("degree must be nonnegative")
    c = np.empty(N + 1, dtype=np.complex128)
    c[0] = -a
    if N >= 1:
        step = np.full(N, np.conj(a), dtype=np.complex128)
        step[0] = 1.0
        c[1:] = (1.0 - abs(a) ** 2) * np.cumprod(step)
    return TruncatedSeries(c)


def evaluate(f: TruncatedSeries, z):
    """Horner evaluation at a scalar or an array of points."""
    pts = np.asarray(z, dtype=np.complex128)
    out = _accel.horner(f.coeffs, np.ascontiguousarray(pts.reshape(-1)))
    if pts.ndim == 0:
        return complex(out[0])
    return out.reshape(pts.shape)


def shift_mul(f: TruncatedSeries, k: int) -> TruncatedSeries:
    """Multiply by ``z**k``."""
    if k < 0:
        raise ValueError("shift must be nonnegative")
    return TruncatedSeries(np.concatenate([np.zeros(k, complex), f.coeffs]))


def derivative(f: TruncatedSeries) -> TruncatedSeries:
    if f.degree == 0:
        return TruncatedSeries([0.0])
    return TruncatedSeries(f.coeffs[1:] * np.arange(1, f.degree + 1))


def weighted_inner_product(f: TruncatedSeries, g: TruncatedSeries, w: WeightSequence) -> complex:
    """``sum_k a_k conj(b_k) w_k``, summed in ascending ``k``."""
    a, b = _pad(f.coeffs, g.coeffs)
    return _accel.wdot(a, b, w.array(a.shape[0]))


def norm(f: TruncatedSeries, w: WeightSequence) -> float:
    return float(np.sqrt(max(weighted_inner_product(f, f, w).real, 0.0)))


def moments(f: TruncatedSeries, w: WeightSequence, kmax: int, compensated: bool = False) -> np.ndarray:
    """``mu_k = <z^k f, f>`` for ``k = 0..kmax``.

    Terms are accumulated in the same order as ``weighted_inner_product``
    applied to ``shift_mul(f, k)`` and ``f``, so both agree bit for bit.
    """
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    return _accel.moments(f.coeffs, w.array(len(f)), int(kmax), bool(compensated))


@dataclass
class InnerReport:
    moments: np.ndarray
    max_deviation: float
    kmax: int
    tol: float
    inner: bool

    def to_dict(self) -> dict:
        return {
            "moments": [[float(m.real), float(m.imag)] for m in self.moments],
            "max_deviation": self.max_deviation,
            "kmax": self.kmax,
            "tol": self.tol,
            "inner": self.inner,
        }


def inner_deviation(mu: np.ndarray) -> float:
    dev = abs(mu[0] - 1.0)
    if mu.shape[0] > 1:
        dev = max(dev, float(np.max(np.abs(mu[1:]))))
    return float(dev)


def is_inner(f: TruncatedSeries, w: WeightSequence, kmax: int = 20, tol: float = 1e-8) -> InnerReport:
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    if not tol > 0:
        raise ValueError("tol must be positive")
    mu = moments(f, w, kmax)
    dev = inner_deviation(mu)
    return InnerReport(mu, dev, kmax, tol, dev <= tol)


def phase_gauge(f: TruncatedSeries, rel: float = 1e-6) -> TruncatedSeries:
    """Rotate so the first non-negligible coefficient is positive real."""
    c = f.coeffs
    big = np.max(np.abs(c))
    if big == 0:
        return f
    idx = int(np.argmax(np.abs(c) > rel * big))
    phase = c[idx] / abs(c[idx])
    return TruncatedSeries(c / phase)


def align_phase(f: TruncatedSeries, ref: TruncatedSeries) -> TruncatedSeries:
    """Multiply ``f`` by the unimodular scalar that best matches ``ref``."""
    a, b = _pad(f.coeffs, ref.coeffs)
    s = np.vdot(a, b)
    if s == 0:
        return f
    return TruncatedSeries(f.coeffs * (s / abs(s)))


def max_coeff_diff(f: TruncatedSeries, g: TruncatedSeries) -> float:
    a, b = _pad(f.coeffs, g.coeffs)
    return float(np.max(np.abs(a - b)))


# -- CSV coefficient format: header ``k,re,im``; leading ``#`` lines are comments


def write_coefficients_csv(path, f: TruncatedSeries, comments: Optional[Iterable[str]] = None):
    with open(path, "w", newline="") as fh:
        for line in comments or ():
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(["k", "re", "im"])
        for k, c in enumerate(f.coeffs):
            writer.writerow([k, "%.17g" % c.real, "%.17g" % c.imag])


def read_coefficients_csv(path) -> TruncatedSeries:
    with open(path, newline="") as fh:
        rows = [line for line in fh if line.strip() and not line.startswith("#")]
    reader = csv.DictReader(rows)
    if reader.fieldnames is None or [n.strip() for n in reader.fieldnames] != ["k", "re", "im"]:
        raise ValueError("coefficient CSV must have header k,re,im")
    coeffs = []
    for expected, row in enumerate(reader):
        if int(row["k"]) != expected:
            raise ValueError(f"coefficient rows must be index-complete; expected k={expected}")
        coeffs.append(complex(float(row["re"]), float(row["im"])))
    if not coeffs:
        raise ValueError("coefficient CSV is empty")
    return TruncatedSeries(coeffs)


def config_comment(config: dict) -> str:
    return "config: " + json.dumps(config, sort_keys=True)
