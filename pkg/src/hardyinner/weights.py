"""Weight sequences for weighted Hardy spaces and their admissibility diagnostics.

A weight ``w = (w_0, w_1, ...)`` with ``w_0 = 1`` defines the norm
``||f||^2 = sum |a_k|^2 w_k``.  Dirichlet-type weights ``(k+1)**alpha`` are
exact; explicit weights carry a finite list of values and an optional power
law used to extrapolate the tail.

The diagnostics return numbers together with a verdict.  Limit conditions
cannot be decided from finitely many values, so verdicts for explicit
weights may be ``"undetermined"``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

DEFAULT_WINDOW = 10**4
DEFAULT_SUM_WINDOW = 10**6


@dataclass(frozen=True)
class WeightSequence:
    kind: str
    alpha: float = 0.0
    values: tuple = ()
    tail_exponent: Optional[float] = None

    def __post_init__(self):
        if self.kind == "dirichlet":
            if not math.isfinite(self.alpha):
                raise ValueError("alpha must be finite")
        elif self.kind == "explicit":
            vals = tuple(float(v) for v in self.values)
            if not vals:
                raise ValueError("explicit weight needs at least one value")
            if vals[0] != 1.0:
                raise ValueError("explicit weight must have w_0 = 1")
            if any(not (v > 0 and math.isfinite(v)) for v in vals):
                raise ValueError("weights must be positive and finite")
            if self.tail_exponent is not None and not math.isfinite(self.tail_exponent):
                raise ValueError("tail_exponent must be finite")
            object.__setattr__(self, "values", vals)
        else:
            raise ValueError(f"unknown weight kind {self.kind!r}")

    @classmethod
    def dirichlet(cls, alpha: float) -> "WeightSequence":
        return cls("dirichlet", alpha=float(alpha))

    @classmethod
    def explicit(cls, values, tail_exponent: Optional[float] = None) -> "WeightSequence":
        return cls(
            "explicit",
            values=tuple(values),
            tail_exponent=None if tail_exponent is None else float(tail_exponent),
        )

    @classmethod
    def from_descriptor(cls, desc: dict) -> "WeightSequence":
        """Parse ``{"type": "dirichlet", "alpha": a}`` or
        ``{"type": "explicit", "weights": [...], "tail_exponent": p}``."""
        if not isinstance(desc, dict) or "type" not in desc:
            raise ValueError("space descriptor must be an object with a 'type' field")
        if desc["type"] == "dirichlet":
            return cls.dirichlet(float(desc["alpha"]))
        if desc["type"] == "explicit":
            return cls.explicit(desc["weights"], desc.get("tail_exponent"))
        raise ValueError(f"unknown space type {desc['type']!r}")

    def to_descriptor(self) -> dict:
        if self.kind == "dirichlet":
            return {"type": "dirichlet", "alpha": self.alpha}
        return {
            "type": "explicit",
            "weights": list(self.values),
            "tail_exponent": self.tail_exponent,
        }

    @property
    def growth_exponent(self) -> Optional[float]:
        """Power-law exponent of the tail, if known."""
        return self.alpha if self.kind == "dirichlet" else self.tail_exponent

    def array(self, n: int) -> np.ndarray:
        """Return ``w_0, ..., w_{n-1}`` as a float array."""
        n = int(n)
        if self.kind == "dirichlet":
            return (np.arange(n, dtype=np.float64) + 1.0) ** self.alpha
        stored = np.asarray(self.values, dtype=np.float64)
        L = stored.shape[0]
        if n <= L:
            return stored[:n].copy()
        if self.tail_exponent is None:
            raise ValueError(
                f"explicit weight has {L} values and no tail rule; index {n - 1} requested"
            )
        k = np.arange(L, n, dtype=np.float64)
        tail = stored[-1] * ((k + 1.0) / L) ** self.tail_exponent
        return np.concatenate([stored, tail])

    def series_converges(self, power: float = 0.0) -> Optional[bool]:
        """Whether ``sum_k k**power / w_k`` converges; None if unknown."""
        p = self.growth_exponent
        if p is None:
            return None
        return p - power > 1.0

    def inverse_tail_bound(self, N: int) -> float:
        """Upper bound for ``sum_{k > N} 1/w_k`` (inf when not summable)."""
        p = self.growth_exponent
        if p is None or p <= 1.0:
            return math.inf
        if self.kind == "dirichlet":
            return (N + 1.0) ** (1.0 - p) / (p - 1.0)
        L = len(self.values)
        head = 0.0
        start = N + 1
        if start < L:
            head = float(np.sum(1.0 / np.asarray(self.values[start:])))
            start = L
        # 1/w_k = (L^p / v_L) (k+1)^{-p} for k >= L; compare with the integral from k = start
        scale = L**p / self.values[-1]
        return head + scale * start ** (1.0 - p) / (p - 1.0)


def weight_at(w: WeightSequence, k: int) -> float:
    if k < 0:
        raise ValueError("index must be nonnegative")
    if w.kind == "dirichlet":
        return (k + 1.0) ** w.alpha
    return float(w.array(k + 1)[k])


@dataclass(frozen=True)
class RatioCheck:
    deviation: float
    verdict: str  # "plausible" | "fails"
    exact: Optional[bool] = None


@dataclass(frozen=True)
class BoundaryCheck:
    verdict: str  # "yes" | "no" | "undetermined"
    partial_sum: float


@dataclass(frozen=True)
class SpaceDiagnostics:
    ratio_deviation: float
    doubling_estimate: float
    boundary_bounded: str
    boundary_partial_sum: float
    algebra_bound_estimate: float
    window: int

    def to_dict(self) -> dict:
        return asdict(self)


def check_ratio_condition(w: WeightSequence, K: int = DEFAULT_WINDOW, tol: float = 1e-3) -> RatioCheck:
    """Max of ``|w_k / w_{k+1} - 1|`` over ``k`` in ``[K/2, K]``."""
    if K < 2:
        raise ValueError("window must be at least 2")
    vals = w.array(K + 2)
    k = np.arange(K // 2, K + 1)
    deviation = float(np.max(np.abs(vals[k] / vals[k + 1] - 1.0)))
    exact = True if w.kind == "dirichlet" else None
    return RatioCheck(deviation, "plausible" if deviation < tol else "fails", exact)


def _range_max(arr: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    # sparse table, inclusive bounds
    table = [arr]
    span = 1
    while 2 * span <= arr.shape[0]:
        prev = table[-1]
        table.append(np.maximum(prev[:-span], prev[span:]))
        span *= 2
    length = hi - lo + 1
    level = np.floor(np.log2(length)).astype(int)
    out = np.empty(lo.shape[0])
    for lev in np.unique(level):
        sel = level == lev
        t = table[lev]
        out[sel] = np.maximum(t[lo[sel]], t[hi[sel] - (1 << lev) + 1])
    return out


def doubling_constant(w: WeightSequence, K: int = DEFAULT_WINDOW) -> float:
    """Empirical doubling constant ``max_{n <= K} max_{n <= k <= 2n} w_k / w_n``."""
    if K < 1:
        raise ValueError("window must be at least 1")
    vals = w.array(2 * K + 1)
    n = np.arange(K + 1)
    peaks = _range_max(vals, n, 2 * n)
    return float(np.max(peaks / vals[: K + 1]))


def boundary_evaluation_bounded(w: WeightSequence, K: int = DEFAULT_SUM_WINDOW) -> BoundaryCheck:
    """Boundary point evaluation is bounded iff ``sum 1/w_k`` converges."""
    if K < 1:
        raise ValueError("truncation must be at least 1")
    n = K + 1
    if w.growth_exponent is None:
        n = min(n, len(w.values))  # explicit weight without tail rule
    partial = float(np.sum(1.0 / w.array(n)))
    conv = w.series_converges()
    verdict = "undetermined" if conv is None else ("yes" if conv else "no")
    return BoundaryCheck(verdict, partial)


def algebra_condition_estimate(w: WeightSequence, K: int = 1000) -> float:
    """``max_{n <= K} sum_{k=0}^n w_n / (w_k w_{n-k})``.

    Bounded in ``K`` exactly when the space is a multiplicative algebra
    (given the doubling condition).
    """
    if K < 1:
        raise ValueError("window must be at least 1")
    vals = w.array(K + 1)
    inv = 1.0 / vals
    sums = vals * np.convolve(inv, inv)[: K + 1]
    return float(np.max(sums))


def space_diagnostics(
    w: WeightSequence,
    window: int = DEFAULT_WINDOW,
    sum_window: int = DEFAULT_SUM_WINDOW,
    algebra_window: int = 1000,
) -> SpaceDiagnostics:
    ratio = check_ratio_condition(w, window)
    boundary = boundary_evaluation_bounded(w, sum_window)
    return SpaceDiagnostics(
        ratio_deviation=ratio.deviation,
        doubling_estimate=doubling_constant(w, window),
        boundary_bounded=boundary.verdict,
        boundary_partial_sum=boundary.partial_sum,
        algebra_bound_estimate=algebra_condition_estimate(w, algebra_window),
        window=window,
    )
