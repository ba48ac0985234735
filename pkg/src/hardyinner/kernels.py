"""Reproducing kernels of H^2_w as truncated series.

``k_a(z) = sum conj(a)^k z^k / w_k``.  The derivative kernels
``d^m/d conj(a)^m k_a`` reproduce ``g^(m)(a)`` and are used for repeated
zeros.  At boundary points a kernel exists only when its norm is finite;
that is checked up front.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BoundaryNotAdmissible, TailBoundUnavailable
from .series import TruncatedSeries, evaluate
from .weights import WeightSequence

BOUNDARY_TOL = 1e-12
MAX_DEGREE = 2**22


def on_boundary(a: complex) -> bool:
    return abs(abs(a) - 1.0) <= BOUNDARY_TOL


def check_point(w: WeightSequence, a: complex, m: int = 0) -> None:
    """Raise unless the order-``m`` derivative kernel at ``a`` has finite norm."""
    r = abs(a)
    if r > 1.0 + BOUNDARY_TOL:
        raise ValueError(f"point {a} lies outside the closed disc")
    if not on_boundary(a):
        return
    # ||d^m k_a||^2 ~ sum k^{2m} / w_k
    ok = w.series_converges(2.0 * m)
    if ok is not True:
        why = "unknown tail behaviour" if ok is None else f"sum k^{2 * m}/w_k diverges"
        raise BoundaryNotAdmissible(
            f"kernel of order {m} at boundary point {a} does not exist ({why})"
        )


def _falling(k: np.ndarray, m: int) -> np.ndarray:
    out = np.ones(k.shape[0])
    for i in range(m):
        out *= k - i
    return out


def _conj_powers(a: complex, n: int) -> np.ndarray:
    step = np.full(n, np.conj(complex(a)), dtype=np.complex128)
    if n:
        step[0] = 1.0
    return np.cumprod(step)


def kernel_derivative_series(w: WeightSequence, a: complex, m: int, N: int) -> TruncatedSeries:
    """Coefficients ``k(k-1)...(k-m+1) conj(a)^(k-m) / w_k``; ``m = 0`` is the kernel itself."""
    if m < 0:
        raise ValueError("derivative order must be nonnegative")
    if N < 0:
        raise ValueError("degree must be nonnegative")
    check_point(w, a, m)
    k = np.arange(N + 1)
    coeffs = np.zeros(N + 1, dtype=np.complex128)
    if m <= N:
        coeffs[m:] = _falling(k[m:].astype(np.float64), m) * _conj_powers(a, N + 1 - m)
        coeffs /= w.array(N + 1)
    return TruncatedSeries(coeffs)


def kernel_series(w: WeightSequence, a: complex, N: int) -> TruncatedSeries:
    return kernel_derivative_series(w, a, 0, N)


def _ratio_sup(w: WeightSequence, Ns: np.ndarray) -> np.ndarray:
    """``sup_{k > N} w_k / w_{k+1}`` for each ``N`` (inf where unknown)."""
    if w.kind == "dirichlet":
        if w.alpha >= 0:
            return np.ones(Ns.shape[0])
        return ((Ns + 3.0) / (Ns + 2.0)) ** (-w.alpha)
    L = len(w.values)
    p = w.tail_exponent
    out = np.full(Ns.shape[0], np.inf)
    if p is None:
        return out
    vals = w.array(L + 2)
    ratios = vals[:-1] / vals[1:]  # k = 0..L
    suffix = np.maximum.accumulate(ratios[::-1])[::-1]
    for i, N in enumerate(Ns):
        start = int(N) + 1
        best = 1.0
        if start <= L:
            best = max(best, suffix[start])
        k0 = max(start, L + 1)
        if p < 0:
            best = max(best, ((k0 + 1.0) / (k0 + 2.0)) ** p)
        out[i] = best
    return out


def adaptive_truncation(w: WeightSequence, r: float, tol: float = 1e-14, max_degree: int = MAX_DEGREE) -> int:
    """Smallest ``N >= 1`` whose tail bound for ``sum_{k>N} r^k / w_k`` is below ``tol``.

    For ``r < 1`` the bound is ``r^(N+1) / w_{N+1} / (1 - q)`` with ``q`` the
    supremum of consecutive term ratios past ``N``.  For ``r = 1`` it is the
    integral bound on ``sum 1/w_k`` (only when that sum converges).
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must lie in [0, 1]")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if r == 0.0:
        return 1
    if r >= 1.0:
        if w.series_converges() is not True:
            raise TailBoundUnavailable("sum 1/w_k does not (provably) converge")
        lo, hi = 1, 1
        while w.inverse_tail_bound(hi) > tol:
            hi *= 2
            if hi > max_degree:
                raise TailBoundUnavailable(
                    f"tail below {tol:g} needs degree beyond {max_degree}"
                )
        while lo < hi:
            mid = (lo + hi) // 2
            if w.inverse_tail_bound(mid) <= tol:
                hi = mid
            else:
                lo = mid + 1
        return lo

    log_r = math.log(r)
    log_tol = math.log(tol)
    chunk = 1024
    start = 1
    while start <= max_degree:
        Ns = np.arange(start, min(start + chunk, max_degree + 1))
        weights = w.array(int(Ns[-1]) + 2)
        q = r * _ratio_sup(w, Ns)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_bound = (Ns + 1) * log_r - np.log(weights[Ns + 1]) - np.log1p(-np.minimum(q, 1.0))
        log_bound[q >= 1.0] = np.inf
        hit = np.nonzero(log_bound <= log_tol)[0]
        if hit.size:
            return int(Ns[hit[0]])
        start += chunk
        chunk *= 2
    raise TailBoundUnavailable(f"no truncation below degree {max_degree} reaches tol {tol:g}")


def kernel_value(w: WeightSequence, a: complex, z: complex, tol: float = 1e-14) -> complex:
    """``k_a(z)``; closed forms for the Hardy and Bergman weights, series otherwise."""
    if abs(z) > 1.0 + BOUNDARY_TOL:
        raise ValueError(f"point {z} lies outside the closed disc")
    check_point(w, a)
    if w.kind == "dirichlet" and w.alpha in (0.0, -1.0) and abs(np.conj(a) * z) < 1.0:
        base = 1.0 / (1.0 - np.conj(complex(a)) * complex(z))
        return complex(base if w.alpha == 0.0 else base * base)
    r = abs(a) * abs(z)
    N = adaptive_truncation(w, min(r, 1.0), tol)
    return evaluate(kernel_series(w, a, N), z)


def closed_form_kernel(w: WeightSequence, a: complex, m: int, z):
    """Analytic continuation of ``d^m k_a`` for the Hardy and Bergman weights.

    Returns None for weights without a closed form.
    """
    if w.kind != "dirichlet" or w.alpha not in (0.0, -1.0):
        return None
    z = np.asarray(z, dtype=np.complex128)
    ac = np.conj(complex(a))
    # Hardy: m! z^m / (1 - a'z)^(m+1); Bergman: (m+1)! z^m / (1 - a'z)^(m+2)
    extra = 1 if w.alpha == 0.0 else 2
    return math.factorial(m + extra - 1) * z**m / (1.0 - ac * z) ** (m + extra)
