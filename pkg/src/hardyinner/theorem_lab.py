"""Polynomial inner functions are normalized monomials: classification,
numerical search, and the shift-invariant projection identity.

Everything here is truncation-scale evidence.  The search explores
polynomials of degree at most 8 and says nothing certified about
genuinely entire functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from . import _accel
from .errors import OptimizerDiverged, SingularGram, ZeroPolynomial
from .series import TruncatedSeries, moments, norm
from .weights import WeightSequence

REPORT_THRESHOLD = 1e-10


@dataclass
class MonomialVerdict:
    kind: str  # "monomial" | "not_inner" | "anomaly"
    residual: float
    degree: Optional[int] = None
    lam: Optional[complex] = None
    max_deviation: Optional[float] = None
    violated_moment: Optional[int] = None
    coefficients: Optional[list] = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "residual": self.residual}
        if self.kind == "monomial":
            out["degree"] = self.degree
            out["lambda"] = [self.lam.real, self.lam.imag]
        elif self.kind == "not_inner":
            out.update(max_deviation=self.max_deviation, violated_moment=self.violated_moment)
        else:
            out["coefficients"] = self.coefficients
        return out


def monomial_distance(coeffs: np.ndarray, w: WeightSequence):
    """Distance to the closest ``lam z^s / sqrt(w_s)``; returns ``(d, s, lam)``."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    inv_sqrt = 1.0 / np.sqrt(w.array(coeffs.shape[0]))
    total = float(np.sum(np.abs(coeffs) ** 2))
    # ||a - lam e_s c_s||^2 = ||a||^2 - 2 |a_s| c_s + c_s^2 with lam = phase(a_s)
    d2 = total - 2.0 * np.abs(coeffs) * inv_sqrt + inv_sqrt**2
    s = int(np.argmin(d2))
    lam = coeffs[s] / abs(coeffs[s]) if coeffs[s] != 0 else 1.0 + 0j
    return math.sqrt(max(float(d2[s]), 0.0)), s, complex(lam)


def classify_polynomial_inner(f: TruncatedSeries, w: WeightSequence, tol: float = 1e-8) -> MonomialVerdict:
    """Decide innerness of a polynomial by eliminating coefficients.

    With top degree ``n``, ``mu_n = a_0 conj(a_n) w_n`` forces ``a_0 = 0``;
    then ``mu_{n-1}`` forces ``a_1 = 0`` and so on down to ``mu_1``.
    Finally ``mu_0 = |a_n|^2 w_n = 1``.  Coefficients whose energy
    ``|a_k|^2 w_k`` is below ``tol`` do not count towards the top degree.
    """
    c = f.coeffs
    if not np.any(c):
        raise ZeroPolynomial("cannot classify the zero polynomial")
    wk = w.array(c.shape[0])
    energy = np.abs(c) ** 2 * wk
    significant = np.flatnonzero(energy > tol)
    top = int(significant[-1]) if significant.size else int(np.flatnonzero(c)[-1])
    mu = moments(f, w, f.degree)
    for k in range(f.degree, 0, -1):
        if abs(mu[k]) > tol:
            dev = max(abs(mu[0] - 1.0), float(np.max(np.abs(mu[1:]))))
            return MonomialVerdict("not_inner", residual=float(abs(mu[k])), max_deviation=dev, violated_moment=k)
    if abs(mu[0] - 1.0) > tol:
        return MonomialVerdict("not_inner", residual=float(abs(mu[0] - 1.0)),
                               max_deviation=float(abs(mu[0] - 1.0)), violated_moment=0)
    lam = complex(c[top] * math.sqrt(wk[top]))
    target = np.zeros_like(c)
    target[top] = lam / math.sqrt(wk[top])
    dist = float(np.linalg.norm(c - target))
    # forced coefficients satisfy |a_j| <~ tol / (|a_n| w_n) = tol / sqrt(w_n)
    allowed = 100.0 * (top + 1) * tol / min(1.0, math.sqrt(wk[top]))
    if dist > allowed or abs(abs(lam) - 1.0) > 10 * tol:
        return MonomialVerdict("anomaly", residual=dist, coefficients=[[x.real, x.imag] for x in c])
    return MonomialVerdict("monomial", residual=dist, degree=top, lam=lam / abs(lam) if abs(lam) else lam)


def _split(coeffs) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    return np.concatenate([coeffs.real, coeffs.imag])


def _join(x: np.ndarray) -> np.ndarray:
    n = x.shape[0] // 2
    return x[:n] + 1j * x[n:]


def residual_vector(coeffs, w: WeightSequence):
    """Stacked real residuals ``(Re mu_0 - 1, Re mu_1, Im mu_1, ...)`` and their Jacobian
    with respect to ``(Re a_0..Re a_N, Im a_0..Im a_N)``."""
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    return _accel.residual_jacobian(coeffs, w.array(coeffs.shape[0]))


def inner_residual(coeffs, w: WeightSequence):
    """``R = |mu_0 - 1|^2 + sum_{k>=1} |mu_k|^2`` and its gradient in (Re, Im) parts."""
    res, jac = residual_vector(coeffs, w)
    return float(res @ res), 2.0 * jac.T @ res


@dataclass
class MinimizeResult:
    coeffs: np.ndarray
    residual: float
    iterations: int
    grad_norm: float
    diverged: bool = False


def minimize_inner_residual(x0, w: WeightSequence, max_iter: int = 500, ftarget: float = 1e-30,
                            gtol: float = 0.0, damping: float = 0.0) -> MinimizeResult:
    """Gauss-Newton with Armijo backtracking on the stacked moment residual.

    With ``damping = 0`` the step is the minimum-norm least-squares solution
    (the phase direction is always in the kernel of the Jacobian); a positive
    value switches to Levenberg steps ``(J^T J + lam I) p = -J^T r``.  A
    gradient step is used whenever the proposed step is not a descent direction.
    """
    x = _split(x0)
    res, jac = residual_vector(_join(x), w)
    f = float(res @ res)
    g = 2.0 * jac.T @ res
    it = 0
    while it < max_iter and f > ftarget and np.linalg.norm(g) > gtol:
        try:
            if damping > 0:
                JtJ = jac.T @ jac
                lam = damping * max(1.0, float(np.max(np.diag(JtJ))))
                p = -scipy.linalg.solve(JtJ + lam * np.eye(JtJ.shape[0]), jac.T @ res, assume_a="pos")
            else:
                p = -np.linalg.lstsq(jac, res, rcond=1e-20)[0]
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
            p = -g
        if not np.all(np.isfinite(p)) or g @ p >= 0:
            p = -g
        step = 1.0
        while True:
            xn = x + step * p
            rn, jn = residual_vector(_join(xn), w)
            fn = float(rn @ rn)
            if fn <= f + 1e-4 * step * (g @ p) or step < 1e-12:
                break
            step *= 0.5
        it += 1
        if not np.isfinite(fn) or np.max(np.abs(xn)) > 1e8:
            return MinimizeResult(_join(xn), fn, it, float("nan"), diverged=True)
        if fn >= f:
            # no progress at working precision
            break
        x, res, jac, f = xn, rn, jn, fn
        g = 2.0 * jac.T @ res
    return MinimizeResult(_join(x), f, it, float(np.linalg.norm(g)))


@dataclass
class SearchOutcome:
    minima: list
    trials: int
    seed: int
    degree: int
    diverged: int
    unconverged: int
    iterations: list = field(default_factory=list)
    grad_norms: list = field(default_factory=list)
    note: str = "truncation-scale evidence; polynomials of bounded degree only"

    def to_dict(self) -> dict:
        return {
            "minima": [
                {
                    "coefficients": [[c.real, c.imag] for c in m["coefficients"]],
                    "residual": m["residual"],
                    "distance_to_monomial": m["distance"],
                    "degree": m["degree"],
                    "verdict": m["verdict"],
                }
                for m in self.minima
            ],
            "trials": self.trials,
            "seed": self.seed,
            "degree": self.degree,
            "diverged": self.diverged,
            "unconverged": self.unconverged,
            "iterations": self.iterations,
            "grad_norms": self.grad_norms,
            "note": self.note,
        }


def _random_start(rng: np.random.Generator, n: int, radius: float = 2.0) -> np.ndarray:
    dim = 2 * n
    v = rng.standard_normal(dim)
    v *= radius * rng.uniform() ** (1.0 / dim) / np.linalg.norm(v)
    return _join(v)


def _gauge(coeffs: np.ndarray) -> np.ndarray:
    big = np.max(np.abs(coeffs))
    idx = int(np.argmax(np.abs(coeffs) > 1e-6 * big))
    return coeffs * (abs(coeffs[idx]) / coeffs[idx])


def search_inner_polynomials(w: WeightSequence, N: int, trials: int = 100, seed: int = 0,
                             max_iter: int = 500, threshold: float = REPORT_THRESHOLD,
                             classify_tol: float = 1e-8) -> SearchOutcome:
    """Minimize the inner residual over degree-``N`` polynomials from random starts.

    Trial ``i`` draws its start from ``default_rng([seed, i])``, so outcomes
    do not depend on evaluation order.  Minima below ``threshold`` are
    gauge-fixed, measured against the monomial family and classified.
    """
    if not 1 <= N <= 8:
        raise ValueError("degree must be between 1 and 8")
    if trials < 1:
        raise ValueError("need at least one trial")
    minima = []
    iters, grads = [], []
    diverged = unconverged = 0
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        x0 = _random_start(rng, N + 1)
        out = minimize_inner_residual(x0, w, max_iter=max_iter)
        iters.append(out.iterations)
        grads.append(out.grad_norm)
        if out.diverged:
            diverged += 1
            continue
        if out.residual >= threshold:
            unconverged += 1
            continue
        c = _gauge(out.coeffs)
        d, s, _ = monomial_distance(c, w)
        verdict = classify_polynomial_inner(TruncatedSeries(c), w, classify_tol)
        minima.append({"coefficients": c, "residual": out.residual, "distance": d,
                       "degree": s, "verdict": verdict.kind})
    minima.sort(key=lambda m: (m["residual"], m["degree"]))
    return SearchOutcome(minima, trials, seed, N, diverged, unconverged, iters, grads)


def project_onto_shift_span(w: WeightSequence, g: TruncatedSeries, M: int) -> TruncatedSeries:
    """Orthogonal projection of the constant 1 onto ``span{z^i g : 0 <= i <= M}``.

    For inner ``g`` the projection onto the full shift-invariant subspace is
    ``g * conj(g(0))``.
    """
    if g.is_zero():
        raise ZeroPolynomial("g must be nonzero")
    if M < 0:
        raise ValueError("M must be nonnegative")
    n = len(g) + M
    S = np.zeros((n, M + 1), dtype=np.complex128)
    for i in range(M + 1):
        S[i:i + len(g), i] = g.coeffs
    weights = w.array(n)
    G = S.conj().T @ (weights[:, None] * S)  # G[i, j] = <z^j g, z^i g>
    rhs = np.conj(S[0, :]) * weights[0]  # <1, z^i g>
    cond = np.linalg.cond(G)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularGram(f"shift Gram condition {cond:.3g}", condition=float(cond))
    c = scipy.linalg.solve(G, rhs, assume_a="her")
    return TruncatedSeries(S @ c)


def projection_error_curve(w: WeightSequence, g: TruncatedSeries, Ms=(5, 10, 20, 50)) -> list:
    """``||P_M(1) - g conj(g(0))||`` for each ``M``."""
    target = g.scale(np.conj(g.coeffs[0]))
    return [(M, norm(project_onto_shift_span(w, g, M) - target, w)) for M in Ms]


__all__ = [
    "MonomialVerdict",
    "SearchOutcome",
    "classify_polynomial_inner",
    "inner_residual",
    "minimize_inner_residual",
    "monomial_distance",
    "project_onto_shift_span",
    "projection_error_curve",
    "search_inner_polynomials",
    "OptimizerDiverged",
]
