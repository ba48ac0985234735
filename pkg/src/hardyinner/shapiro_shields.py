"""Shapiro-Shields functions: the RKHS analogue of finite Blaschke products.

For a zero set ``Z`` the Shapiro-Shields function ``h_Z`` is the normalized
residual of a representer ``r`` after orthogonal projection onto the span
``V`` of the (confluent) kernels at ``Z``.  Two independent routes compute it:

* :func:`shapiro_shields_determinant` expands the bordered Gram determinant
  along its function column (cofactors from LU determinants);
* :func:`projection_oracle` solves the Hermitian Gram system directly.

``r`` is the constant 1 when ``0`` is not in ``Z``; when ``0`` has multiplicity
``s`` it is the representer ``s! z^s / w_s`` of ``g -> g^(s)(0)``, which is
the structural form of the limit of simple-zero constructions.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath
import numpy as np
import scipy.linalg

from .errors import (
    BoundaryNotAdmissible,
    DegenerateFit,
    SingularGram,
    TailBoundUnavailable,
    UnsupportedSpace,
)
from .kernels import (
    adaptive_truncation,
    check_point,
    closed_form_kernel,
    kernel_derivative_series,
    on_boundary,
)
from .series import (
    TruncatedSeries,
    align_phase,
    derivative,
    evaluate,
    max_coeff_diff,
    norm,
    phase_gauge,
)
from .weights import WeightSequence

GRAM_CONDITION_LIMIT = 1e12
INTERIOR_TOL = 1e-14
BOUNDARY_TOL = 1e-3
BOUNDARY_MAX_DEGREE = 2**20
DETERMINANT_DPS = 40
EXTENDED_MAX_DEGREE = 4096


@dataclass(frozen=True)
class ZeroSet:
    """Prescribed zeros ``(point, multiplicity)``; exact repeats are merged."""

    entries: tuple = ()

    def __post_init__(self):
        merged: dict = {}
        for item in self.entries:
            if isinstance(item, (tuple, list)):
                z, m = complex(item[0]), int(item[1])
            else:
                z, m = complex(item), 1
            if m < 1:
                raise ValueError("multiplicities must be at least 1")
            if not (cmath.isfinite(z) and abs(z) <= 1.0 + 1e-12):
                raise ValueError(f"zero {z} lies outside the closed disc")
            merged[z] = merged.get(z, 0) + m
        object.__setattr__(self, "entries", tuple(merged.items()))

    @classmethod
    def of(cls, *items) -> "ZeroSet":
        return cls(tuple(items))

    @property
    def t(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def origin_multiplicity(self) -> int:
        return dict(self.entries).get(0j, 0)

    @property
    def has_boundary(self) -> bool:
        return any(on_boundary(z) for z, _ in self.entries)

    @property
    def is_simple(self) -> bool:
        """All points distinct, nonzero, multiplicity one."""
        return all(m == 1 and z != 0 for z, m in self.entries)

    def multiplicity_of(self, z0: complex, tol: float = 1e-12) -> int:
        return sum(m for z, m in self.entries if abs(z - z0) <= tol)

    def to_json(self) -> list:
        return [{"re": z.real, "im": z.imag, "mult": m} for z, m in self.entries]

    @classmethod
    def from_json(cls, items) -> "ZeroSet":
        return cls(tuple((complex(d["re"], d.get("im", 0.0)), int(d.get("mult", 1))) for d in items))


@dataclass
class ShapiroShieldsResult:
    f: TruncatedSeries
    h: TruncatedSeries
    cofactors: np.ndarray
    gram_condition: float
    construction: str
    N: int
    space: WeightSequence
    zeros: ZeroSet
    labels: list = field(default_factory=list)
    representer_order: int = 0
    combination: Optional[np.ndarray] = None
    convergence: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "construction": self.construction,
            "N": self.N,
            "gram_condition": self.gram_condition,
            "norm_f": norm(self.f, self.space),
            "norm_h": norm(self.h, self.space),
            "representer_order": self.representer_order,
            "cofactors": [[c.real, c.imag] for c in self.cofactors],
            "convergence": self.convergence,
        }


def build_confluent_basis(w: WeightSequence, Z: ZeroSet, N: int) -> list:
    """Kernels and their conj(a)-derivatives, one per prescribed vanishing condition.

    Points keep their input order and derivative orders ascend; origin
    conditions use ``i! z^i / w_i``, the derivative kernels at ``0``.
    """
    return [kernel_derivative_series(w, z, i, N) for z, m in Z.entries for i in range(m)]


def _labels_in_order(Z: ZeroSet):
    return [(z, i) for z, m in Z.entries for i in range(m)]


def default_truncation(w: WeightSequence, Z: ZeroSet) -> int:
    s = Z.origin_multiplicity
    floor = Z.t + s + 2
    if Z.has_boundary:
        try:
            N = adaptive_truncation(w, 1.0, BOUNDARY_TOL, max_degree=BOUNDARY_MAX_DEGREE)
        except TailBoundUnavailable:
            N = BOUNDARY_MAX_DEGREE
        return max(N, floor)
    r = max((abs(z) for z, _ in Z.entries), default=0.0)
    mmax = max((m for _, m in Z.entries), default=1)
    N = adaptive_truncation(w, r, INTERIOR_TOL) + 8 * mmax
    return max(N, floor)


def _validate(w: WeightSequence, Z: ZeroSet) -> None:
    for z, m in Z.entries:
        check_point(w, z, m - 1)


def _setup(w: WeightSequence, Z: ZeroSet, N: Optional[int]):
    _validate(w, Z)
    if N is None:
        N = default_truncation(w, Z)
    s = Z.origin_multiplicity
    if N < Z.t + s:
        raise ValueError(f"degree {N} too small for {Z.t} vanishing conditions")
    rep = kernel_derivative_series(w, 0j, s, N)
    basis = build_confluent_basis(w, Z, N)
    weights = w.array(N + 1)
    B = np.array([b.coeffs for b in basis]).reshape(len(basis), N + 1)
    cond = 1.0
    if basis:
        G = (np.conj(B) * weights) @ B.T  # G[j, k] = <b_k, b_j>
        scale = 1.0 / np.sqrt(np.real(np.diag(G)))
        cond = float(np.linalg.cond(G * np.outer(scale, scale)))
        if not np.isfinite(cond) or cond > GRAM_CONDITION_LIMIT:
            raise SingularGram(
                f"Gram condition {cond:.3g} exceeds {GRAM_CONDITION_LIMIT:g}", condition=cond
            )
    return N, s, rep, B, weights, cond


def _finish(w, Z, N, s, f_coeffs, combo, cond, construction) -> ShapiroShieldsResult:
    """``combo`` holds the coefficients of (r, b_1, ..., b_t) giving f."""
    f = TruncatedSeries(f_coeffs)
    nf = norm(f, w)
    if nf == 0:
        raise SingularGram("constructed function vanishes identically")
    h_raw = f.scale(1.0 / nf)
    h = phase_gauge(h_raw)
    big = int(np.argmax(np.abs(h_raw.coeffs)))
    phase = h.coeffs[big] / h_raw.coeffs[big]
    return ShapiroShieldsResult(
        f=f,
        h=h,
        cofactors=combo,
        gram_condition=cond,
        construction=construction,
        N=N,
        space=w,
        zeros=Z,
        labels=[(0j, s)] + _labels_in_order(Z),
        representer_order=s,
        combination=combo * phase / nf,
    )


def _bordered_extended(B, weights, rep, dps):
    t, n = B.shape
    with mpmath.workdps(dps):
        mpc, fsum = mpmath.mpc, mpmath.fsum
        rows = [[mpc(complex(x)) for x in row] for row in B]
        rep_mp = [mpc(complex(x)) for x in rep]
        w_mp = [mpmath.mpf(float(x)) for x in weights]
        # conj(b_l) w, reused for every product <., b_l>
        dual = [[mpmath.conj(x) * wk for x, wk in zip(row, w_mp)] for row in rows]
        A = mpmath.matrix(t + 1, max(t, 1))
        for l in range(t):
            A[0, l] = fsum(x * y for x, y in zip(rep_mp, dual[l]))
            for j in range(t):
                A[j + 1, l] = fsum(x * y for x, y in zip(rows[j], dual[l]))
        combo = []
        for i in range(t + 1):
            if t == 0:
                combo.append(mpc(1))
                continue
            minor = mpmath.matrix([[A[r, c] for c in range(t)] for r in range(t + 1) if r != i])
            combo.append((-1) ** i * mpmath.det(minor))
        biggest = max(abs(c) for c in combo)
        combo = [c / biggest for c in combo]
        f = [combo[0] * rep_mp[k] + fsum(combo[j + 1] * rows[j][k] for j in range(t)) for k in range(n)]
        return np.array([complex(x) for x in f]), np.array([complex(c) for c in combo])


def _bordered_double(B, weights, rep):
    t = B.shape[0]
    if t == 0:
        return rep.copy(), np.ones(1, dtype=np.complex128)
    dual = np.conj(B) * weights
    A = np.zeros((t + 1, t), dtype=np.complex128)
    A[0] = dual @ rep
    A[1:] = B @ dual.T  # <b_j, b_l>
    combo = np.array([(-1) ** i * np.linalg.det(np.delete(A, i, axis=0)) for i in range(t + 1)])
    combo /= np.max(np.abs(combo))
    return combo[0] * rep + combo[1:] @ B, combo


def shapiro_shields_determinant(w: WeightSequence, Z: ZeroSet, N: Optional[int] = None,
                                dps: int = DETERMINANT_DPS) -> ShapiroShieldsResult:
    """Bordered determinant: column 0 holds the functions (r, b_1, ..., b_t),
    row 0 the products ``<r, b_l>`` and the block ``<b_j, b_l>``.

    For zeros away from the origin this is the classical matrix with a row
    of ones and block ``k_{z_j}(z_l)``.  Expanding along column 0 gives
    ``f = C_0 r + sum C_j b_j``.  The cofactor expansion cancels heavily
    when zeros cluster, so products, determinants and the recombination run
    at ``dps`` decimal digits on the double-precision basis coefficients.
    """
    N, s, rep, B, weights, cond = _setup(w, Z, N)
    t = B.shape[0]
    if t > 16:
        raise ValueError("determinant route supports at most 16 vanishing conditions")
    if N > EXTENDED_MAX_DEGREE:
        f_coeffs, combo = _bordered_double(B, weights, rep.coeffs)
    else:
        f_coeffs, combo = _bordered_extended(B, weights, rep.coeffs, dps)
    return _finish(w, Z, N, s, f_coeffs, combo, cond, "determinant")


def projection_oracle(w: WeightSequence, Z: ZeroSet, N: Optional[int] = None) -> ShapiroShieldsResult:
    """Residual ``r - P_V r`` from a pivoted Hermitian solve of the Gram system,
    followed by one refinement pass on the residual."""
    N, s, rep, B, weights, cond = _setup(w, Z, N)
    t = B.shape[0]
    combo = np.ones(t + 1, dtype=np.complex128)
    resid = rep.coeffs.copy()
    if t:
        G = (np.conj(B) * weights) @ B.T
        scale = 1.0 / np.sqrt(np.real(np.diag(G)))
        Bs = B * scale[:, None]
        Gs = G * np.outer(scale, scale)
        dual = np.conj(Bs) * weights
        c = np.zeros(t, dtype=np.complex128)
        for _ in range(2):
            c += scipy.linalg.solve(Gs, dual @ resid, assume_a="her")
            resid = rep.coeffs - c @ Bs
        combo[1:] = -c * scale
    return _finish(w, Z, N, s, resid, combo, cond, "projection")


def _perturbed(Z: ZeroSet, eps: float) -> ZeroSet:
    items = []
    for z, m in Z.entries:
        if m == 1 and z != 0:
            items.append((z, 1))
            continue
        for i in range(m):
            items.append((z + eps * cmath.exp(2j * cmath.pi * i / m), 1))
    return ZeroSet(tuple(items))


def perturbation_limit(
    w: WeightSequence,
    Z: ZeroSet,
    epsilons: Sequence[float] = (1e-2, 1e-3, 1e-4),
    N: Optional[int] = None,
) -> ShapiroShieldsResult:
    """Limit of simple-zero Shapiro-Shields functions as perturbations shrink.

    Repeated points and the origin are split into ``m`` points
    ``z + eps * exp(2 pi i j / m)``.  The returned result is the last iterate;
    its ``convergence`` table lists coefficient gaps between iterates.
    """
    if Z.is_simple:
        res = shapiro_shields_determinant(w, Z, N)
        return res
    eps = [float(e) for e in epsilons]
    if not eps or any(e < 1e-6 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("epsilons must be strictly decreasing and >= 1e-6")
    if N is None:
        N = default_truncation(w, _perturbed(Z, eps[0]))
    table = []
    prev = None
    res = None
    for e in eps:
        try:
            res = shapiro_shields_determinant(w, _perturbed(Z, e), N)
        except SingularGram as exc:
            raise SingularGram(f"{exc} at epsilon={e:g}", condition=exc.condition, epsilon=e) from exc
        gap = None if prev is None else max_coeff_diff(align_phase(res.h, prev), prev)
        table.append({"epsilon": e, "difference": gap, "gram_condition": res.gram_condition})
        prev = res.h
    res.construction = "perturbation_limit"
    res.zeros = Z
    res.convergence = table
    return res


ROUTES = {
    "determinant": shapiro_shields_determinant,
    "projection": projection_oracle,
    "limit": perturbation_limit,
}


def shapiro_shields(w: WeightSequence, Z: ZeroSet, N: Optional[int] = None, route: str = "determinant"):
    try:
        fn = ROUTES[route]
    except KeyError:
        raise ValueError(f"unknown route {route!r}") from None
    return fn(w, Z, N=N)


def convergence_is_monotone(table: list) -> bool:
    gaps = [row["difference"] for row in table if row["difference"] is not None]
    return all(b < a for a, b in zip(gaps, gaps[1:]))


# -- zero verification -------------------------------------------------------


@dataclass
class VanishingEntry:
    point: complex
    multiplicity: int
    boundary: bool
    values: list
    passed: bool

    def to_dict(self) -> dict:
        return {
            "point": [self.point.real, self.point.imag],
            "multiplicity": self.multiplicity,
            "boundary": self.boundary,
            "values": self.values,
            "passed": self.passed,
        }


def verify_vanishing(res: ShapiroShieldsResult, Z: Optional[ZeroSet] = None, tol: float = 1e-8,
                     radii=(1e-1, 1e-2, 1e-3, 1e-4)) -> list:
    """Check ``h^(i)(z_j) = 0`` for ``i < m_j``.

    Boundary zeros are checked on the truncated polynomial at the point and
    along the radius ``(1 - r) z_j``, which must decrease towards it.
    """
    Z = res.zeros if Z is None else Z
    out = []
    for z, m in Z.entries:
        if on_boundary(z):
            radial = [abs(evaluate(res.h, (1.0 - r) * z)) for r in radii]
            at = abs(evaluate(res.h, z))
            ok = at <= tol and all(b <= a for a, b in zip(radial, radial[1:]))
            out.append(VanishingEntry(z, m, True, radial + [at], bool(ok)))
            continue
        vals = []
        g = res.h
        for _ in range(m):
            vals.append(abs(evaluate(g, z)))
            g = derivative(g)
        out.append(VanishingEntry(z, m, False, vals, bool(max(vals) <= tol)))
    return out


# -- growth near the reflected points ----------------------------------------


@dataclass
class GrowthReport:
    center: complex
    radii: list
    values: list
    slope: float

    def to_dict(self) -> dict:
        return {
            "center": [self.center.real, self.center.imag],
            "radii": self.radii,
            "values": self.values,
            "slope": self.slope,
        }


def continuation(res: ShapiroShieldsResult, z):
    """Closed-form analytic continuation of ``h_Z`` (Hardy and Bergman weights only)."""
    w = res.space
    if closed_form_kernel(w, 0.0, 0, 0.0) is None:
        raise UnsupportedSpace("no closed-form kernel continuation for this weight")
    z = np.asarray(z, dtype=np.complex128)
    total = np.zeros_like(z)
    for (point, order), c in zip(res.labels, res.combination):
        total = total + c * closed_form_kernel(w, point, order, z)
    return total


def singularity_probe(res: ShapiroShieldsResult, point: complex, radii=(1e-1, 1e-2, 1e-3, 1e-4),
                      center: Optional[complex] = None, directions: int = 8) -> GrowthReport:
    """Largest ``|h|`` on circles around ``1/conj(point)`` (or ``center``)."""
    if center is None:
        if point == 0 or on_boundary(point) or abs(point) > 1:
            raise ValueError("probe point must be a nonzero interior zero")
        center = 1.0 / np.conj(complex(point))
    theta = 2 * np.pi * (np.arange(directions) + 0.5) / directions
    values = []
    for rho in radii:
        ring = center + rho * np.exp(1j * theta)
        values.append(float(np.max(np.abs(continuation(res, ring)))))
    slope = float(np.polyfit(np.log(radii), np.log(values), 1)[0])
    return GrowthReport(complex(center), list(radii), values, slope)


# -- local order and extraneous zeros ----------------------------------------


@dataclass
class LocalOrder:
    exponent: float
    residual: float
    radii: list
    values: list
    boundary: bool

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "residual": self.residual,
            "radii": self.radii,
            "values": self.values,
            "boundary": self.boundary,
        }


def local_order_estimate(h: TruncatedSeries, z0: complex, r_min: float = 1e-4, r_max: float = 1e-2,
                         samples: int = 12, directions: int = 16) -> LocalOrder:
    """Slope of ``log |h|`` against ``log r`` near ``z0``.

    Interior points use the maximum over a circle of radius ``r``; boundary
    points use the radius ``(1 - r) z0`` inside the disc.
    """
    if not 0 < r_min < r_max:
        raise ValueError("need 0 < r_min < r_max")
    z0 = complex(z0)
    radii = np.geomspace(r_min, r_max, samples)
    boundary = on_boundary(z0)
    if boundary:
        vals = np.abs(evaluate(h, (1.0 - radii) * z0))
    else:
        theta = 2 * np.pi * np.arange(directions) / directions
        pts = z0 + radii[:, None] * np.exp(1j * theta)[None, :]
        vals = np.max(np.abs(evaluate(h, pts)), axis=1)
    if not np.all(vals > 0):
        raise DegenerateFit(f"h vanishes on sample points near {z0}")
    x, y = np.log(radii), np.log(vals)
    coef, resid, *_ = np.polyfit(x, y, 1, full=True)
    rms = float(np.sqrt(resid[0] / samples)) if resid.size else 0.0
    return LocalOrder(float(coef[0]), rms, radii.tolist(), vals.tolist(), boundary)


@dataclass
class RegularityVerdict:
    point: complex
    prescribed: int
    estimate: LocalOrder
    verdict: str  # "regular" | "extraneous"

    def to_dict(self) -> dict:
        return {
            "point": [self.point.real, self.point.imag],
            "prescribed": self.prescribed,
            "estimated_order": self.estimate.exponent,
            "fit_residual": self.estimate.residual,
            "verdict": self.verdict,
        }


def regularity_check(res, Z: Optional[ZeroSet], z0: complex, tol_exponent: float = 0.1, **kwargs) -> RegularityVerdict:
    """Regular iff the local order at ``z0`` matches its multiplicity in ``Z``."""
    h = res.h if isinstance(res, ShapiroShieldsResult) else res
    if Z is None:
        Z = res.zeros
    k = Z.multiplicity_of(z0)
    est = local_order_estimate(h, z0, **kwargs)
    verdict = "regular" if abs(est.exponent - k) <= tol_exponent else "extraneous"
    return RegularityVerdict(complex(z0), k, est, verdict)


__all__ = [
    "BoundaryNotAdmissible",
    "ZeroSet",
    "ShapiroShieldsResult",
    "build_confluent_basis",
    "shapiro_shields_determinant",
    "projection_oracle",
    "perturbation_limit",
    "shapiro_shields",
    "verify_vanishing",
    "singularity_probe",
    "local_order_estimate",
    "regularity_check",
]
