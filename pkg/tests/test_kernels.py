import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import SPACES, random_series
from hardyinner.errors import BoundaryNotAdmissible, TailBoundUnavailable
from hardyinner.kernels import (
    adaptive_truncation,
    check_point,
    closed_form_kernel,
    kernel_derivative_series,
    kernel_series,
    kernel_value,
)
from hardyinner.series import TruncatedSeries, derivative, evaluate, weighted_inner_product
from hardyinner.weights import WeightSequence

H2 = WeightSequence.dirichlet(0)
A2 = WeightSequence.dirichlet(-1)


def disc_point(rng, radius=0.9):
    return complex(radius * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform()))


def test_kernel_series_examples():
    assert np.allclose(kernel_series(H2, 0.5, 3).coeffs, [1, 0.5, 0.25, 0.125], rtol=0, atol=0)
    for w in SPACES:
        k = kernel_series(w, 0.0, 6)
        assert np.array_equal(k.coeffs, np.r_[1.0, np.zeros(6)])
    D2 = WeightSequence.dirichlet(2)
    k = kernel_series(D2, 1.0, 10**6)
    assert np.allclose(k.coeffs[:4], 1 / np.arange(1, 5) ** 2)
    assert abs(evaluate(k, 1.0) - math.pi**2 / 6) < 2e-6


def test_kernel_conjugates_point():
    k = kernel_series(H2, 0.5j, 2)
    assert np.allclose(k.coeffs, [1, -0.5j, -0.25])


def test_derivative_kernel_examples():
    for w in SPACES:
        k = kernel_derivative_series(w, 0.0, 2, 5)
        expected = np.zeros(6)
        expected[2] = 2 / w.array(3)[2]
        assert np.allclose(k.coeffs, expected, rtol=1e-15, atol=0)
    assert np.allclose(kernel_derivative_series(H2, 0.5, 1, 3).coeffs, [0, 1, 1.0, 0.75])
    with pytest.raises(BoundaryNotAdmissible):
        kernel_derivative_series(WeightSequence.dirichlet(1.5), 1.0, 1, 100)
    with pytest.raises(ValueError):
        kernel_derivative_series(H2, 0.5, -1, 3)


def test_boundary_admissibility_exact():
    for alpha in (-1, 0, 0.5, 1.0, 1.0000001, 1.5, 2, 3):
        ok = alpha > 1
        try:
            kernel_series(WeightSequence.dirichlet(alpha), 1j, 10)
            built = True
        except BoundaryNotAdmissible:
            built = False
        assert built == ok, alpha
    check_point(WeightSequence.dirichlet(3.5), -1.0, 1)
    with pytest.raises(BoundaryNotAdmissible):
        check_point(WeightSequence.dirichlet(3.0), -1.0, 1)
    with pytest.raises(ValueError):
        check_point(H2, 1.5)
    with pytest.raises(BoundaryNotAdmissible):
        check_point(WeightSequence.explicit([1, 2, 3]), 1.0)


def test_boundary_not_admissible_is_value_error():
    with pytest.raises(ValueError):
        kernel_series(H2, 1.0, 5)


@pytest.mark.parametrize("w", SPACES)
def test_reproducing_property(w):
    rng = np.random.default_rng(11)
    for _ in range(50):
        g = random_series(rng, int(rng.integers(0, 31)))
        a = disc_point(rng)
        k = kernel_series(w, a, g.degree + int(rng.integers(0, 5)))
        assert abs(weighted_inner_product(g, k, w) - evaluate(g, a)) < 1e-10 * max(1, abs(evaluate(g, a)))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_derivative_reproducing_property(m):
    rng = np.random.default_rng(m)
    for w in SPACES:
        for _ in range(20):
            g = random_series(rng, int(rng.integers(m, 25)))
            a = disc_point(rng)
            gm = g
            for _ in range(m):
                gm = derivative(gm)
            exact = evaluate(gm, a)
            got = weighted_inner_product(g, kernel_derivative_series(w, a, m, g.degree), w)
            assert abs(got - exact) < 1e-10 * max(1, abs(exact))


def test_kernel_value_examples():
    assert kernel_value(H2, 0.5, 0.5) == pytest.approx(4 / 3, rel=1e-15)
    assert kernel_value(A2, 0.5, 0.5) == pytest.approx(16 / 9, rel=1e-15)
    for w in SPACES:
        assert kernel_value(w, 0.0, 0.3 + 0.4j) == pytest.approx(1)


@pytest.mark.parametrize("w", [H2, A2])
def test_closed_form_matches_series(w):
    rng = np.random.default_rng(4)
    for _ in range(40):
        a, z = disc_point(rng), disc_point(rng)
        N = adaptive_truncation(w, abs(a) * abs(z), 1e-14)
        series = evaluate(kernel_series(w, a, N), z)
        assert abs(series - kernel_value(w, a, z)) < 1e-12 * abs(series)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(SPACES + [WeightSequence.dirichlet(1.5)]),
       st.floats(0, 0.9), st.floats(0, 2 * math.pi), st.floats(0, 0.9), st.floats(0, 2 * math.pi))
def test_kernel_hermitian(w, r1, t1, r2, t2):
    a, b = r1 * complex(math.cos(t1), math.sin(t1)), r2 * complex(math.cos(t2), math.sin(t2))
    x, y = kernel_value(w, a, b), kernel_value(w, b, a)
    assert abs(x - np.conj(y)) < 1e-12 * abs(x)


def test_closed_form_derivative_kernels():
    z = np.array([0.1, 0.3j, -0.5])
    for w in (H2, A2):
        for m in range(4):
            k = kernel_derivative_series(w, 0.4 - 0.2j, m, 400)
            assert np.allclose(evaluate(k, z), closed_form_kernel(w, 0.4 - 0.2j, m, z), rtol=1e-12)
    assert closed_form_kernel(WeightSequence.dirichlet(1), 0.5, 0, 0.1) is None


def test_adaptive_truncation_examples():
    assert adaptive_truncation(H2, 0.5, 1e-12) == 40
    assert abs(adaptive_truncation(H2, 0.9, 1e-12) - 280) <= 10
    for w in SPACES:
        assert adaptive_truncation(w, 0.0, 1e-12) == 1
    with pytest.raises(TailBoundUnavailable):
        adaptive_truncation(H2, 1.0, 1e-12)
    with pytest.raises(ValueError):
        adaptive_truncation(H2, 1.2, 1e-12)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SPACES), st.floats(0.01, 0.95), st.sampled_from([1e-6, 1e-10, 1e-14]))
def test_adaptive_truncation_bound_holds(w, r, tol):
    N = adaptive_truncation(w, r, tol)
    k = np.arange(N + 1, N + 20000)
    tail = np.sum(r**k / w.array(k[-1] + 1)[k])
    assert tail <= tol


def test_adaptive_truncation_boundary():
    D3 = WeightSequence.dirichlet(3)
    N = adaptive_truncation(D3, 1.0, 1e-6)
    assert D3.inverse_tail_bound(N) <= 1e-6 < D3.inverse_tail_bound(N - 1)


def test_explicit_weight_kernel_uses_tail():
    w = WeightSequence.explicit([1.0, 2.0, 3.0], tail_exponent=2.5)
    k = kernel_series(w, 1.0, 50)
    assert k.coeffs[1] == 0.5
    rng = np.random.default_rng(9)
    g = random_series(rng, 12)
    a = disc_point(rng)
    assert abs(weighted_inner_product(g, kernel_series(w, a, 12), w) - g(a)) < 1e-10 * max(1, abs(g(a)))
