# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Must stay interchangeable with ``_fallback``."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def horner(const double complex[::1] coeffs, const double complex[::1] points):
    # real arithmetic, points advanced together so the chains interleave
    cdef Py_ssize_t n = coeffs.shape[0], m = points.shape[0]
    cdef Py_ssize_t i, j
    cdef double cr, ci, t
    out = np.zeros(m, dtype=np.complex128)
    cdef double complex[::1] res = out
    if m == 0:
        return out
    zr = np.ascontiguousarray(np.real(points), dtype=np.float64)
    zi = np.ascontiguousarray(np.imag(points), dtype=np.float64)
    cdef double[::1] xr = zr, xi = zi
    cdef double[::1] ar = np.zeros(m), ai = np.zeros(m)
    with nogil:
        for j in range(n - 1, -1, -1):
            cr = coeffs[j].real
            ci = coeffs[j].imag
            for i in range(m):
                t = ar[i] * xr[i] - ai[i] * xi[i] + cr
                ai[i] = ar[i] * xi[i] + ai[i] * xr[i] + ci
                ar[i] = t
        for i in range(m):
            res[i].real = ar[i]
            res[i].imag = ai[i]
    return out


def wdot(const double complex[::1] x, const double complex[::1] y, const double[::1] w):
    cdef Py_ssize_t n = x.shape[0], j
    cdef double complex acc = 0
    for j in range(n):
        acc = acc + (x[j] * y[j].conjugate()) * w[j]
    return complex(acc)


def moments(const double complex[::1] a, const double[::1] w, Py_ssize_t kmax, bint compensated=False):
    cdef Py_ssize_t n = a.shape[0], k, j
    cdef double complex acc, term, comp, y, t, bc
    out = np.zeros(kmax + 1, dtype=np.complex128)
    cdef double complex[::1] mu = out
    for k in range(min(kmax + 1, n)):
        acc = 0
        comp = 0
        for j in range(n - k):
            bc = a[j + k].conjugate()
            term = (a[j] * bc) * w[j + k]
            if compensated:
                y = term - comp
                t = acc + y
                comp = (t - acc) - y
                acc = t
            else:
                acc = acc + term
        mu[k] = acc
    return out


def residual_jacobian(const double complex[::1] a, const double[::1] w):
    """Stacked residual (Re mu_0 - 1, Re/Im mu_k) and its Jacobian in (Re a, Im a)."""
    cdef Py_ssize_t n = a.shape[0], k, j, row
    cdef double complex mu, d, e
    res_arr = np.zeros(2 * n - 1, dtype=np.float64)
    jac_arr = np.zeros((2 * n - 1, 2 * n), dtype=np.float64)
    cdef double[::1] res = res_arr
    cdef double[:, ::1] jac = jac_arr
    cdef double complex up, down
    for k in range(n):
        mu = 0
        for j in range(n - k):
            mu = mu + (a[j] * a[j + k].conjugate()) * w[j + k]
        row = 0 if k == 0 else 2 * k - 1
        if k == 0:
            res[0] = mu.real - 1.0
        else:
            res[row] = mu.real
            res[row + 1] = mu.imag
        for j in range(n):
            up = 0
            down = 0
            if j + k < n:
                up = a[j + k].conjugate() * w[j + k]
            if j - k >= 0:
                down = a[j - k] * w[j]
            # d mu / d Re a_j = up + down ; d mu / d Im a_j = i (up - down)
            d = up + down
            e = up - down
            jac[row, j] = d.real
            jac[row, n + j] = -e.imag
            if k > 0:
                jac[row + 1, j] = d.imag
                jac[row + 1, n + j] = e.real
    return res_arr, jac_arr
