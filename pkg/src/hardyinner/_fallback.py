"""Pure numpy versions of the compiled loops in ``_ext``.

Summation order matches the compiled code (strictly ascending index), so
identities that rely on identical rounding hold under either backend.
"""

import numpy as np

_BLOCK = 256


def horner(coeffs, points):
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    points = np.asarray(points, dtype=np.complex128)
    n = coeffs.shape[0]
    if n == 0:
        return np.zeros(points.shape[0], dtype=np.complex128)
    if n <= _BLOCK:
        acc = np.zeros(points.shape[0], dtype=np.complex128)
        for c in coeffs[::-1]:
            acc = acc * points + c
        return acc
    # Blocked evaluation: Vandermonde within a block, Horner in z**_BLOCK across blocks.
    powers = np.cumprod(
        np.concatenate([np.ones((points.shape[0], 1), complex),
                        np.repeat(points[:, None], _BLOCK - 1, axis=1)], axis=1),
        axis=1,
    )
    step = powers[:, -1] * points
    acc = np.zeros(points.shape[0], dtype=np.complex128)
    starts = range(0, n, _BLOCK)
    for s in reversed(starts):
        block = coeffs[s:s + _BLOCK]
        acc = acc * step + powers[:, :block.shape[0]] @ block
    return acc


def wdot(x, y, w):
    terms = (np.asarray(x) * np.conj(y)) * np.asarray(w)
    if terms.shape[0] == 0:
        return 0j
    return complex(np.add.accumulate(terms)[-1])


def _kahan(terms):
    acc = 0j
    comp = 0j
    for term in terms:
        y = term - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
    return acc


def moments(a, w, kmax, compensated=False):
    a = np.asarray(a, dtype=np.complex128)
    w = np.asarray(w, dtype=np.float64)
    n = a.shape[0]
    mu = np.zeros(kmax + 1, dtype=np.complex128)
    for k in range(min(kmax + 1, n)):
        terms = (a[: n - k] * np.conj(a[k:])) * w[k:n]
        if compensated:
            mu[k] = _kahan(terms.tolist())
        else:
            mu[k] = np.add.accumulate(terms)[-1]
    return mu


def residual_jacobian(a, w):
    a = np.asarray(a, dtype=np.complex128)
    w = np.asarray(w, dtype=np.float64)
    n = a.shape[0]
    mu = moments(a, w, n - 1)
    res = np.empty(2 * n - 1)
    res[0] = mu[0].real - 1.0
    res[1::2] = mu[1:].real
    res[2::2] = mu[1:].imag

    jac = np.zeros((2 * n - 1, 2 * n))
    idx = np.arange(n)
    cw = np.conj(a) * w
    for k in range(n):
        up = np.zeros(n, dtype=np.complex128)
        down = np.zeros(n, dtype=np.complex128)
        up[: n - k] = cw[k:]
        down[k:] = a[: n - k] * w[k:]
        d_re = up + down
        d_im = 1j * (up - down)
        if k == 0:
            jac[0, idx] = d_re.real
            jac[0, n + idx] = d_im.real
        else:
            row = 2 * k - 1
            jac[row, idx] = d_re.real
            jac[row, n + idx] = d_im.real
            jac[row + 1, idx] = d_re.imag
            jac[row + 1, n + idx] = d_im.imag
    return res, jac
