"""Pure-Python (numpy) real-symmetric eigensolver kernels.

Same contract as the compiled ``_kernels`` module: Householder reduction to
tridiagonal form followed by the implicit-shift QL iteration, both following
the EISPACK ``tred2``/``tql2`` layout. Inner loops are vectorized with numpy
but the QL rotation chase stays a Python loop, so this backend is roughly two
orders of magnitude slower than the compiled one on 200x200 inputs.
"""

import math

import numpy as np

EPS = 2.0 ** -52


def tridiagonalize(a, want_vectors=True):
    """Reduce symmetric ``a`` to tridiagonal form.

    Returns ``(d, e, v)`` where ``d`` is the diagonal, ``e[1:]`` the
    subdiagonal (``e[0] == 0``) and ``v`` the accumulated orthogonal transform
    (``None`` when ``want_vectors`` is false).
    """
    v = np.array(a, dtype=np.float64, order="C", copy=True)
    n = v.shape[0]
    d = v[n - 1, :].copy()
    e = np.zeros(n)

    for i in range(n - 1, 0, -1):
        scale = np.abs(d[:i]).sum()
        h = 0.0
        if scale == 0.0:
            e[i] = d[i - 1]
            d[:i] = v[i - 1, :i]
            v[i, :i] = 0.0
            v[:i, i] = 0.0
        else:
            d[:i] /= scale
            h = float(d[:i] @ d[:i])
            f = d[i - 1]
            g = math.sqrt(h)
            if f > 0:
                g = -g
            e[i] = scale * g
            h -= f * g
            d[i - 1] = f - g
            v[:i, i] = d[:i]
            # the active block v[:i, :i] is kept exactly symmetric
            e[:i] = v[:i, :i] @ d[:i]
            e[:i] /= h
            f = float(e[:i] @ d[:i])
            hh = f / (h + h)
            e[:i] -= hh * d[:i]
            v[:i, :i] -= np.outer(e[:i], d[:i]) + np.outer(d[:i], e[:i])
            d[:i] = v[i - 1, :i]
            v[i, :i] = 0.0
        d[i] = h

    if not want_vectors:
        return np.diagonal(v).copy(), e, None

    for i in range(n - 1):
        v[n - 1, i] = v[i, i]
        v[i, i] = 1.0
        h = d[i + 1]
        if h != 0.0:
            dk = v[: i + 1, i + 1] / h
            g = v[: i + 1, i + 1] @ v[: i + 1, : i + 1]
            v[: i + 1, : i + 1] -= np.outer(dk, g)
        v[: i + 1, i + 1] = 0.0
    d = v[n - 1, :].copy()
    v[n - 1, :] = 0.0
    v[n - 1, n - 1] = 1.0
    e[0] = 0.0
    return d, e, v


def ql_implicit(d, e, v=None, max_iter=100):
    """Diagonalize the tridiagonal matrix ``(d, e)``.

    A copy of ``v`` (if given) receives the same rotations. Eigenvalues are
    returned sorted ascending with matching columns of ``v``. Returns
    ``(d, v, status)``; ``status`` is 0 on success, otherwise ``l + 1`` where
    ``l`` is the index of the eigenvalue that hit the iteration cap.
    """
    d = np.array(d, dtype=np.float64, copy=True)
    e = np.array(e, dtype=np.float64, copy=True)
    if v is not None:
        v = np.array(v, dtype=np.float64, copy=True)
    n = d.shape[0]
    e[:-1] = e[1:]
    e[n - 1] = 0.0
    f = 0.0
    tst1 = 0.0
    for l in range(n):
        tst1 = max(tst1, abs(d[l]) + abs(e[l]))
        m = l
        while m < n:
            if abs(e[m]) <= EPS * tst1:
                break
            m += 1
        if m > l:
            it = 0
            while True:
                it += 1
                if it > max_iter:
                    return d, v, l + 1
                g = d[l]
                p = (d[l + 1] - g) / (2.0 * e[l])
                r = math.hypot(p, 1.0)
                if p < 0:
                    r = -r
                d[l] = e[l] / (p + r)
                d[l + 1] = e[l] * (p + r)
                dl1 = d[l + 1]
                h = g - d[l]
                d[l + 2:] -= h
                f += h

                p = d[m]
                c = c2 = c3 = 1.0
                el1 = e[l + 1]
                s = s2 = 0.0
                for i in range(m - 1, l - 1, -1):
                    c3 = c2
                    c2 = c
                    s2 = s
                    g = c * e[i]
                    h = c * p
                    r = math.hypot(p, e[i])
                    e[i + 1] = s * r
                    s = e[i] / r
                    c = p / r
                    p = c * d[i] - s * g
                    d[i + 1] = h + s * (c * g + s * d[i])
                    if v is not None:
                        col = v[:, i + 1].copy()
                        v[:, i + 1] = s * v[:, i] + c * col
                        v[:, i] = c * v[:, i] - s * col
                p = -s * s2 * c3 * el1 * e[l] / dl1
                e[l] = s * p
                d[l] = c * p
                if abs(e[l]) <= EPS * tst1:
                    break
        d[l] += f
        e[l] = 0.0

    # stable selection sort, identical ordering rule to the compiled kernel
    for i in range(n - 1):
        k = i + int(np.argmin(d[i:]))
        if k != i and d[k] < d[i]:
            d[i], d[k] = d[k], d[i]
            if v is not None:
                v[:, [i, k]] = v[:, [k, i]]
    return d, v, 0
