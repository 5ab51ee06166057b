# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled real-symmetric eigensolver kernels (tred2 / tql2 layout).

Drop-in replacement for ``hofstadter_lab._kernels_py``. The transform matrix
is held column-major so every inner loop walks contiguous memory, and both
kernels run without the GIL so threads can sweep parameters in parallel.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, hypot

cnp.import_array()

cdef double EPS = 2.0 ** -52


cdef void _tred2(double[::1, :] v, double[::1] d, double[::1] e,
                 bint want_vectors) noexcept nogil:
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double scale, h, f, g, hh

    for j in range(n):
        d[j] = v[n - 1, j]

    for i in range(n - 1, 0, -1):
        scale = 0.0
        h = 0.0
        for k in range(i):
            scale += fabs(d[k])
        if scale == 0.0:
            e[i] = d[i - 1]
            for j in range(i):
                d[j] = v[i - 1, j]
                v[i, j] = 0.0
                v[j, i] = 0.0
        else:
            for k in range(i):
                d[k] /= scale
                h += d[k] * d[k]
            f = d[i - 1]
            g = sqrt(h)
            if f > 0:
                g = -g
            e[i] = scale * g
            h = h - f * g
            d[i - 1] = f - g
            for j in range(i):
                e[j] = 0.0
            for j in range(i):
                f = d[j]
                v[j, i] = f
                g = e[j] + v[j, j] * f
                for k in range(j + 1, i):
                    g += v[k, j] * d[k]
                    e[k] += v[k, j] * f
                e[j] = g
            f = 0.0
            for j in range(i):
                e[j] /= h
                f += e[j] * d[j]
            hh = f / (h + h)
            for j in range(i):
                e[j] -= hh * d[j]
            for j in range(i):
                f = d[j]
                g = e[j]
                for k in range(j, i):
                    v[k, j] -= f * e[k] + g * d[k]
                d[j] = v[i - 1, j]
                v[i, j] = 0.0
        d[i] = h

    if not want_vectors:
        for i in range(n):
            d[i] = v[i, i]
        return

    for i in range(n - 1):
        v[n - 1, i] = v[i, i]
        v[i, i] = 1.0
        h = d[i + 1]
        if h != 0.0:
            for k in range(i + 1):
                d[k] = v[k, i + 1] / h
            for j in range(i + 1):
                g = 0.0
                for k in range(i + 1):
                    g += v[k, i + 1] * v[k, j]
                for k in range(i + 1):
                    v[k, j] -= g * d[k]
        for k in range(i + 1):
            v[k, i + 1] = 0.0
    for j in range(n):
        d[j] = v[n - 1, j]
        v[n - 1, j] = 0.0
    v[n - 1, n - 1] = 1.0
    e[0] = 0.0


cdef int _tql2(double[::1] d, double[::1] e, double[::1, :] v,
               bint want_vectors, int max_iter) noexcept nogil:
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i, j, k, l, m
    cdef int it
    cdef double f = 0.0, tst1 = 0.0
    cdef double g, p, r, dl1, h, c, c2, c3, el1, s, s2, tmp

    for i in range(1, n):
        e[i - 1] = e[i]
    e[n - 1] = 0.0

    for l in range(n):
        tmp = fabs(d[l]) + fabs(e[l])
        if tmp > tst1:
            tst1 = tmp
        m = l
        while m < n:
            if fabs(e[m]) <= EPS * tst1:
                break
            m += 1
        if m > l:
            it = 0
            while True:
                it += 1
                if it > max_iter:
                    return <int>(l + 1)
                g = d[l]
                p = (d[l + 1] - g) / (2.0 * e[l])
                r = hypot(p, 1.0)
                if p < 0:
                    r = -r
                d[l] = e[l] / (p + r)
                d[l + 1] = e[l] * (p + r)
                dl1 = d[l + 1]
                h = g - d[l]
                for i in range(l + 2, n):
                    d[i] -= h
                f += h

                p = d[m]
                c = 1.0
                c2 = 1.0
                c3 = 1.0
                el1 = e[l + 1]
                s = 0.0
                s2 = 0.0
                i = m - 1
                while i >= l:
                    c3 = c2
                    c2 = c
                    s2 = s
                    g = c * e[i]
                    h = c * p
                    r = hypot(p, e[i])
                    e[i + 1] = s * r
                    s = e[i] / r
                    c = p / r
                    p = c * d[i] - s * g
                    d[i + 1] = h + s * (c * g + s * d[i])
                    if want_vectors:
                        for k in range(n):
                            h = v[k, i + 1]
                            v[k, i + 1] = s * v[k, i] + c * h
                            v[k, i] = c * v[k, i] - s * h
                    i -= 1
                p = -s * s2 * c3 * el1 * e[l] / dl1
                e[l] = s * p
                d[l] = c * p
                if fabs(e[l]) <= EPS * tst1:
                    break
        d[l] = d[l] + f
        e[l] = 0.0

    for i in range(n - 1):
        k = i
        p = d[i]
        for j in range(i + 1, n):
            if d[j] < p:
                k = j
                p = d[j]
        if k != i:
            d[k] = d[i]
            d[i] = p
            if want_vectors:
                for j in range(n):
                    tmp = v[j, i]
                    v[j, i] = v[j, k]
                    v[j, k] = tmp
    return 0


def tridiagonalize(a, want_vectors=True):
    """See ``hofstadter_lab._kernels_py.tridiagonalize``."""
    cdef double[::1, :] v = np.array(a, dtype=np.float64, order="F", copy=True)
    cdef Py_ssize_t n = v.shape[0]
    d = np.zeros(n)
    e = np.zeros(n)
    cdef double[::1] dv = d
    cdef double[::1] ev = e
    cdef bint wv = bool(want_vectors)
    if n == 0:
        return d, e, (np.asarray(v) if wv else None)
    with nogil:
        _tred2(v, dv, ev, wv)
    return d, e, (np.asarray(v) if wv else None)


def ql_implicit(d, e, v=None, int max_iter=100):
    """See ``hofstadter_lab._kernels_py.ql_implicit``."""
    dd = np.array(d, dtype=np.float64, copy=True)
    ee = np.array(e, dtype=np.float64, copy=True)
    cdef double[::1] dv = dd
    cdef double[::1] ev = ee
    cdef bint wv = v is not None
    cdef double[::1, :] vv
    if wv:
        vv = np.array(v, dtype=np.float64, order="F", copy=True)
    else:
        vv = np.zeros((1, 1), order="F")
    cdef int status
    if dd.shape[0] == 0:
        return dd, v, 0
    with nogil:
        status = _tql2(dv, ev, vv, wv, max_iter)
    return dd, (np.asarray(vv) if wv else None), status
