"""Dense complex Hermitian eigensolver built on a real-symmetric kernel.

A Hermitian ``H = A + iB`` is embedded as the real symmetric matrix
``[[A, -B], [B, A]]`` of twice the size. Every eigenvalue of ``H`` appears
there exactly twice, and any real eigenvector ``(x, y)`` of the embedding maps
to the complex eigenvector ``x + iy`` of ``H``. The real problem is solved by
Householder tridiagonalization and implicit QL, using the compiled kernel when
it is importable and the numpy fallback otherwise.

Set ``HOFSTADTER_LAB_PURE_PYTHON=1`` before import to force the fallback.
"""

import os
from dataclasses import dataclass

import numpy as np

from . import _kernels_py
from .errors import ConvergenceError, NotHermitianError

try:
    if os.environ.get("HOFSTADTER_LAB_PURE_PYTHON"):
        raise ImportError("compiled kernels disabled by environment")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = ("compiled", "python") if _compiled is not None else ("python",)
DEFAULT_BACKEND = BACKENDS[0]

HERMITIAN_ATOL = 1e-12
MAX_QL_ITERATIONS = 100
# separation below which doubled eigenvalues are grouped into one cluster
CLUSTER_RTOL = 1e-12
# distinct but close levels are resolved together by a shifted Rayleigh-Ritz step
GROUP_RTOL = 1e-5
PHASE_TIE_RTOL = 1e-9
DEGENERACY_RTOL = 1e-9


def _kernel(backend):
    backend = backend or DEFAULT_BACKEND
    if backend == "compiled":
        if _compiled is None:
            raise ValueError("compiled kernels are not available in this build")
        return _compiled
    if backend == "python":
        return _kernels_py
    raise ValueError(f"unknown backend {backend!r}; choose from {BACKENDS}")


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues with phase-fixed unit eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __len__(self):
        return len(self.eigenvalues)


@dataclass(frozen=True)
class GroundPair:
    energy: float
    vector: np.ndarray
    gap: float
    degenerate: bool


def check_hermitian(h, atol=HERMITIAN_ATOL):
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {h.shape}")
    if h.shape[0] == 0:
        raise NotHermitianError("empty matrix")
    if not np.all(np.isfinite(h)):
        raise NotHermitianError("matrix has non-finite entries")
    scale = max(1.0, float(np.abs(h).max()))
    err = float(np.abs(h - h.conj().T).max())
    if err > atol * scale:
        raise NotHermitianError(f"max |H - H^dagger| = {err:.3e} exceeds {atol * scale:.1e}")
    return h


def embed_real(h):
    """Real symmetric ``2n x 2n`` embedding of a Hermitian matrix."""
    h = np.asarray(h)
    a = np.ascontiguousarray(h.real, dtype=np.float64)
    b = np.ascontiguousarray(h.imag, dtype=np.float64)
    n = a.shape[0]
    m = np.empty((2 * n, 2 * n))
    m[:n, :n] = a
    m[:n, n:] = -b
    m[n:, :n] = b
    m[n:, n:] = a
    # symmetrize exactly so the kernel sees a bitwise-symmetric input
    return 0.5 * (m + m.T)


def fix_phase(v):
    """Rotate ``v`` so its largest-modulus component is real and positive.

    Components within ``PHASE_TIE_RTOL`` of the maximum modulus count as tied;
    the lowest index wins.
    """
    v = np.asarray(v, dtype=np.complex128)
    mod = np.abs(v)
    top = mod.max()
    if top == 0.0:
        return v.copy()
    idx = int(np.flatnonzero(mod >= top * (1.0 - PHASE_TIE_RTOL))[0])
    out = v * (np.conj(v[idx]) / mod[idx])
    out[idx] = mod[idx]
    return out


def _solve_real(m, want_vectors, backend):
    k = _kernel(backend)
    d, e, z = k.tridiagonalize(m, want_vectors)
    w, z, status = k.ql_implicit(d, e, z, MAX_QL_ITERATIONS)
    if status:
        raise ConvergenceError(MAX_QL_ITERATIONS, status - 1)
    return w, z


def eigvalsh(h, backend=None):
    """Sorted eigenvalues of a Hermitian matrix."""
    h = check_hermitian(h)
    w, _ = _solve_real(embed_real(h), False, backend)
    return 0.5 * (w[0::2] + w[1::2])


def _orthonormal_pick(candidates, count):
    """Pivoted modified Gram-Schmidt: ``count`` orthonormal vectors spanning the candidates."""
    rest = [c.copy() for c in candidates]
    picked = []
    for _ in range(count):
        norms = [np.linalg.norm(c) for c in rest]
        j = int(np.argmax(norms))
        if norms[j] < 1e-6:
            raise ConvergenceError(0)
        q = rest.pop(j) / norms[j]
        for _ in range(2):
            for p in picked:
                q = q - np.vdot(p, q) * p
            q = q / np.linalg.norm(q)
        picked.append(q)
        rest = [c - np.vdot(q, c) * q for c in rest]
    return picked


def eigh(h, backend=None, _refine=True):
    """Full decomposition of a Hermitian matrix.

    Eigenvalues ascend; column ``k`` of ``eigenvectors`` pairs with
    eigenvalue ``k`` and obeys the :func:`fix_phase` convention. Inside an
    exactly or nearly degenerate cluster the basis is orthonormalized but is
    otherwise an arbitrary (deterministic) choice.
    """
    h = check_hermitian(h)
    n = h.shape[0]
    w, z = _solve_real(embed_real(h), True, backend)
    cands = z[:n, :] + 1j * z[n:, :]

    scale = max(1.0, float(np.abs(w).max()))
    values = 0.5 * (w[0::2] + w[1::2])
    clusters = []
    start = 0
    while start < 2 * n:
        stop = start + 2
        while stop < 2 * n and w[stop] - w[stop - 1] <= CLUSTER_RTOL * scale:
            stop += 2
        clusters.append((start, stop))
        start = stop

    # Vectors of levels separated by a small gap are individually accurate
    # only to ~eps/gap; resolving them jointly restores orthogonality.
    groups = [[clusters[0]]]
    for c in clusters[1:]:
        if _refine and w[c[0]] - w[groups[-1][-1][1] - 1] <= GROUP_RTOL * scale:
            groups[-1].append(c)
        else:
            groups.append([c])

    vectors = np.empty((n, n), dtype=np.complex128)
    for group in groups:
        lo, hi = group[0][0], group[-1][1]
        count = (hi - lo) // 2
        basis = np.column_stack(_orthonormal_pick([cands[:, j] for j in range(lo, hi)], count))
        if len(group) > 1:
            shift = float(values[lo // 2:hi // 2].mean())
            m = basis.conj().T @ (h - shift * np.eye(n)) @ basis
            inner = eigh(0.5 * (m + m.conj().T), backend, _refine=False)
            basis = basis @ inner.eigenvectors
        for k in range(count):
            vectors[:, lo // 2 + k] = fix_phase(basis[:, k])
    return EigenDecomposition(values, vectors)


def ground_pair(dec):
    if len(dec) < 2:
        raise ValueError("ground_pair needs at least two levels")
    e0, e1 = float(dec.eigenvalues[0]), float(dec.eigenvalues[1])
    gap = e1 - e0
    degenerate = gap < DEGENERACY_RTOL * max(1.0, abs(e0))
    return GroundPair(e0, dec.eigenvectors[:, 0].copy(), gap, degenerate)
