import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hofstadter_lab import eigensolver
from hofstadter_lab.errors import ConvergenceError, NotHermitianError

from conftest import random_hermitian


def sturm_count(h, x):
    """Eigenvalues below ``x``, from the inertia of ``H - x`` via an LDL^H pivot sweep."""
    a = np.array(h, dtype=complex) - x * np.eye(len(h))
    count = 0
    for k in range(len(a)):
        piv = a[k, k].real
        if piv == 0.0:
            piv = -1e-300
        if piv < 0:
            count += 1
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:]) / piv
    return count


def bisect_eigs(h, tol=1e-13):
    """Independent oracle: every eigenvalue located by bisection on the Sturm count."""
    r = np.abs(h).sum(axis=1).max() + 1.0
    out = []
    for k in range(len(h)):
        lo, hi = -r, r
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if sturm_count(h, mid) > k:
                hi = mid
            else:
                lo = mid
        out.append(0.5 * (lo + hi))
    return np.array(out)


@pytest.mark.parametrize("n", [1, 2, 5, 8])
def test_eigenvalues_match_bisection_oracle(backend, rng, n):
    h = random_hermitian(rng, n)
    np.testing.assert_allclose(eigensolver.eigvalsh(h, backend), bisect_eigs(h), atol=1e-10)


@pytest.mark.parametrize("n", [3, 17, 64])
def test_decomposition_residual_and_orthonormality(backend, rng, n):
    h = random_hermitian(rng, n)
    dec = eigensolver.eigh(h, backend)
    v, w = dec.eigenvectors, dec.eigenvalues
    assert np.all(np.diff(w) >= 0)
    np.testing.assert_allclose(h @ v, v * w, atol=1e-11)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(n), atol=1e-11)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(h), atol=1e-11)


def test_degenerate_clusters_give_orthonormal_vectors(backend, rng):
    q, _ = np.linalg.qr(rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9)))
    w = np.array([-2, -2, -2, 0.5, 0.5, 1, 3, 3, 3.0])
    h = (q * w) @ q.conj().T
    h = (h + h.conj().T) / 2
    dec = eigensolver.eigh(h, backend)
    np.testing.assert_allclose(dec.eigenvalues, w, atol=1e-12)
    v = dec.eigenvectors
    np.testing.assert_allclose(v.conj().T @ v, np.eye(9), atol=1e-11)
    np.testing.assert_allclose(h @ v, v * dec.eigenvalues, atol=1e-11)


def test_phase_convention(backend, rng):
    dec = eigensolver.eigh(random_hermitian(rng, 12), backend)
    for k in range(12):
        col = dec.eigenvectors[:, k]
        j = np.argmax(np.abs(col))
        assert col[j].imag == 0.0 and col[j].real > 0


def test_fix_phase_tie_goes_to_lowest_index():
    v = np.array([0.5j, -0.5, 0.5, 0.5j]) 
    out = eigensolver.fix_phase(v)
    assert out[0] == pytest.approx(0.5) and out[0].imag == 0.0


def test_real_diagonal_and_one_by_one(backend):
    assert eigensolver.eigvalsh(np.array([[3.5]]), backend)[0] == pytest.approx(3.5)
    dec = eigensolver.eigh(np.diag([2.0, -1.0, 0.0]), backend)
    np.testing.assert_allclose(dec.eigenvalues, [-1, 0, 2])
    np.testing.assert_allclose(np.abs(dec.eigenvectors), np.eye(3)[:, [1, 2, 0]])


def test_ground_pair_flags_degeneracy(backend):
    dec = eigensolver.eigh(np.diag([1.0, 1.0, 2.0]), backend)
    assert eigensolver.ground_pair(dec).degenerate
    dec = eigensolver.eigh(np.diag([0.0, 1e-6, 2.0]), backend)
    pair = eigensolver.ground_pair(dec)
    assert not pair.degenerate and pair.gap == pytest.approx(1e-6)


@pytest.mark.parametrize("bad", [
    np.array([[1.0, 1j], [1j, 1.0]]),
    np.zeros((2, 3)),
    np.zeros((0, 0)),
    np.array([[np.nan, 0], [0, 1.0]]),
])
def test_rejects_non_hermitian(bad):
    with pytest.raises(NotHermitianError):
        eigensolver.eigh(bad)


def test_hermitian_tolerance_is_relative():
    h = np.array([[1e6, 1.0], [1.0 + 1e-8, 0.0]])
    eigensolver.check_hermitian(h)  # 1e-8 is below 1e-12 * 1e6
    with pytest.raises(NotHermitianError):
        eigensolver.check_hermitian(np.array([[1.0, 1.0], [1.0 + 1e-8, 0.0]]))


def test_iteration_cap_raises(monkeypatch, rng, backend):
    monkeypatch.setattr(eigensolver, "MAX_QL_ITERATIONS", 0)
    with pytest.raises(ConvergenceError):
        eigensolver.eigh(random_hermitian(rng, 6), backend)


def test_unknown_backend():
    with pytest.raises(ValueError):
        eigensolver.eigvalsh(np.eye(2), backend="fortran")


hermitian_inputs = st.integers(1, 10).flatmap(
    lambda n: st.tuples(
        arrays(np.float64, (n, n), elements=st.floats(-5, 5)),
        arrays(np.float64, (n, n), elements=st.floats(-5, 5)),
    )
)


@settings(max_examples=60, deadline=None)
@given(hermitian_inputs)
def test_property_spectrum_and_vectors(parts):
    a, b = parts
    h = (a + a.T) / 2 + 1j * (b - b.T) / 2
    dec = eigensolver.eigh(h)
    scale = max(1.0, np.abs(h).max())
    np.testing.assert_allclose(dec.eigenvalues, np.linalg.eigvalsh(h), atol=1e-10 * scale)
    v = dec.eigenvectors
    np.testing.assert_allclose(v.conj().T @ v, np.eye(len(h)), atol=1e-9)
    np.testing.assert_allclose(h @ v, v * dec.eigenvalues, atol=1e-9 * scale)
    assert dec.eigenvalues.sum() == pytest.approx(np.trace(h).real, abs=1e-9 * scale * len(h))


def test_close_levels_stay_orthogonal(backend):
    # two pairs of levels split by ~1e-7 relative: separately computed vectors
    # would only be orthogonal to ~1e-9
    a = np.full((6, 6), 5.96046448e-08)
    b = np.full((6, 6), 2.0)
    b[0, 3] = b[2, 1] = 0.0
    h = a + 1j * (b - b.T) / 2
    dec = eigensolver.eigh(h, backend)
    v = dec.eigenvectors
    np.testing.assert_allclose(v.conj().T @ v, np.eye(6), atol=1e-13)
    np.testing.assert_allclose(h @ v, v * dec.eigenvalues, atol=1e-13)
