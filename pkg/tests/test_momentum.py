import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.fft import dstn, idstn

from hofstadter_lab import eigensolver
from hofstadter_lab import ground as gs
from hofstadter_lab import momentum as mom
from hofstadter_lab.errors import InvalidParameterError
from hofstadter_lab.lattice import GaugeConfig, LatticeSpec, build_hamiltonian

site_arrays = st.tuples(st.integers(1, 9), st.integers(1, 9)).flatmap(
    lambda s: arrays(np.float64, s, elements=st.floats(-1, 1))
)


def test_matches_scipy_orthonormal_dst1(rng):
    psi = rng.normal(size=(6, 9)) + 1j * rng.normal(size=(6, 9))
    ours = mom.sine_transform_2d(psi).coefficients
    ref = dstn(psi.real, type=1, norm="ortho") + 1j * dstn(psi.imag, type=1, norm="ortho")
    np.testing.assert_allclose(ours, ref, atol=1e-12)
    back = idstn(ref.real, type=1, norm="ortho") + 1j * idstn(ref.imag, type=1, norm="ortho")
    np.testing.assert_allclose(mom.inverse_sine_transform_2d(ours), back, atol=1e-12)


def test_momentum_grid():
    np.testing.assert_allclose(mom.momenta(4), np.pi * np.arange(1, 5) / 5)


@settings(max_examples=50)
@given(site_arrays)
def test_property_roundtrip_and_parseval(x):
    m = mom.sine_transform_2d(x)
    np.testing.assert_allclose(mom.inverse_sine_transform_2d(m), x, atol=1e-10)
    assert np.sum(m.magnitude**2) == pytest.approx(np.sum(x**2), abs=1e-9)


def test_parseval_on_ground_state():
    rec = gs.ground_state(LatticeSpec(7, 5), "symmetric", 0.37)
    m = mom.sine_transform_2d(rec)
    assert np.sum(m.magnitude**2) == pytest.approx(1.0, abs=1e-9)


def test_zero_field_ground_state_is_single_mode():
    rec = gs.ground_state(LatticeSpec.square(6), "symmetric", 0.0)
    m = mom.sine_transform_2d(rec)
    c = m.magnitude
    assert c[0, 0] == pytest.approx(1.0, abs=1e-10)
    c[0, 0] = 0
    assert c.max() < 1e-10
    (peak,) = mom.find_peaks(m, 1)
    assert (peak.m, peak.n) == (1, 1)
    assert peak.kp == pytest.approx(np.pi / 7)


def test_zero_field_first_excited_is_single_mode():
    # rectangular so the (2,1) and (1,2) modes are not degenerate
    spec = LatticeSpec(6, 4)
    dec = eigensolver.eigh(build_hamiltonian(spec, GaugeConfig(0.0)))
    m = mom.sine_transform_2d(dec.eigenvectors[:, 1].reshape(6, 4)).magnitude
    assert m[1, 0] == pytest.approx(1.0, abs=1e-10)
    assert np.sum(m**2) - m[1, 0] ** 2 < 1e-18


def test_peaks_sorted_with_deterministic_ties():
    c = np.zeros((5, 5))
    c[3, 3] = c[1, 1] = 1.0
    c[1, 3] = 0.5
    peaks = mom.find_peaks(mom.MomentumMap(c, mom.Source.WAVEFUNCTION), 5)
    assert [(p.m, p.n) for p in peaks] == [(2, 2), (4, 4), (2, 4)]
    with pytest.raises(InvalidParameterError):
        mom.find_peaks(mom.MomentumMap(c, mom.Source.WAVEFUNCTION), 0)


def test_plateau_points_all_count_as_maxima():
    c = np.zeros((3, 4))
    c[1, 1] = c[1, 2] = 2.0
    peaks = mom.find_peaks(mom.MomentumMap(c, mom.Source.DENSITY), 3)
    assert [(p.m, p.n) for p in peaks] == [(2, 2), (2, 3)]


def test_peak_list_is_deterministic():
    rec = gs.ground_state(LatticeSpec.square(12), "symmetric", 0.3)
    a = mom.find_peaks(mom.sine_transform_2d(rec), 8)
    b = mom.find_peaks(mom.sine_transform_2d(gs.ground_state(LatticeSpec.square(12), "symmetric", 0.3)), 8)
    assert a == b


def test_degenerate_flag_travels_with_map():
    rec = gs.ground_state(LatticeSpec.square(6), "symmetric", 0.5)
    assert rec.degenerate and mom.sine_transform_2d(rec).degenerate


@pytest.mark.slow
def test_density_peaks_follow_wavefunction_peak_arithmetic():
    L = 20
    rec = gs.ground_state(LatticeSpec.square(L), "symmetric", 0.5)
    wave = mom.find_peaks(mom.sine_transform_2d(rec, "wavefunction"), 8)
    dens = mom.find_peaks(mom.sine_transform_2d(rec, "density"), 8)

    def combos(idx):
        out = set()
        for a in idx:
            for b in idx:
                s = a + b
                out |= {abs(a - b), s, 2 * (L + 1) - s}
        return out

    mp = combos({p.m for p in wave})
    mq = combos({p.n for p in wave})
    for p in dens:
        assert min(abs(p.m - x) for x in mp) <= 1
        assert min(abs(p.n - x) for x in mq) <= 1
