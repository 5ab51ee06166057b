"""Flux sweeps of the full spectrum (Hofstadter butterfly) and gauge checks."""

from dataclasses import dataclass
from functools import partial

import numpy as np

from . import eigensolver
from ._parallel import ordered_map
from .errors import HofstadterLabError, InvalidParameterError, SweepError
from .lattice import Gauge, GaugeConfig, LatticeSpec, build_hamiltonian


@dataclass(frozen=True)
class ButterflySpectrum:
    spec: LatticeSpec
    gauge: Gauge
    alphas: np.ndarray
    energies: np.ndarray  # shape (len(alphas), n_sites), rows ascending

    def column(self, alpha, atol=1e-12):
        hits = np.flatnonzero(np.abs(self.alphas - alpha) <= atol)
        if hits.size == 0:
            raise KeyError(alpha)
        return self.energies[hits[0]]


def alpha_grid(alpha_min, alpha_max, steps):
    if not (np.isfinite(alpha_min) and np.isfinite(alpha_max)):
        raise InvalidParameterError("alpha range must be finite")
    if steps < 2:
        raise InvalidParameterError(f"steps must be >= 2, got {steps}")
    if not alpha_min < alpha_max:
        raise InvalidParameterError(f"need alpha_min < alpha_max, got [{alpha_min}, {alpha_max}]")
    return np.linspace(alpha_min, alpha_max, steps)


def spectrum_at(spec, alpha, gauge=Gauge.SYMMETRIC, backend=None):
    """Sorted eigenvalues of the lattice Hamiltonian at one flux value."""
    h = build_hamiltonian(spec, GaugeConfig(alpha, gauge))
    return eigensolver.eigvalsh(h, backend=backend)


def _column_task(alpha, spec, gauge, backend):
    try:
        return spectrum_at(spec, alpha, gauge, backend)
    except HofstadterLabError as exc:
        raise SweepError(float(alpha), exc) from exc


def butterfly_scan(spec, gauge=Gauge.SYMMETRIC, alpha_min=0.0, alpha_max=1.0,
                   steps=201, workers=1, backend=None):
    gauge = Gauge.parse(gauge)
    alphas = alpha_grid(alpha_min, alpha_max, steps)
    task = partial(_column_task, spec=spec, gauge=gauge, backend=backend)
    cols = ordered_map(task, [float(a) for a in alphas], workers, backend)
    return ButterflySpectrum(spec, gauge, alphas, np.vstack(cols))


def multiset_distance(a, b):
    """Max deviation between two spectra compared as sorted multisets."""
    a, b = np.sort(np.asarray(a)), np.sort(np.asarray(b))
    if a.shape != b.shape:
        raise ValueError("spectra differ in length")
    return float(np.abs(a - b).max()) if a.size else 0.0


def gauge_invariance_check(spec, alpha, backend=None):
    """Largest eigenvalue discrepancy between the symmetric and Landau gauges."""
    sym = spectrum_at(spec, alpha, Gauge.SYMMETRIC, backend)
    lan = spectrum_at(spec, alpha, Gauge.LANDAU, backend)
    return multiset_distance(sym, lan)
