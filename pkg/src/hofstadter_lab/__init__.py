"""Finite Harper-Hofstadter lattices: spectra, ground states, crossings and effective-model checks."""

from .eigensolver import BACKENDS, DEFAULT_BACKEND, eigh, eigvalsh
from .errors import (
    ConvergenceError,
    HofstadterLabError,
    InvalidParameterError,
    NoCrossingError,
    NotHermitianError,
    ResonanceError,
    SweepError,
)
from .ground import (
    detect_crossings,
    fidelity_trace,
    fit_alpha0,
    ground_state,
    perturbation_estimate,
)
from .lattice import Gauge, GaugeConfig, LatticeSpec, build_hamiltonian, plaquette_fluxes
from .momentum import find_peaks, sine_transform_2d
from .effective_model import FullModelSpec, hp_equivalence, schur_effective_hopping
from .spectrum import butterfly_scan

__version__ = "0.1.0"
