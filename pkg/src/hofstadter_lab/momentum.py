"""Open-boundary momentum analysis with the orthonormal type-I sine transform.

The basis ``S[m, p] = sqrt(2/(L+1)) sin(m p pi/(L+1))`` diagonalizes the
zero-field chain, so the grid momenta are ``k_m = m pi/(L+1)``. ``S`` is real,
symmetric and its own inverse.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .ground import GroundStateRecord


class Source(str, enum.Enum):
    WAVEFUNCTION = "wavefunction"
    DENSITY = "density"


def sine_matrix(L):
    m = np.arange(1, L + 1)
    return np.sqrt(2.0 / (L + 1)) * np.sin(np.outer(m, m) * np.pi / (L + 1))


def momenta(L):
    return np.arange(1, L + 1) * np.pi / (L + 1)


@dataclass(frozen=True)
class MomentumMap:
    coefficients: np.ndarray  # indexed [m-1, n-1]
    source: Source
    degenerate: bool = False

    @property
    def kp(self):
        return momenta(self.coefficients.shape[0])

    @property
    def kq(self):
        return momenta(self.coefficients.shape[1])

    @property
    def magnitude(self):
        return np.abs(self.coefficients)


def sine_transform_2d(state, source=Source.WAVEFUNCTION):
    """DST-I along both lattice axes of a ground state (or a raw site array)."""
    source = Source(source)
    degenerate = False
    if isinstance(state, GroundStateRecord):
        degenerate = state.degenerate
        psi = state.amplitudes
    else:
        psi = np.asarray(state)
    if psi.ndim != 2:
        raise InvalidParameterError(f"expected a 2-D site array, got shape {psi.shape}")
    data = psi if source is Source.WAVEFUNCTION else np.abs(psi) ** 2
    sp, sq = sine_matrix(data.shape[0]), sine_matrix(data.shape[1])
    return MomentumMap(sp @ data @ sq, source, degenerate)


def inverse_sine_transform_2d(mmap):
    c = mmap.coefficients if isinstance(mmap, MomentumMap) else np.asarray(mmap)
    return sine_matrix(c.shape[0]) @ c @ sine_matrix(c.shape[1])


@dataclass(frozen=True)
class Peak:
    m: int
    n: int
    kp: float
    kq: float
    magnitude: float


def find_peaks(mmap, count):
    """Top ``count`` local maxima of ``|c|`` over the 8-neighbourhood.

    A point qualifies if it is at least as large as every neighbour and above
    ``1e-12`` of the global maximum. Sorted by magnitude descending, then by
    ``(m, n)``.
    """
    if count < 1:
        raise InvalidParameterError(f"count must be >= 1, got {count}")
    mag = mmap.magnitude
    top = mag.max()
    padded = np.pad(mag, 1, constant_values=-np.inf)
    Lp, Lq = mag.shape
    is_max = mag > 1e-12 * top
    for dp in (-1, 0, 1):
        for dq in (-1, 0, 1):
            if dp or dq:
                is_max &= mag >= padded[1 + dp:1 + dp + Lp, 1 + dq:1 + dq + Lq]
    idx = np.argwhere(is_max)
    order = sorted(idx.tolist(), key=lambda mn: (-mag[mn[0], mn[1]], mn[0], mn[1]))
    kp, kq = mmap.kp, mmap.kq
    return [
        Peak(m + 1, n + 1, float(kp[m]), float(kq[n]), float(mag[m, n]))
        for m, n in order[:count]
    ]
