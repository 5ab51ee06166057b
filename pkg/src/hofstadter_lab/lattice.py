"""Square-lattice geometry, gauge choices and the single-polariton hopping matrix.

Sites carry 1-based labels ``(p, q)`` with ``1 <= p <= L_p`` and
``1 <= q <= L_q``; storage is 0-based row-major, ``i = (p-1)*L_q + (q-1)``.
Boundaries are open.

Hopping convention, for the symmetric gauge phase ``theta(p, q)``::

    <p,q|H|p+1,q> = -J exp(i (theta(p,q)   - theta(p+1,q)))
    <p,q|H|p,q+1> = -J exp(i (theta(p,q+1) - theta(p,q)))

With ``theta(p, q) = -pi p q alpha`` the loop
``(p,q) -> (p+1,q) -> (p+1,q+1) -> (p,q+1) -> (p,q)`` picks up ``+2 pi alpha``.
The Landau gauge puts the whole phase on the ``p`` hops,
``<p+1,q|H|p,q> = -J exp(-2 pi i alpha q)``, and gives the same loop phase.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError


class Gauge(str, enum.Enum):
    SYMMETRIC = "symmetric"
    LANDAU = "landau"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidParameterError(
                f"unknown gauge {value!r}; expected 'symmetric' or 'landau'"
            ) from None


@dataclass(frozen=True)
class LatticeSpec:
    L_p: int
    L_q: int
    J: float = 1.0

    def __post_init__(self):
        for name in ("L_p", "L_q"):
            val = getattr(self, name)
            if isinstance(val, bool) or not isinstance(val, (int, np.integer)) or val < 1:
                raise InvalidParameterError(f"{name} must be a positive integer, got {val!r}")
        if not (math.isfinite(self.J) and self.J > 0):
            raise InvalidParameterError(f"J must be positive and finite, got {self.J!r}")

    @classmethod
    def square(cls, L, J=1.0):
        return cls(L, L, J)

    @property
    def n_sites(self):
        return self.L_p * self.L_q

    @property
    def n_plaquettes(self):
        return (self.L_p - 1) * (self.L_q - 1)

    @property
    def n_links(self):
        return self.L_p * (self.L_q - 1) + self.L_q * (self.L_p - 1)


@dataclass(frozen=True)
class GaugeConfig:
    alpha: float
    gauge: Gauge = Gauge.SYMMETRIC

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise InvalidParameterError(f"alpha must be finite, got {self.alpha!r}")
        object.__setattr__(self, "gauge", Gauge.parse(self.gauge))


@dataclass(frozen=True)
class SiteIndex:
    p: int
    q: int
    i: int


def site_index(p, q, spec):
    """Linear storage index of the 1-based site ``(p, q)``."""
    if not (1 <= p <= spec.L_p and 1 <= q <= spec.L_q):
        raise InvalidParameterError(
            f"site ({p}, {q}) outside the {spec.L_p}x{spec.L_q} lattice"
        )
    return (p - 1) * spec.L_q + (q - 1)


def site_label(i, spec):
    """Inverse of :func:`site_index`."""
    if not 0 <= i < spec.n_sites:
        raise InvalidParameterError(f"linear index {i} outside [0, {spec.n_sites})")
    p, q = divmod(i, spec.L_q)
    return p + 1, q + 1


def site_index_roundtrip(p, q, spec):
    i = site_index(p, q, spec)
    assert site_label(i, spec) == (p, q)
    return SiteIndex(p, q, i)


def symmetric_phase(p, q, alpha):
    """Site phase ``theta(p, q) = -pi p q alpha`` (arrays broadcast)."""
    return -np.pi * np.multiply(p, q) * alpha


def link_phases(spec, gauge):
    """Phases of the two hop families as ``(L_p-1, L_q)`` and ``(L_p, L_q-1)`` arrays.

    ``vert[p-1, q-1]`` is the phase of ``<p,q|H|p+1,q>`` and ``horiz[p-1, q-1]``
    that of ``<p,q|H|p,q+1>`` (both before the ``-J`` prefactor).
    """
    a = gauge.alpha
    p = np.arange(1, spec.L_p + 1)[:, None]
    q = np.arange(1, spec.L_q + 1)[None, :]
    if gauge.gauge is Gauge.SYMMETRIC:
        theta = symmetric_phase(p, q, a)
        vert = theta[:-1, :] - theta[1:, :]
        horiz = theta[:, 1:] - theta[:, :-1]
    else:
        vert = np.broadcast_to(2 * np.pi * a * q, (spec.L_p - 1, spec.L_q)).copy()
        horiz = np.zeros((spec.L_p, spec.L_q - 1))
    return vert, horiz


def build_hamiltonian(spec, gauge):
    """Dense ``n x n`` single-polariton Hamiltonian with open boundaries."""
    if not isinstance(gauge, GaugeConfig):
        raise InvalidParameterError("gauge must be a GaugeConfig")
    if spec.n_sites == 0:
        raise InvalidParameterError("empty lattice")
    n = spec.n_sites
    h = np.zeros((n, n), dtype=np.complex128)
    vert, horiz = link_phases(spec, gauge)
    idx = np.arange(n).reshape(spec.L_p, spec.L_q)

    amp = -spec.J * np.exp(1j * vert)
    rows, cols = idx[:-1, :].ravel(), idx[1:, :].ravel()
    h[rows, cols] = amp.ravel()
    h[cols, rows] = amp.conj().ravel()

    amp = -spec.J * np.exp(1j * horiz)
    rows, cols = idx[:, :-1].ravel(), idx[:, 1:].ravel()
    h[rows, cols] = amp.ravel()
    h[cols, rows] = amp.conj().ravel()
    return h


def wrap_phase(x):
    """Map angles to ``(-pi, pi]``."""
    y = np.mod(np.asarray(x, dtype=float) + np.pi, 2 * np.pi) - np.pi
    return np.where(y == -np.pi, np.pi, y)


def plaquette_fluxes(h, spec):
    """Loop phase of every plaquette, wrapped to ``(-pi, pi]``.

    Row-major over plaquettes with lower-left corner ``(p, q)``. The phase is
    the argument of the product of the four hop amplitudes ``<to|H|from>``
    taken counterclockwise.
    """
    h = np.asarray(h)
    if spec.L_p < 2 or spec.L_q < 2:
        return np.zeros(0)
    out = []
    for p in range(1, spec.L_p):
        for q in range(1, spec.L_q):
            a = site_index(p, q, spec)
            b = site_index(p + 1, q, spec)
            c = site_index(p + 1, q + 1, spec)
            d = site_index(p, q + 1, spec)
            hops = (h[b, a], h[c, b], h[d, c], h[a, d])
            if any(x == 0 for x in hops):
                raise InvalidParameterError(f"missing link around plaquette ({p}, {q})")
            out.append(np.angle(np.prod(hops)))
    return wrap_phase(np.array(out))


def zero_field_spectrum(spec):
    """Closed-form open-boundary spectrum ``-2J(cos(m pi/(L_p+1)) + cos(n pi/(L_q+1)))``."""
    m = np.arange(1, spec.L_p + 1)
    n = np.arange(1, spec.L_q + 1)
    e = -2 * spec.J * (
        np.cos(m * np.pi / (spec.L_p + 1))[:, None] + np.cos(n * np.pi / (spec.L_q + 1))[None, :]
    )
    return np.sort(e.ravel())


def zero_field_ground_state(spec):
    """Exact discrete zero-field ground state as a ``(L_p, L_q)`` real array."""
    p = np.arange(1, spec.L_p + 1)
    q = np.arange(1, spec.L_q + 1)
    psi = np.outer(np.sin(p * np.pi / (spec.L_p + 1)), np.sin(q * np.pi / (spec.L_q + 1)))
    return psi / np.linalg.norm(psi)
