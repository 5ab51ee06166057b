"""Micro-model check that far-detuned photons mediate a phased spin hopping.

Each chain site holds ``N`` spins in their collective (Dicke) ladder and one
photon mode truncated at ``photon_cutoff``. In the frame of the dressed
transition the Hamiltonian is::

    H = delta sum_i b_i^+ b_i  -  T sum_i (b_i^+ b_{i+1} + h.c.)
        + sum_i (c_i b_i S_i^+ + h.c.)

with ``c_i = -g <-|sigma^-|+>`` built from the dressed states of drive phase
``theta_i``. ``H`` conserves ``Q = (spin excitations) + (photons)``. Eliminating
the photon states of the ``Q = 1`` block leaves a hopping between spin
excitations, ``<S_i|H_eff|S_j> = -J_ij`` with
``J_12 ~ N T (g/2 delta)^2 exp(i (theta_1 - theta_2))``.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import eigensolver
from .errors import InvalidParameterError, ResonanceError
from .lattice import LatticeSpec, build_hamiltonian

RESONANCE_RTOL = 1e-12


class Method(str, enum.Enum):
    SCHUR = "SchurComplement"
    DYNAMICS = "Dynamics"


class Channel(str, enum.Enum):
    # the two photon families enter with opposite drive-phase sign
    B = "b"
    A = "a"


@dataclass(frozen=True)
class FullModelSpec:
    g: float
    T: float
    delta: float
    theta: tuple = (0.0, 0.0)
    N: int = 1
    photon_cutoff: int = 1
    channel: Channel = Channel.B
    Omega: float = 1.0
    Delta_a: float = 0.0
    Delta_b: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))
        object.__setattr__(self, "channel", Channel(self.channel))
        if len(self.theta) not in (2, 3):
            raise InvalidParameterError(f"need 2 or 3 sites, got {len(self.theta)} phases")
        for name in ("g", "T", "delta", "Omega", "Delta_a", "Delta_b"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")
        if not all(math.isfinite(t) for t in self.theta):
            raise InvalidParameterError("drive phases must be finite")
        if not self.delta > 0:
            raise InvalidParameterError(f"detuning must be positive, got {self.delta}")
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 1:
            raise InvalidParameterError(f"N must be a positive integer, got {self.N}")
        if isinstance(self.photon_cutoff, bool) or int(self.photon_cutoff) != self.photon_cutoff \
                or self.photon_cutoff < 1:
            raise InvalidParameterError(f"photon cutoff must be >= 1, got {self.photon_cutoff}")

    @property
    def sites(self):
        return len(self.theta)

    @property
    def spin_max(self):
        return min(self.N, self.photon_cutoff)

    def with_(self, **changes):
        kw = {k: getattr(self, k) for k in self.__dataclass_fields__}
        kw.update(changes)
        return FullModelSpec(**kw)


# g/2pi = 8 MHz, T/2pi = 4 MHz, delta/2pi = 40 MHz; values below are in MHz (x 2pi)
REFERENCE_PRESET = FullModelSpec(g=8.0, T=4.0, delta=40.0, theta=(0.0, 0.0))


@dataclass(frozen=True)
class DressedBasis:
    """Columns are ``|->`` and ``|+>`` in the ``(|g>, |e>)`` basis."""

    matrix: np.ndarray
    energies: tuple

    @property
    def minus(self):
        return self.matrix[:, 0]

    @property
    def plus(self):
        return self.matrix[:, 1]


def dressed_states(Omega, theta):
    if not Omega > 0:
        raise InvalidParameterError(f"Rabi frequency must be positive, got {Omega}")
    s = 1.0 / math.sqrt(2.0)
    ph = complex(math.cos(theta), math.sin(theta))
    u = np.array([[s, s], [-ph * s, ph * s]], dtype=np.complex128)
    return DressedBasis(u, (-0.5 * Omega, 0.5 * Omega))


def dressed_transition_element(theta, Omega=1.0):
    """``<-|sigma^-|+>`` with ``sigma^- = |g><e|``; equals ``exp(i theta)/2``."""
    d = dressed_states(Omega, theta)
    sigma_minus = np.array([[0, 1], [0, 0]], dtype=np.complex128)
    return complex(np.vdot(d.minus, sigma_minus @ d.plus))


def dicke_raising(N, kmax):
    """Collective ``S^+`` on Dicke states ``|k>``, ``k = 0..kmax``: ``sqrt((k+1)(N-k))``."""
    s = np.zeros((kmax + 1, kmax + 1))
    for k in range(kmax):
        s[k + 1, k] = math.sqrt((k + 1) * (N - k))
    return s


def photon_lowering(cutoff):
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1)


@dataclass(frozen=True)
class MicroModel:
    """Hamiltonian with its basis labels.

    Basis states are tuples ``((k_1, n_1), ..., (k_s, n_s))`` of spin
    excitation ``k`` and photon number ``n`` per site, enumerated
    lexicographically (site 1 slowest, spin before photon).
    """

    spec: FullModelSpec
    hamiltonian: np.ndarray
    labels: tuple
    excitations: np.ndarray

    def block(self, q):
        return np.flatnonzero(self.excitations == q)

    def index(self, label):
        return self.labels.index(tuple(label))


def _site_op(op, site, sites, local_dim):
    out = np.eye(1)
    for s in range(sites):
        out = np.kron(out, op if s == site else np.eye(local_dim))
    return out


def build_micro_hamiltonian(spec):
    ks, nc, sites = spec.spin_max, spec.photon_cutoff, spec.sites
    splus = np.kron(dicke_raising(spec.N, ks), np.eye(nc + 1))
    b = np.kron(np.eye(ks + 1), photon_lowering(nc))
    local = (ks + 1) * (nc + 1)
    dim = local**sites
    h = np.zeros((dim, dim), dtype=np.complex128)
    bs = [_site_op(b, s, sites, local) for s in range(sites)]
    sps = [_site_op(splus, s, sites, local) for s in range(sites)]
    for s in range(sites):
        h += spec.delta * bs[s].conj().T @ bs[s]
        elem = dressed_transition_element(spec.theta[s], spec.Omega)
        if spec.channel is Channel.A:
            elem = elem.conjugate()
        term = -spec.g * elem * (bs[s] @ sps[s])
        h += term + term.conj().T
    for s in range(sites - 1):
        hop = -spec.T * bs[s].conj().T @ bs[s + 1]
        h += hop + hop.conj().T

    one = [(k, n) for k in range(ks + 1) for n in range(nc + 1)]
    labels = [()]
    for _ in range(sites):
        labels = [lab + (x,) for lab in labels for x in one]
    exc = np.array([sum(k + n for k, n in lab) for lab in labels])
    return MicroModel(spec, h, tuple(labels), exc)


def spin_state_label(spec, site):
    return tuple((1 if s == site else 0, 0) for s in range(spec.sites))


def predicted_hopping(spec, i=0, j=1):
    """``N T (g/2 delta)^2`` times the drive-phase factor of the channel."""
    dth = spec.theta[i] - spec.theta[j]
    if spec.channel is Channel.A:
        dth = -dth
    mag = spec.N * spec.T * (spec.g / (2 * spec.delta)) ** 2
    return mag * complex(math.cos(dth), math.sin(dth))


@dataclass(frozen=True)
class ValidatorResult:
    J_effective: complex
    J_predicted: complex
    relative_error: float
    method: Method
    g_over_delta: float
    T_over_delta: float
    h_eff: np.ndarray = field(default=None, repr=False)

    def to_dict(self):
        def cx(z):
            return {"re": z.real, "im": z.imag, "abs": abs(z), "arg": math.atan2(z.imag, z.real)}

        return {
            "method": self.method.value,
            "J_effective": cx(self.J_effective),
            "J_predicted": cx(self.J_predicted),
            "relative_error": self.relative_error,
            "g_over_delta": self.g_over_delta,
            "T_over_delta": self.T_over_delta,
        }


def _result(spec, j_eff, method, h_eff=None):
    j_pred = predicted_hopping(spec)
    return ValidatorResult(
        complex(j_eff), j_pred, float(abs(j_eff - j_pred) / abs(j_pred)), Method(method),
        spec.g / spec.delta, spec.T / spec.delta, h_eff,
    )


def _single_excitation_sector(spec):
    model = build_micro_hamiltonian(spec)
    block = model.block(1)
    spin = [model.index(spin_state_label(spec, s)) for s in range(spec.sites)]
    photon = [i for i in block if i not in spin]
    return model, spin, photon


def schur_effective_hopping(spec, E0=0.0):
    """Reduce the one-excitation block onto the spin states at energy ``E0``."""
    model, S, P = _single_excitation_sector(spec)
    h = model.hamiltonian
    hpp = h[np.ix_(P, P)] - E0 * np.eye(len(P))
    scale = max(1.0, float(np.abs(h).max()))
    if np.min(np.abs(eigensolver.eigvalsh(hpp))) <= RESONANCE_RTOL * scale:
        raise ResonanceError(f"photon block is singular at E0={E0}; detuning {spec.delta} is resonant")
    h_eff = h[np.ix_(S, S)] - h[np.ix_(S, P)] @ np.linalg.solve(hpp, h[np.ix_(P, S)])
    return _result(spec, -h_eff[0, 1], Method.SCHUR, h_eff)


def evolve(h, psi0, t):
    dec = eigensolver.eigh(h)
    u = dec.eigenvectors
    return u @ (np.exp(-1j * dec.eigenvalues * t) * (u.conj().T @ psi0))


def dynamics_effective_hopping(spec, t=None):
    """Read the hopping off the exact two-site transfer of one spin excitation.

    For an effective pair ``[[e, -J], [-J*, e]]`` starting on site 2, the site-1
    amplitude is ``i exp(i arg J) sin(|J| t)`` and the site-2 amplitude
    ``cos(|J| t)``, up to a common phase.
    """
    model, S, _ = _single_excitation_sector(spec)
    j_pred = predicted_hopping(spec)
    if t is None:
        t = math.pi / (4 * abs(j_pred))
    h = model.hamiltonian
    psi0 = np.zeros(h.shape[0], dtype=np.complex128)
    psi0[S[1]] = 1.0
    psi = evolve(h, psi0, t)
    a, b = psi[S[0]], psi[S[1]]
    mag = math.atan2(abs(a), abs(b)) / t
    phase = np.angle(a * np.conj(b)) - 0.5 * np.pi
    return _result(spec, mag * np.exp(1j * phase), Method.DYNAMICS)


def hp_collective_block(N, spec, gauge, J_prime=1.0):
    """Collective-spin hopping restricted to one bright excitation on the lattice.

    Element ``(i, j)`` is ``-J' exp(i phi_ij) <1_i|S_i^+ S_j^-|1_j>`` with the
    link phases of the lattice model; the Dicke elements are taken from the
    ladder matrices.
    """
    unit = build_hamiltonian(LatticeSpec(spec.L_p, spec.L_q, 1.0), gauge)
    s = dicke_raising(N, 1)
    enhancement = s[1, 0] * s.T[0, 1]
    return J_prime * enhancement * unit


def hp_equivalence(N, spec, gauge, J_prime=1.0):
    """Max entrywise difference between the collective-spin block and ``H_B`` at ``J = N J'``."""
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise InvalidParameterError(f"N must be a positive integer, got {N}")
    spin = hp_collective_block(N, spec, gauge, J_prime)
    boson = build_hamiltonian(LatticeSpec(spec.L_p, spec.L_q, N * J_prime), gauge)
    return float(np.abs(spin - boson).max())
