"""Ground states, fidelity traces and level-crossing detection.

The ground-state fidelity ``F(alpha) = |<Phi(alpha)|Phi(alpha + step)>|``
drops towards zero where the lowest level changes branch. Grid intervals with
``F`` below a threshold are refined by bisection on the overlaps of the
bracketing states. Grid points whose ground state is itself degenerate also
count as crossings: a crossing sitting exactly on a grid point leaves both
neighbouring overlaps near ``1/sqrt(2)``.
"""

import math
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from . import eigensolver
from ._parallel import ordered_map
from .errors import HofstadterLabError, InvalidParameterError, NoCrossingError, SweepError
from .lattice import Gauge, GaugeConfig, LatticeSpec, build_hamiltonian

DEFAULT_STEP = 1e-3
DEFAULT_THRESHOLD = 0.5
DEFAULT_REFINE_TOL = 1e-5
FIT_ALPHA_MAX = 0.6


@dataclass(frozen=True)
class GroundStateRecord:
    alpha: float
    energy: float
    amplitudes: np.ndarray  # complex, shape (L_p, L_q), indexed [p-1, q-1]
    gap: float
    degenerate: bool

    @property
    def vector(self):
        return self.amplitudes.ravel()

    @property
    def density(self):
        return np.abs(self.amplitudes) ** 2

    def amplitude(self, p, q):
        return complex(self.amplitudes[p - 1, q - 1])


def ground_state(spec, gauge, alpha, backend=None):
    """Lowest eigenvector of the lattice Hamiltonian with the solver's phase convention."""
    gauge = Gauge.parse(gauge)
    h = build_hamiltonian(spec, GaugeConfig(alpha, gauge))
    dec = eigensolver.eigh(h, backend=backend)
    if len(dec) >= 2:
        pair = eigensolver.ground_pair(dec)
        energy, vec, gap, degenerate = pair.energy, pair.vector, pair.gap, pair.degenerate
    else:
        energy, vec, gap, degenerate = float(dec.eigenvalues[0]), dec.eigenvectors[:, 0], math.inf, False
    return GroundStateRecord(
        float(alpha), energy, vec.reshape(spec.L_p, spec.L_q), gap, degenerate
    )


def overlap(a, b):
    """``|<a|b>|`` for two ground-state records or raw vectors."""
    va = a.vector if isinstance(a, GroundStateRecord) else np.ravel(a)
    vb = b.vector if isinstance(b, GroundStateRecord) else np.ravel(b)
    return float(abs(np.vdot(va, vb)))


def _ground_task(alpha, spec, gauge, backend):
    try:
        return ground_state(spec, gauge, alpha, backend)
    except HofstadterLabError as exc:
        raise SweepError(float(alpha), exc) from exc


def ground_states(spec, gauge, alphas, workers=1, backend=None):
    task = partial(_ground_task, spec=spec, gauge=Gauge.parse(gauge), backend=backend)
    return ordered_map(task, [float(a) for a in alphas], workers, backend)


@dataclass(frozen=True)
class FidelityTrace:
    spec: LatticeSpec
    gauge: Gauge
    alphas: np.ndarray
    step: float
    fidelities: np.ndarray
    # ground states at alphas followed by one extra state at alphas[-1] + step
    records: tuple = field(repr=False, default=())


def fidelity_grid(alpha_min, alpha_max, step):
    """Grid ``alpha_min + i*step`` up to ``alpha_max``, rounded to 12 decimals."""
    if not (math.isfinite(alpha_min) and math.isfinite(alpha_max) and math.isfinite(step)):
        raise InvalidParameterError("fidelity grid parameters must be finite")
    if step < 0:
        raise InvalidParameterError(f"step must be positive, got {step}")
    if alpha_max < alpha_min:
        raise InvalidParameterError(f"need alpha_min <= alpha_max, got [{alpha_min}, {alpha_max}]")
    if step == 0:
        return np.array([round(alpha_min, 12)])
    count = int(math.floor((alpha_max - alpha_min) / step + 1e-9)) + 1
    return np.round(alpha_min + step * np.arange(count), 12)


def fidelity_trace(spec, gauge, alpha_min, alpha_max, step=DEFAULT_STEP, workers=1, backend=None):
    gauge = Gauge.parse(gauge)
    alphas = fidelity_grid(alpha_min, alpha_max, step)
    points = np.append(alphas, round(float(alphas[-1]) + step, 12))
    recs = ground_states(spec, gauge, points, workers, backend)
    fid = np.array([overlap(recs[i], recs[i + 1]) for i in range(len(alphas))])
    return FidelityTrace(spec, gauge, alphas, float(step), fid, tuple(recs))


def fidelity(spec, gauge, alpha, step=DEFAULT_STEP, backend=None):
    """Single-point fidelity ``|<Phi(alpha)|Phi(alpha+step)>|``."""
    a = ground_state(spec, gauge, alpha, backend)
    if step == 0:
        return overlap(a, a)
    return overlap(a, ground_state(spec, gauge, round(alpha + step, 12), backend))


@dataclass(frozen=True)
class Crossing:
    grid_lo: float
    grid_hi: float
    alpha_lo: float
    alpha_hi: float
    min_fidelity: float
    degenerate: bool = False

    @property
    def alpha(self):
        return 0.5 * (self.alpha_lo + self.alpha_hi)

    def to_dict(self):
        return {
            "grid_lo": self.grid_lo,
            "grid_hi": self.grid_hi,
            "alpha_lo": self.alpha_lo,
            "alpha_hi": self.alpha_hi,
            "alpha": self.alpha,
            "min_fidelity": self.min_fidelity,
            "degenerate": self.degenerate,
        }


@dataclass(frozen=True)
class CrossingReport:
    L: int | None
    threshold: float
    crossings: list
    alpha0: float | None
    fit_prediction: float | None
    perturbation_prediction: float | None

    def to_dict(self):
        return {
            "L": self.L,
            "threshold": self.threshold,
            "alpha0": self.alpha0,
            "fit_prediction": self.fit_prediction,
            "perturbation_prediction": self.perturbation_prediction,
            "crossings": [c.to_dict() for c in self.crossings],
        }


def _refine(spec, gauge, lo, hi, rec_lo, rec_hi, tol, backend):
    """Bisect towards the half whose end states overlap least."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        rec = ground_state(spec, gauge, mid, backend)
        if rec.degenerate:
            return mid, mid, 0.0, True
        if overlap(rec_lo, rec) < overlap(rec, rec_hi):
            hi, rec_hi = mid, rec
        else:
            lo, rec_lo = mid, rec
    return lo, hi, overlap(rec_lo, rec_hi), False


def detect_crossings(trace, threshold=DEFAULT_THRESHOLD, refine=True,
                     tol=DEFAULT_REFINE_TOL, backend=None):
    if len(trace.fidelities) == 0:
        raise InvalidParameterError("empty fidelity trace")
    if not 0 < threshold < 1:
        raise InvalidParameterError(f"threshold must lie in (0, 1), got {threshold}")
    recs = trace.records
    alphas = [r.alpha for r in recs]
    m = len(trace.fidelities)

    flagged = set(np.flatnonzero(trace.fidelities < threshold).tolist())
    degenerate_pts = {j for j, r in enumerate(recs) if r.degenerate}
    for j in degenerate_pts:
        flagged.update(k for k in (j - 1, j) if 0 <= k < m)

    pieces = []
    for i in sorted(flagged):
        lo, hi = alphas[i], alphas[i + 1]
        fmin = float(trace.fidelities[i])
        if i in degenerate_pts or i + 1 in degenerate_pts:
            at = lo if i in degenerate_pts else hi
            pieces.append(Crossing(lo, hi, at, at, fmin, True))
        elif refine and trace.step > 0:
            rlo, rhi, f, deg = _refine(trace.spec, trace.gauge, lo, hi, recs[i], recs[i + 1], tol, backend)
            pieces.append(Crossing(lo, hi, rlo, rhi, min(fmin, f), deg))
        else:
            pieces.append(Crossing(lo, hi, lo, hi, fmin, False))

    merged = []
    for c in pieces:
        prev = merged[-1] if merged else None
        if refine:
            touching = prev is not None and c.alpha_lo - prev.alpha_hi <= tol
        else:
            touching = prev is not None and c.grid_lo <= prev.grid_hi
        if touching:
            merged[-1] = Crossing(
                prev.grid_lo, max(prev.grid_hi, c.grid_hi),
                prev.alpha_lo, max(prev.alpha_hi, c.alpha_hi),
                min(prev.min_fidelity, c.min_fidelity),
                prev.degenerate or c.degenerate,
            )
        else:
            merged.append(c)

    spec = trace.spec
    L = spec.L_p if spec.L_p == spec.L_q else None
    return CrossingReport(
        L=L,
        threshold=threshold,
        crossings=merged,
        alpha0=merged[0].alpha if merged else None,
        fit_prediction=2.0 / (L + 1) if L else None,
        perturbation_prediction=1.5 / (L + 1) if L else None,
    )


def first_crossing(spec, gauge=Gauge.SYMMETRIC, alpha_max=FIT_ALPHA_MAX, step=DEFAULT_STEP,
                   threshold=DEFAULT_THRESHOLD, chunk=64, workers=1, backend=None):
    """Scan upward from ``alpha = 0`` and stop shortly after the first crossing.

    Returns the first :class:`Crossing`, or ``None`` if none occurs up to
    ``alpha_max``.
    """
    gauge = Gauge.parse(gauge)
    grid = fidelity_grid(0.0, alpha_max, step)
    points = np.append(grid, round(float(grid[-1]) + step, 12))
    recs = []
    stop = len(points)
    pos = 0
    while pos < stop:
        upto = min(pos + chunk, stop)
        recs.extend(ground_states(spec, gauge, points[pos:upto], workers, backend))
        pos = upto
        hit = None
        for i in range(len(recs) - 1):
            if recs[i].degenerate or overlap(recs[i], recs[i + 1]) < threshold:
                hit = i
                break
        if hit is not None:
            # a few extra points so a multi-interval dip is seen whole
            stop = min(stop, hit + 4)
    n_int = len(recs) - 1
    if n_int < 1:
        return None
    fid = np.array([overlap(recs[i], recs[i + 1]) for i in range(n_int)])
    trace = FidelityTrace(spec, gauge, points[:n_int], step, fid, tuple(recs))
    if not np.any(fid < threshold) and not any(r.degenerate for r in recs):
        return None
    report = detect_crossings(trace, threshold, backend=backend)
    return report.crossings[0] if report.crossings else None


@dataclass(frozen=True)
class Alpha0Fit:
    L: int
    alpha0: float
    prediction: float
    relative_deviation: float
    crossing: Crossing


def fit_alpha0(sizes, gauge=Gauge.SYMMETRIC, step=DEFAULT_STEP, alpha_max=FIT_ALPHA_MAX,
               threshold=DEFAULT_THRESHOLD, workers=1, backend=None):
    """Measured first crossing per lattice size against ``2/(L+1)``."""
    rows, missing = [], []
    for L in sizes:
        if L < 5:
            raise InvalidParameterError(f"fit_alpha0 needs L >= 5, got {L}")
        c = first_crossing(LatticeSpec.square(L), gauge, alpha_max, step, threshold,
                           workers=workers, backend=backend)
        if c is None:
            missing.append(L)
            continue
        pred = 2.0 / (L + 1)
        rows.append(Alpha0Fit(L, c.alpha, pred, abs(c.alpha - pred) / pred, c))
    if missing:
        err = NoCrossingError(missing, alpha_max)
        err.found = rows
        raise err
    return rows


@dataclass(frozen=True)
class PerturbationEstimate:
    """Continuum estimate of the first crossing for an ``L x L`` lattice.

    Zero-field levels ``E(p, q) = ((pi p/L)^2 + (pi q/L)^2) / (2m)`` with
    ``m = 1/(2J)``; in the Landau gauge the first-order shift of the level
    with ``p``-quantum number ``k`` is
    ``(1/L^2)(1/2m) sum_q 2 (k pi/L)(-2 pi alpha q)``. Equating the shifted
    ``(1,1)`` and ``(2,1)`` levels gives ``alpha_c = 1.5/(L+1)``.
    """

    L: int
    J: float = 1.0

    def __post_init__(self):
        if self.L < 2:
            raise InvalidParameterError(f"L must be >= 2, got {self.L}")

    @property
    def mass(self):
        return 1.0 / (2.0 * self.J)

    @property
    def alpha_c(self):
        return 1.5 / (self.L + 1)

    def level_energy(self, p, q):
        L = self.L
        return ((np.pi * p / L) ** 2 + (np.pi * q / L) ** 2) / (2 * self.mass)

    def first_order_shift(self, k, alpha):
        L = self.L
        qs = np.arange(1, L + 1)
        return float(np.sum(2 * (k * np.pi / L) * (-2 * np.pi * alpha * qs))) / (L**2 * 2 * self.mass)

    def alpha_c_from_levels(self):
        """Solve ``E11 + shift(1) = E21 + shift(2)``; both shifts are linear in alpha."""
        gap = self.level_energy(2, 1) - self.level_energy(1, 1)
        slope = self.first_order_shift(1, 1.0) - self.first_order_shift(2, 1.0)
        return gap / slope

    def continuum_wavefunction(self):
        """``2/L sin(pi p/L) sin(pi q/L)``: vanishes at ``p = L``, unlike the lattice state."""
        L = self.L
        p = np.arange(1, L + 1)
        return (2.0 / L) * np.outer(np.sin(np.pi * p / L), np.sin(np.pi * p / L))


def perturbation_estimate(L, J=1.0):
    return PerturbationEstimate(L, J)
