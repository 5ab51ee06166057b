"""Command-line entry point ``hofstadter-lab``.

All parameters are validated before any computation starts. Sweeps run on
``--jobs`` workers and are merged in flux order, so output bytes do not
depend on the worker count.
"""

import argparse
import math
import sys

from . import effective_model as em
from . import eigensolver
from . import ground as gs
from . import momentum as mom
from . import spectrum
from ._parallel import default_workers
from .errors import (
    ConvergenceError,
    InvalidParameterError,
    NoCrossingError,
    NotHermitianError,
    ResonanceError,
    SweepError,
)
from .io import csv_text, json_text, write_text
from .lattice import Gauge, LatticeSpec

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_CONVERGENCE = 4
EXIT_NO_CROSSING = 5
EXIT_RESONANCE = 6

EXIT_CODES_HELP = f"""exit codes:
  {EXIT_OK}  success
  {EXIT_OTHER}  unexpected failure
  {EXIT_CONFIG}  invalid parameters or configuration
  {EXIT_IO}  output file cannot be written
  {EXIT_CONVERGENCE}  eigensolver did not converge
  {EXIT_NO_CROSSING}  no ground-state crossing found (fit-alpha0)
  {EXIT_RESONANCE}  resonant detuning in validate-effective
"""


def _error_code(exc):
    if isinstance(exc, SweepError):
        return _error_code(exc.cause)
    if isinstance(exc, ConvergenceError):
        return EXIT_CONVERGENCE
    if isinstance(exc, NoCrossingError):
        return EXIT_NO_CROSSING
    if isinstance(exc, ResonanceError):
        return EXIT_RESONANCE
    if isinstance(exc, (InvalidParameterError, NotHermitianError, ValueError)):
        return EXIT_CONFIG
    if isinstance(exc, OSError):
        return EXIT_IO
    return EXIT_OTHER


def _lattice(args):
    lp = args.lp if args.lp is not None else args.size
    lq = args.lq if args.lq is not None else args.size
    if lp is None or lq is None:
        raise InvalidParameterError("give --size or both --lp and --lq")
    return LatticeSpec(lp, lq, args.J)


def _finite(name, value):
    if not math.isfinite(value):
        raise InvalidParameterError(f"--{name} must be finite, got {value}")
    return value


def _jobs(args):
    if args.jobs < 1:
        raise InvalidParameterError(f"--jobs must be >= 1, got {args.jobs}")
    return args.jobs


# each command returns a zero-argument callable so validation happens up front


def cmd_butterfly(args):
    spec, gauge, jobs = _lattice(args), Gauge.parse(args.gauge), _jobs(args)
    spectrum.alpha_grid(args.alpha_min, args.alpha_max, args.steps)

    def run():
        b = spectrum.butterfly_scan(spec, gauge, args.alpha_min, args.alpha_max, args.steps,
                                    jobs, args.backend)
        rows = ((a, k, e) for a, col in zip(b.alphas, b.energies) for k, e in enumerate(col))
        return csv_text(["alpha", "index", "energy"], rows)

    return run


def cmd_ground(args):
    spec, gauge = _lattice(args), Gauge.parse(args.gauge)
    _finite("alpha", args.alpha)

    def run():
        rec = gs.ground_state(spec, gauge, args.alpha, args.backend)
        rows = []
        for p in range(1, spec.L_p + 1):
            for q in range(1, spec.L_q + 1):
                z = rec.amplitude(p, q)
                rows.append((p, q, z.real, z.imag, abs(z) ** 2))
        return csv_text(["p", "q", "re", "im", "abs2"], rows)

    return run


def cmd_density(args):
    spec, gauge = _lattice(args), Gauge.parse(args.gauge)
    _finite("alpha", args.alpha)

    def run():
        rho = gs.ground_state(spec, gauge, args.alpha, args.backend).density
        rows = ((p + 1, q + 1, rho[p, q]) for p in range(spec.L_p) for q in range(spec.L_q))
        return csv_text(["p", "q", "density"], rows)

    return run


def _trace_args(args):
    spec, gauge, jobs = _lattice(args), Gauge.parse(args.gauge), _jobs(args)
    if not args.step > 0:
        raise InvalidParameterError(f"--step must be positive, got {args.step}")
    gs.fidelity_grid(args.alpha_min, args.alpha_max, args.step)
    return spec, gauge, jobs


def cmd_fidelity(args):
    spec, gauge, jobs = _trace_args(args)

    def run():
        tr = gs.fidelity_trace(spec, gauge, args.alpha_min, args.alpha_max, args.step, jobs,
                               args.backend)
        return csv_text(["alpha", "fidelity"], zip(tr.alphas, tr.fidelities))

    return run


def cmd_crossings(args):
    spec, gauge, jobs = _trace_args(args)
    if not 0 < args.threshold < 1:
        raise InvalidParameterError(f"--threshold must lie in (0, 1), got {args.threshold}")

    def run():
        tr = gs.fidelity_trace(spec, gauge, args.alpha_min, args.alpha_max, args.step, jobs,
                               args.backend)
        rep = gs.detect_crossings(tr, args.threshold, refine=not args.no_refine,
                                  backend=args.backend)
        return json_text(rep.to_dict())

    return run


def cmd_momentum(args):
    spec, gauge = _lattice(args), Gauge.parse(args.gauge)
    _finite("alpha", args.alpha)
    source = mom.Source(args.source)
    if args.peaks is not None and args.peaks < 1:
        raise InvalidParameterError(f"--peaks must be >= 1, got {args.peaks}")

    def run():
        mmap = mom.sine_transform_2d(gs.ground_state(spec, gauge, args.alpha, args.backend), source)
        if args.peaks is not None:
            rows = ((p.kp, p.kq, p.magnitude) for p in mom.find_peaks(mmap, args.peaks))
        else:
            mag, kp, kq = mmap.magnitude, mmap.kp, mmap.kq
            rows = ((kp[m], kq[n], mag[m, n]) for m in range(len(kp)) for n in range(len(kq)))
        return csv_text(["kp", "kq", "magnitude"], rows)

    return run


def cmd_validate(args):
    if args.preset == "paper":
        spec = em.REFERENCE_PRESET
    else:
        if None in (args.g, args.T, args.delta):
            raise InvalidParameterError("give --preset paper or all of --g, --T, --delta")
        theta = tuple(args.theta) if args.theta else (0.0,) * args.sites
        spec = em.FullModelSpec(g=args.g, T=args.T, delta=args.delta, theta=theta, N=args.N,
                                photon_cutoff=args.cutoff, channel=args.channel)
    method = em.Method(args.method)

    def run():
        if method is em.Method.SCHUR:
            res = em.schur_effective_hopping(spec)
        else:
            res = em.dynamics_effective_hopping(spec)
        out = res.to_dict()
        if spec is em.REFERENCE_PRESET:
            out["units"] = "MHz (all rates divided by 2 pi)"
        out["model"] = {"g": spec.g, "T": spec.T, "delta": spec.delta, "theta": list(spec.theta),
                        "N": spec.N, "photon_cutoff": spec.photon_cutoff,
                        "channel": spec.channel.value}
        return json_text(out)

    return run


def cmd_fit_alpha0(args):
    gauge, jobs = Gauge.parse(args.gauge), _jobs(args)
    for L in args.sizes:
        if L < 5:
            raise InvalidParameterError(f"--sizes entries must be >= 5, got {L}")
    if not args.step > 0:
        raise InvalidParameterError(f"--step must be positive, got {args.step}")
    if not 0 < args.threshold < 1:
        raise InvalidParameterError(f"--threshold must lie in (0, 1), got {args.threshold}")
    _finite("alpha-max", args.alpha_max)

    def run():
        fits = gs.fit_alpha0(args.sizes, gauge, args.step, args.alpha_max, args.threshold, jobs,
                             args.backend)
        return csv_text(["L", "alpha0", "prediction", "deviation"],
                        ((f.L, f.alpha0, f.prediction, f.relative_deviation) for f in fits))

    return run


def _add_lattice(p):
    p.add_argument("--size", type=int, help="square lattice side L")
    p.add_argument("--lp", type=int, help="rows L_p (overrides --size)")
    p.add_argument("--lq", type=int, help="columns L_q (overrides --size)")
    p.add_argument("--J", type=float, default=1.0, help="hopping strength (default 1)")
    p.add_argument("--gauge", default="symmetric", choices=[g.value for g in Gauge])


def _add_common(p, jobs=False):
    p.add_argument("-o", "--output", help="output file (default stdout)")
    p.add_argument("--backend", choices=eigensolver.BACKENDS, default=None,
                   help=f"eigensolver kernel (default {eigensolver.DEFAULT_BACKEND})")
    if jobs:
        p.add_argument("--jobs", type=int, default=default_workers(),
                       help="parallel workers (default: all cores)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hofstadter-lab",
        description="Finite Harper-Hofstadter lattices: spectra, ground states, crossings.",
        epilog=EXIT_CODES_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, jobs=False, lattice=True):
        p = sub.add_parser(name, help=help_, epilog=EXIT_CODES_HELP,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        if lattice:
            _add_lattice(p)
        _add_common(p, jobs)
        p.set_defaults(func=fn)
        return p

    p = add("butterfly", cmd_butterfly, "full spectrum on a flux grid (CSV alpha,index,energy)", True)
    p.add_argument("--steps", type=int, default=201)
    p.add_argument("--alpha-min", type=float, default=0.0)
    p.add_argument("--alpha-max", type=float, default=1.0)

    for name, fn, h in (("ground", cmd_ground, "ground-state amplitudes (CSV p,q,re,im,abs2)"),
                        ("density", cmd_density, "ground-state density (CSV p,q,density)")):
        p = add(name, fn, h)
        p.add_argument("--alpha", type=float, required=True)

    for name, fn, h in (("fidelity", cmd_fidelity, "ground-state fidelity (CSV alpha,fidelity)"),
                        ("crossings", cmd_crossings, "level crossings (JSON report)")):
        p = add(name, fn, h, True)
        p.add_argument("--alpha-min", type=float, default=0.0)
        p.add_argument("--alpha-max", type=float, default=0.6)
        p.add_argument("--step", type=float, default=gs.DEFAULT_STEP)
        if name == "crossings":
            p.add_argument("--threshold", type=float, default=gs.DEFAULT_THRESHOLD)
            p.add_argument("--no-refine", action="store_true", help="skip bisection refinement")

    p = add("momentum", cmd_momentum, "sine-transform magnitudes (CSV kp,kq,magnitude)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--source", choices=[s.value for s in mom.Source], default="wavefunction")
    p.add_argument("--peaks", type=int, help="emit only the top N local maxima")

    p = add("validate-effective", cmd_validate, "micro-model hopping check (JSON)", lattice=False)
    p.add_argument("--preset", choices=["paper"], help="g=8, T=4, delta=40 (MHz x 2pi)")
    p.add_argument("--g", type=float)
    p.add_argument("--T", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--theta", type=float, nargs="+", help="drive phase per site (2 or 3 values)")
    p.add_argument("--sites", type=int, default=2, choices=[2, 3])
    p.add_argument("--N", type=int, default=1, help="spins per site")
    p.add_argument("--cutoff", type=int, default=1, help="photon cutoff per mode")
    p.add_argument("--channel", choices=[c.value for c in em.Channel], default="b")
    p.add_argument("--method", choices=[m.value for m in em.Method], default="SchurComplement")

    p = add("fit-alpha0", cmd_fit_alpha0, "first crossing vs 2/(L+1) (CSV)", True, lattice=False)
    p.add_argument("--sizes", type=int, nargs="+", default=[5, 6, 7, 8, 9, 10])
    p.add_argument("--gauge", default="symmetric", choices=[g.value for g in Gauge])
    p.add_argument("--step", type=float, default=gs.DEFAULT_STEP)
    p.add_argument("--alpha-max", type=float, default=gs.FIT_ALPHA_MAX)
    p.add_argument("--threshold", type=float, default=gs.DEFAULT_THRESHOLD)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        run = args.func(args)
    except Exception as exc:  # noqa: BLE001 - every failure becomes one diagnostic line
        print(f"hofstadter-lab: error: {exc}", file=sys.stderr)
        return _error_code(exc)
    try:
        text = run()
        write_text(text, args.output)
    except Exception as exc:  # noqa: BLE001
        print(f"hofstadter-lab: error: {exc}", file=sys.stderr)
        return _error_code(exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
