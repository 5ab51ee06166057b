"""Compare the compiled and numpy eigensolver kernels.

    python benchmarks/bench_kernels.py [--sizes 5 10 15 20] [--repeat 3]

Times a full complex decomposition of the L x L lattice Hamiltonian (the
solver works on the 2L^2 real embedding) and a short flux sweep, and checks
that both backends return the same eigenvalues.
"""

import argparse
import time

import numpy as np

from hofstadter_lab import eigensolver
from hofstadter_lab.lattice import GaugeConfig, LatticeSpec, build_hamiltonian
from hofstadter_lab.spectrum import butterfly_scan


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", type=int, nargs="+", default=[5, 10, 15, 20])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--sweep-steps", type=int, default=21)
    args = ap.parse_args(argv)

    backends = eigensolver.BACKENDS
    if "compiled" not in backends:
        print("compiled kernel not built; only the numpy fallback is available")
    print(f"{'L':>3} {'n':>5} " + " ".join(f"{b + ' eigh [s]':>18}" for b in backends)
          + f" {'speedup':>8} {'max |dE|':>10}")
    for L in args.sizes:
        h = build_hamiltonian(LatticeSpec.square(L), GaugeConfig(0.3))
        times = {b: best_of(lambda b=b: eigensolver.eigh(h, b), args.repeat) for b in backends}
        vals = {b: eigensolver.eigvalsh(h, b) for b in backends}
        ref = np.linalg.eigvalsh(h)
        dev = max(float(np.abs(v - ref).max()) for v in vals.values())
        speed = times["python"] / times["compiled"] if len(backends) == 2 else float("nan")
        print(f"{L:>3} {L * L:>5} " + " ".join(f"{times[b]:>18.4f}" for b in backends)
              + f" {speed:>8.1f} {dev:>10.1e}")

    L = max(args.sizes)
    print(f"\nflux sweep, {L}x{L}, {args.sweep_steps} points, 1 worker")
    for b in backends:
        t = best_of(lambda b=b: butterfly_scan(LatticeSpec.square(L), steps=args.sweep_steps, backend=b), 1)
        print(f"  {b:>8}: {t:.3f} s")


if __name__ == "__main__":
    main()
