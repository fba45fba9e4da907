"""Compare the compiled Monte Carlo kernels with the NumPy fallback.

Usage::

    python benchmarks/bench_kernels.py [--trajectories 200000] [--steps 20] [--repeat 3]

Prints wall time per backend and workload, the speed-up over the pure-Python
backend, and the largest difference between backend estimates.
"""

import argparse
import time

import numpy as np

from phasekick import _backend
from phasekick.montecarlo import SamplerSpec, mc_trace
from phasekick.noise import FullyCorrelatedGaussian, IIDGaussian, ParrondoParams, parrondo_mixture


def workloads(steps, trajectories):
    return {
        "parrondo mixture": SamplerSpec(parrondo_mixture(ParrondoParams(1e-3)), steps, trajectories, 1),
        "iid gaussian": SamplerSpec(IIDGaussian(0.02), steps, trajectories, 2),
        "correlated gaussian": SamplerSpec(FullyCorrelatedGaussian(0.001), steps, trajectories, 3),
    }


def best_of(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trajectories", type=int, default=200_000)
    ap.add_argument("--steps", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)

    backends = sorted(_backend.BACKENDS)
    if "cython" not in backends:
        print("compiled extension not available; only the python backend will run")
    print(f"steps={args.steps} trajectories={args.trajectories} workers={args.workers}")
    print(f"{'workload':<22}{'backend':<9}{'seconds':>9}{'speed-up':>10}{'max |diff|':>12}")
    for name, spec in workloads(args.steps, args.trajectories).items():
        results = {}
        for be in backends:
            results[be] = best_of(
                lambda: mc_trace(spec, workers=args.workers, backend=be).trace.factors, args.repeat
            )
        base_t, base_f = results["python"]
        for be in backends:
            t, f = results[be]
            diff = float(np.max(np.abs(f - base_f)))
            print(f"{name:<22}{be:<9}{t:>9.3f}{base_t / t:>9.1f}x{diff:>12.1e}")


if __name__ == "__main__":
    main()
