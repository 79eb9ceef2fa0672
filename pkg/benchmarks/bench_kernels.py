"""Compare the compiled kernels against the pure-python fallback.

Runs the radial quadrature and the path simulator under both backends and
prints a timing table.  The fallback is selected by re-executing this script
in a subprocess with OSLSIM_NO_NUMBA=1, because the backend is fixed at
import time.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def bench_radial(repeat):
    from oslsim import _kernels

    cases = [
        (np.array([1.7]), np.array([1.0])),
        (np.array([1.2, -0.5]), np.array([0.7, 2.1])),
        (np.array([0.83, -1.995]), np.array([0.644, 2.693])),
        (np.array([0.5, 0.8, -0.9]), np.array([0.6, 1.3, 2.4])),
    ]
    # warm up (JIT compilation on the numba backend)
    for p, a in cases:
        _kernels.radial_cos_integral(p, a, 1e-10, 60000)
    t0 = time.perf_counter()
    for _ in range(repeat):
        for p, a in cases:
            _kernels.radial_cos_integral(p, a, 1e-10, 60000)
    return (time.perf_counter() - t0) / (repeat * len(cases))


def bench_simulate(repeat):
    from oslsim import OslModel, SimConfig, simulate_summaries
    from oslsim.exponent_field import linear_blend_field, make_interpolated
    from oslsim.spectral import discrete

    model = OslModel(
        field=make_interpolated(
            np.eye(2) * 0.9,
            np.array([[1.6, 0.2], [0.2, 1.2]]),
            linear_blend_field([0.3, -0.2], 0.5),
        ),
        sigma=discrete(
            [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], [0.5] * 4
        ),
    )
    cfg = SimConfig(horizon=0.5, eps=1e-3, seed=11)
    simulate_summaries(model, [0.0, 0.0], cfg, 10, t_checks=[0.5])  # warm up
    n_paths = 200
    t0 = time.perf_counter()
    for _ in range(repeat):
        simulate_summaries(model, [0.0, 0.0], cfg, n_paths, t_checks=[0.5])
    return (time.perf_counter() - t0) / (repeat * n_paths)


def run(repeat):
    from oslsim import _kernels

    return {
        "backend": "numba" if _kernels.NUMBA_ENABLED else "python",
        "radial_s": bench_radial(repeat),
        "path_s": bench_simulate(repeat),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--emit-json", action="store_true", help="internal: print one result")
    args = ap.parse_args()

    if args.emit_json:
        print(json.dumps(run(args.repeat)))
        return

    results = [run(args.repeat)]
    env = dict(os.environ, OSLSIM_NO_NUMBA="1")
    out = subprocess.run(
        [sys.executable, __file__, "--repeat", str(args.repeat), "--emit-json"],
        capture_output=True,
        text=True,
        env=env,
    )
    if out.returncode != 0:
        sys.stderr.write(out.stderr)
        sys.exit(1)
    results.append(json.loads(out.stdout.strip().splitlines()[-1]))

    print(f"{'backend':<8} {'radial integral':>16} {'simulated path':>16}")
    for r in results:
        print(f"{r['backend']:<8} {r['radial_s'] * 1e3:>13.3f} ms {r['path_s'] * 1e3:>13.3f} ms")
    base, fall = results[0], results[1]
    if base["backend"] == "numba":
        print(
            f"speedup: radial x{fall['radial_s'] / base['radial_s']:.1f}, "
            f"paths x{fall['path_s'] / base['path_s']:.1f}"
        )


if __name__ == "__main__":
    main()
