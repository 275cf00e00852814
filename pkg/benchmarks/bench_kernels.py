"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Both backends produce bit-identical results; the script checks that too.
"""

import argparse
import time

import numpy as np

from keynodes import _backend, keychain, meanfield
from keynodes.netsim import graph as G
from keynodes.netsim import sim
from keynodes.rates import preset


def best_of(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def ode_cases():
    aging = preset("aging")
    return {
        "activation to t=2000, aging": lambda b: meanfield.solve_activation(
            aging, 2000.0, backend=b).values.tobytes(),
        "E[tau_6], aging": lambda b: keychain.expected_hitting_time(aging, 6, backend=b).value,
        "E[tau_6], const": lambda b: keychain.expected_hitting_time(preset("const"), 6,
                                                                    backend=b).value,
    }


def sim_cases(quick):
    n = 2000 if quick else 10_000
    g = G.generate_pa(n, 3, seed=1)
    cfg = sim.SimConfig(preset("exp-const"), 0.3, 2, 4, 11, n=n, m=3)

    def run(b):
        est = sim.simulate(g, cfg, backend=b)
        return est.key_times.tobytes() + est.curve_a_bar.tobytes()

    return {f"Gillespie, n={n}, 4 replicates": run}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller simulation")
    args = ap.parse_args(argv)

    try:
        _backend.get("compiled")
    except ImportError:
        print("compiled extension not built; nothing to compare")
        return 1

    cases = {**ode_cases(), **sim_cases(args.quick)}
    print(f"{'case':34s} {'compiled':>10s} {'python':>10s} {'speed-up':>9s}  same")
    for name, fn in cases.items():
        tc, rc = best_of(lambda: fn("compiled"), args.repeat)
        tp, rp = best_of(lambda: fn("python"), 1)
        same = rc == rp if isinstance(rc, bytes) else bool(np.float64(rc) == np.float64(rp))
        print(f"{name:34s} {tc:9.4f}s {tp:9.3f}s {tp / tc:8.0f}x  {same}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
