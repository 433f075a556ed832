"""Timing comparison of the compiled kernels against the pure fallback.

Run as ``python -m anytime_compare.benchmark``.  Each workload is timed
on both module instances (``kernels.pure`` and ``kernels.compiled``)
with a warm-up call first, so numba's compile time is not charged to the
measurement.  With ANYTIME_COMPARE_NO_NUMBA set, or numba missing, only
the pure column is reported.
"""

import argparse
import sys
import time

import numpy as np

from . import kernels


def _drift_path(rounds: int):
    # a mildly drifting differential stream with realistic magnitudes
    rng = np.random.Generator(np.random.Philox(key=[17, 4]))
    diffs = np.clip(rng.normal(0.01, 0.25, rounds), -1.0, 1.0)
    s = np.cumsum(diffs)
    vhat = np.cumsum(diffs * diffs)
    return s, vhat


def _outcomes(rounds: int):
    rng = np.random.Generator(np.random.Philox(key=[17, 5]))
    return (rng.uniform(size=rounds) < 0.6).astype(np.float64)


def _workloads(rounds: int):
    s, vhat = _drift_path(rounds)
    y = _outcomes(rounds)
    y_small = y[: max(rounds // 10, 1)]
    return [
        ("gamma_exp_log_m_path", lambda mod: mod.gamma_exp_log_m_path(s, vhat, 5.0, 2.0)),
        ("gamma_exp_max_log_m", lambda mod: mod.gamma_exp_max_log_m(s, vhat, 5.0, 2.0)),
        (
            "gamma_exp_two_sided_crossed",
            lambda mod: mod.gamma_exp_two_sided_crossed(s, vhat, 5.0, 2.0, 1e9),
        ),
        ("k29_poly_path(deg 3)", lambda mod: mod.k29_poly_path(y, 3)),
        # rbf is O(t) per step; keep its input a tenth of the others
        ("k29_rbf_path(sigma 0.1)", lambda mod: mod.k29_rbf_path(y_small, 0.1)),
    ]


def _time(fn, mod, repeats: int) -> float:
    fn(mod)                             # warm-up / JIT
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(mod)
        best = min(best, time.perf_counter() - t0)
    return best


def run(rounds: int, repeats: int, out=sys.stdout) -> None:
    modes = [("pure", kernels.pure)]
    if kernels.compiled is not None:
        modes.append(("numba", kernels.compiled))
    else:
        print(f"numba path unavailable ({kernels.ENV_FLAG} set or numba missing)", file=out)

    header = f"{'kernel':<28}{'n':>8}" + "".join(f"{name:>12}" for name, _ in modes)
    if len(modes) == 2:
        header += f"{'speedup':>10}"
    print(header, file=out)
    for name, fn in _workloads(rounds):
        n = rounds // 10 if "rbf" in name else rounds
        times = [_time(fn, mod, repeats) for _, mod in modes]
        row = f"{name:<28}{n:>8}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2 and times[1] > 0:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row, file=out)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="anytime-compare-benchmark",
        description="compare pure-Python and numba kernel timings",
    )
    parser.add_argument("--rounds", type=int, default=20_000, help="path length")
    parser.add_argument("--repeats", type=int, default=5, help="timed repeats, best kept")
    args = parser.parse_args(argv)
    if args.rounds < 10 or args.repeats < 1:
        parser.error("need --rounds >= 10 and --repeats >= 1")
    run(args.rounds, args.repeats)
    return 0


if __name__ == "__main__":
    sys.exit(main())
