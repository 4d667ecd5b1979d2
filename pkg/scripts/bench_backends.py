#!/usr/bin/env python3
"""Compare the compiled and pure-Python kernel backends.

Times every kernel on both backends over identical inputs and, with
--full-run, times one complete search per backend in fresh subprocesses so
the CIXL2_BACKEND import-time switch is exercised end to end.

The elementwise crossover kernels agree bitwise across backends; kernels
with pow calls or reductions agree to near-ulp relative error, so full-run
trajectories may diverge late in a search even with equal seeds.
"""

import argparse
import json
import math
import subprocess
import sys
import time

import numpy as np

from cixl2 import _kernels_py as pyk

try:
    from cixl2 import _kernels as ck
except ImportError:
    ck = None

FULL_RUN_SNIPPET = """\
import json, time
from cixl2._backend import BACKEND, kernels
from cixl2.benchmarks import make_benchmark
from cixl2.crossover import make_operator
from cixl2.ga import GAConfig, run_ga

bench = make_benchmark("sphere", 30)
operator = make_operator("cixl2", 30, n_best=5, confidence=0.70)
config = GAConfig(eval_budget={budget}, seed=0)
t0 = time.perf_counter()
record = run_ga(config, bench.domain, bench, operator)
t1 = time.perf_counter()
print(json.dumps({{"backend": BACKEND, "seconds": t1 - t0,
                   "best": record.best.objective,
                   "evaluations": record.evaluations[-1]}}))
"""


def build_inputs(rows, genes, seed=7):
    rng = np.random.default_rng(seed)
    lower = np.full(genes, -5.12)
    upper = np.full(genes, 5.12)
    anchors = np.sort(rng.uniform(-5.12, 5.12, (3, genes)), axis=0)
    return {
        "g1": rng.uniform(-5.12, 5.12, (rows, genes)),
        "g2": rng.uniform(-5.12, 5.12, (rows, genes)),
        "p3": rng.uniform(-5.12, 5.12, (rows, genes)),
        "u": rng.random((rows, genes)),
        "pick": rng.integers(0, 2, (rows, genes)),
        "parent_obj": rng.uniform(0.0, 10.0, rows),
        "cill": anchors[0], "cim": anchors[1], "ciul": anchors[2],
        "r": rng.random((rows, genes)),
        "xi": rng.standard_normal(rows),
        "z": rng.standard_normal((rows, genes)),
        "gate": rng.random((rows, genes)),
        "tau": rng.integers(0, 2, (rows, genes)),
        "x": rng.uniform(-5.12, 5.12, (rows, genes)),
        "lower": lower, "upper": upper,
    }


def kernel_calls(d, genes):
    sigma_eta = 0.35 / math.sqrt(genes)
    return [
        ("cixl2_children", lambda k: k.cixl2_children(
            d["g1"], d["parent_obj"], d["cill"], d["cim"], d["ciul"],
            0.3, 0.1, 0.7, d["r"], d["lower"], d["upper"])),
        ("blx_children", lambda k: k.blx_children(
            d["g1"], d["g2"], 0.5, d["u"], d["lower"], d["upper"])),
        ("sbx_children", lambda k: k.sbx_children(
            d["g1"], d["g2"], 2.0, d["u"], d["lower"], d["upper"])),
        ("fuzzy_children", lambda k: k.fuzzy_children(
            d["g1"], d["g2"], 0.5, d["pick"], d["u"], d["lower"], d["upper"])),
        ("undx_children", lambda k: k.undx_children(
            d["g1"], d["g2"], d["p3"], 0.5, sigma_eta, d["xi"], d["z"],
            d["lower"], d["upper"])),
        ("mutate", lambda k: k.mutate(
            d["x"], d["lower"], d["upper"], 0.05, 0.59049,
            d["gate"], d["tau"], d["r"])),
        ("eval_sphere", lambda k: k.eval_sphere(d["x"])),
        ("eval_rastrigin", lambda k: k.eval_rastrigin(d["x"])),
        ("eval_ackley", lambda k: k.eval_ackley(d["x"])),
        ("eval_griewangk", lambda k: k.eval_griewangk(d["x"])),
    ]


def best_of(call, module, repeats):
    call(module)  # warm up
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        call(module)
        best = min(best, time.perf_counter() - t0)
    return best


def run_micro(rows, genes, repeats):
    d = build_inputs(rows, genes)
    print(f"kernel timings, batch {rows}x{genes}, best of {repeats}:")
    header = f"{'kernel':<16} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, call in kernel_calls(d, genes):
        py_ms = best_of(call, pyk, repeats) * 1e3
        if ck is None:
            print(f"{name:<16} {py_ms:>10.3f} {'n/a':>12} {'n/a':>8}")
        else:
            ck_ms = best_of(call, ck, repeats) * 1e3
            print(f"{name:<16} {py_ms:>10.3f} {ck_ms:>12.3f} {py_ms / ck_ms:>7.1f}x")


def run_full(budget):
    print(f"\nfull search, sphere p=30, budget {budget}, seed 0:")
    for backend in ("python", "compiled") if ck is not None else ("python",):
        proc = subprocess.run(
            [sys.executable, "-c", FULL_RUN_SNIPPET.format(budget=budget)],
            env={"CIXL2_BACKEND": backend, "PATH": "/usr/bin:/bin"},
            capture_output=True, text=True)
        if proc.returncode != 0:
            print(f"  {backend}: failed\n{proc.stderr}", file=sys.stderr)
            continue
        out = json.loads(proc.stdout)
        print(f"  {out['backend']:<9} {out['seconds']:8.2f} s   "
              f"best {out['best']:.3e}   evaluations {out['evaluations']}")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=2000)
    parser.add_argument("--genes", type=int, default=30)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--full-run", action="store_true",
                        help="also time one complete search per backend")
    parser.add_argument("--budget", type=int, default=60000,
                        help="evaluation budget for --full-run")
    args = parser.parse_args(argv)
    if ck is None:
        print("compiled extension not available; timing the python backend only")
    run_micro(args.rows, args.genes, args.repeats)
    if args.full_run:
        run_full(args.budget)
    return 0


if __name__ == "__main__":
    sys.exit(main())
