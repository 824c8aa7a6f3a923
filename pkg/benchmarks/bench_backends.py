#!/usr/bin/env python3
"""Timing comparison of the chunk kernels: compiled extension vs numpy.

Runs the full estimator pipeline (counter-based sampling, chunk
accumulation, ordered merge) once per available backend on identical
inputs, plus a sampling-only pass to show how much of the budget the RNG
takes. Flag counts must match bit for bit between backends; the script
exits nonzero if they do not.
"""

import argparse
import math
import sys
import time

from ehs_cnoma import model
from ehs_cnoma._kernels import numpy_impl
from ehs_cnoma.model import SystemParams
from ehs_cnoma.montecarlo import _chunk_bounds, _merge
from ehs_cnoma.protocols import thresholds


def load_impls():
    impls = {"python": numpy_impl.accumulate_chunk}
    try:
        from ehs_cnoma._kernels import _compiled

        impls["compiled"] = _compiled.accumulate_chunk
    except ImportError:
        print("compiled extension not built; timing the fallback only")
    return impls


def run_pipeline(impl, params, varz, thr, trials, seed):
    total = None
    for lo, hi in _chunk_bounds(trials):
        g_ccu, g_ceu, g_relay = model.sample_gains(varz, seed, lo, hi)
        part = impl(
            g_ccu,
            g_ceu,
            g_relay,
            params.rho,
            params.p_n,
            params.p_f,
            params.p_total,
            params.alpha,
            params.delta,
            params.eta,
            thr.psi_r1,
            thr.psi_r2,
            thr.psi_r3,
            True,
        )
        total = part if total is None else _merge(total, part)
    return total


def sample_only(varz, trials, seed):
    for lo, hi in _chunk_bounds(trials):
        model.sample_gains(varz, seed, lo, hi)


def best_of(fn, repeat):
    best = math.inf
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=1_000_000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    params = SystemParams(rho=10.0 ** 1.5)
    varz = model.variances_from_distances(params)
    thr = thresholds(params)

    t_sample, _ = best_of(lambda: sample_only(varz, args.trials, args.seed), args.repeat)
    print(f"sampling only      {t_sample:8.3f} s   {args.trials / t_sample:12.0f} trials/s")

    results = {}
    for name, impl in load_impls().items():
        t_run, total = best_of(
            lambda impl=impl: run_pipeline(impl, params, varz, thr, args.trials, args.seed),
            args.repeat,
        )
        results[name] = (t_run, total)
        print(
            f"pipeline {name:9s} {t_run:8.3f} s   {args.trials / t_run:12.0f} trials/s   "
            f"kernel share {(t_run - t_sample) / t_run:5.1%}"
        )

    if len(results) == 2:
        t_py = results["python"][0]
        t_c = results["compiled"][0]
        print(f"speedup compiled/python: {t_py / t_c:.2f}x on the full pipeline")
        counts_py = results["python"][1][4]
        counts_c = results["compiled"][1][4]
        if list(counts_py) != list(counts_c):
            print("ERROR: backends disagree on outage counts", file=sys.stderr)
            return 1
        print("outage counts identical across backends")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
