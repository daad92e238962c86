#!/usr/bin/env python3
"""Benchmark the master-equation generator kernels: numba versus numpy.

The generator application dominates integrator runtime, so this is the
number that decides whether NOONAMP_NO_NUMBA costs you anything.  Run:

    python benchmarks/bench_kernels.py [--dim 30] [--repeats 20]
"""

import argparse
import time

import numpy as np

from noonamp import _kernels
from noonamp.fock import ModeCutoffs, NoonSpec, build_noon
from noonamp.lindblad import IntegratorConfig, LindbladParams, evolve


def bench_generator(dim: int, repeats: int):
    rng = np.random.default_rng(0)
    d = dim * dim
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = np.ascontiguousarray(((g + g.conj().T) / 2).reshape(dim, dim, dim, dim))
    out = np.zeros_like(rho)
    sq = np.sqrt(np.arange(dim, dtype=float))

    variants = [("numpy", _kernels.gen_mode_a_numpy, _kernels.gen_mode_b_numpy)]
    if _kernels.BACKEND == "numba":
        variants.append(("numba", _kernels.gen_mode_a_numba, _kernels.gen_mode_b_numba))

    print(f"generator application, tensor {dim}^4 = {rho.size} complex entries")
    baseline = None
    for name, gen_a, gen_b in variants:
        out[:] = 0.0
        gen_a(rho, out, 1.0, 0.2, sq)  # warm (JIT) before timing
        t0 = time.perf_counter()
        for _ in range(repeats):
            out[:] = 0.0
            gen_a(rho, out, 1.0, 0.2, sq)
            gen_b(rho, out, 1.0, 0.2, sq)
        dt = (time.perf_counter() - t0) / repeats
        speedup = "" if baseline is None else f"  ({baseline / dt:.2f}x vs numpy)"
        if baseline is None:
            baseline = dt
        print(f"  {name:>6}: {dt * 1e3:8.2f} ms per two-mode application{speedup}")


def bench_evolve(dim: int):
    spec = NoonSpec(2)
    cutoffs = ModeCutoffs(dim, dim)
    params = LindbladParams(1.0, 0.0, ("a", "b"))
    cfg = IntegratorConfig(target_g_squared=1.3, step_size=1e-3)
    state = build_noon(spec, cutoffs)
    t0 = time.perf_counter()
    evolve(state, params, cfg)
    dt = time.perf_counter() - t0
    print(f"evolve to G^2=1.3 at {dim}x{dim} cutoffs "
          f"({_kernels.BACKEND} backend): {dt:.2f} s")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--dim", type=int, default=30)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()
    bench_generator(args.dim, args.repeats)
    bench_evolve(args.dim)
