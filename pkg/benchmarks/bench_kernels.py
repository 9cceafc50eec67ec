#!/usr/bin/env python3
"""Time the numba and numpy Monte Carlo kernels on the same inputs.

Usage:
  python benchmarks/bench_kernels.py [--samples N] [--repeat R]
"""

import argparse
import time

import numpy as np

from memdeph import kernels
from memdeph.engine import _bell_pipeline
from memdeph.errormodel import ChannelParams


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=1_000_000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if not kernels.HAVE_NUMBA:
        print("numba not installed; only the numpy backend is available")

    params = ChannelParams(0.999, 0.1)
    rng = np.random.default_rng(0)
    print(f"{'kernel':<28}{'code':<6}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}")
    for code in ("uncoded", "c2", "c1"):
        pipe = _bell_pipeline(code)
        uniforms = rng.random((args.samples, len(pipe.qubit_masks)))
        scale = 1.0
        bits = kernels.sample_markov_bits_numpy(uniforms, params.pz, params.mu)
        cases = {
            "sample_markov_bits": (
                lambda: kernels.sample_markov_bits_numpy(uniforms, params.pz, params.mu),
                lambda: kernels.sample_markov_bits_numba(uniforms, params.pz, params.mu),
            ),
            "trajectory_fidelities": (
                lambda: kernels.trajectory_fidelities_numpy(
                    bits, pipe.encoded, pipe.decoder, pipe.ref, pipe.qubit_masks, scale
                ),
                lambda: kernels.trajectory_fidelities_numba(
                    bits, pipe.encoded, pipe.decoder, pipe.ref, pipe.qubit_masks, scale
                ),
            ),
        }
        for name, (np_fn, nb_fn) in cases.items():
            t_np = best_of(np_fn, args.repeat)
            if kernels.HAVE_NUMBA:
                nb_fn()  # compile
                t_nb = best_of(nb_fn, args.repeat)
                print(f"{name:<28}{code:<6}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>10.1f}")
            else:
                print(f"{name:<28}{code:<6}{t_np:>12.4f}{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
