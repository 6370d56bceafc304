"""Time the numba loop kernels against their numpy counterparts.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

The first call of each jitted kernel is excluded (compilation). Set
TOEPLITZ_SPECTRA_THREADS to cap the numba thread pool.
"""
import argparse
import json
import time

import numpy as np

from toeplitz_spectra import kernels
from toeplitz_spectra._accel import HAS_NUMBA
from toeplitz_spectra.factorization import factorize
from toeplitz_spectra.symbols import TrigPoly, from_inside_roots
from toeplitz_spectra.toeplitz_core import build, hermitian_eigenvalues


def cases():
    rng = np.random.default_rng(0)
    k = np.arange(513)
    yield "levinson", (0.6 ** k / (1 - 0.36)).astype(complex), {}

    roots = rng.normal(size=40) + 1j * rng.normal(size=40)
    p = np.polynomial.polynomial.polyfromroots(roots).astype(complex)
    z0 = np.exp(1j * (2 * np.pi * np.arange(40) / 40 + 0.4)) * 1.5
    yield "aberth", (p, z0, 500, 1e-13), {"star": True}

    f = from_inside_roots([0.5, 0.3 * np.exp(1j * np.pi / 3), 0.3 * np.exp(-1j * np.pi / 3)])
    fac = factorize(f)
    args = (np.asarray(fac.alpha, complex), np.asarray(fac.beta, complex),
            np.asarray(fac.hres.simple, complex), np.asarray(fac.kres.simple, complex), 400)
    yield "band_t1", args, {"star": True}

    g = TrigPoly.from_cosine([2.5, -0.6, -0.2, 0.1])
    N = 256
    lam = hermitian_eigenvalues(build(g, N))
    yield "theta_offsets", (np.asarray(g.cosine_coefficients(), float), lam, N), {"star": True}


def best_of(fn, args, star, repeat):
    call = (lambda: fn(*args)) if star else (lambda: fn(args))
    call()  # warm up / compile
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        call()
        times.append(time.perf_counter() - t)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="write timings to this file")
    args = ap.parse_args(argv)
    rows = []
    print(f"numba available: {HAS_NUMBA}")
    print(f"{'kernel':<15}{'loops [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}")
    for name, a, opts in cases():
        loops, vec = kernels.KERNELS[name]
        t_loop = best_of(loops, a, opts.get("star", False), args.repeat)
        t_vec = best_of(vec, a, opts.get("star", False), args.repeat)
        rows.append({"kernel": name, "loops_s": t_loop, "numpy_s": t_vec})
        print(f"{name:<15}{1e3 * t_loop:12.3f}{1e3 * t_vec:12.3f}{t_vec / t_loop:10.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"numba": HAS_NUMBA, "timings": rows}, fh, indent=2)
    return rows


if __name__ == "__main__":
    main()
