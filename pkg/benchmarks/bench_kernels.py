"""Time the numba and numpy backends of the hot loops on realistic inputs.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Each kernel is run once per backend before timing so compilation (or the numba
on-disk cache load) is excluded; the table reports the best of N runs and the
largest difference between the two backends' outputs.
"""

import argparse
import time

import numpy as np

from walkgroup import _kernels
from walkgroup.catalog import R_ONE_THIRD, case_exemplar, krsp4
from walkgroup.group_orbit_oracle import curve_point
from walkgroup.kernel_algebra import build_kernel


def cases():
    rng = np.random.default_rng(0)
    w = rng.uniform(0, 1, 2000) + 1j * rng.uniform(0, 1, 2000)
    yield "lattice_sums (2000 pts, tau=1.1i)", "lattice_sums", (w, 1.1j, 8)
    yield "tanh_sinh (h=1/256)", "tanh_sinh", (0.1, 0.9, -2.0, np.array([1.5, -3.0]), True, True, 1 / 256, 4.5)
    for name, walk in (("orbit r13 (500 it)", R_ONE_THIRD), ("orbit case5 (500 it)", case_exemplar(5)),
                       ("orbit krsp4(12)", krsp4(12))):
        k = build_kernel(walk)
        x0, y0 = curve_point(walk)
        yield name, "orbit", (complex(x0), complex(y0), k.coefficient_matrix(), 500, 1e-9)
    coefs = rng.normal(size=(300, 5)).astype(np.complex128)
    yield "newton (300 quartics)", "newton_many", coefs


def run(backend, kind, args):
    if kind == "newton_many":
        out = []
        for c in args:
            roots = np.roots(c[::-1]).astype(np.complex128)
            out.append(backend.newton(c, roots, 50))
        return np.concatenate(out)
    return getattr(backend, kind)(*args)


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def flatten(v):
    if isinstance(v, tuple):
        return np.concatenate([np.atleast_1d(np.asarray(x, dtype=np.complex128)) for x in v])
    return np.atleast_1d(np.asarray(v, dtype=np.complex128))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    nb, npb = _kernels.get_backend("numba"), _kernels.get_backend("numpy")
    print(f"{'kernel':<36}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}{'max diff':>11}")
    for label, kind, a in cases():
        r_nb, r_np = run(nb, kind, a), run(npb, kind, a)
        diff = float(np.max(np.abs(flatten(r_nb) - flatten(r_np))))
        t_nb = best_time(lambda: run(nb, kind, a), args.repeat)
        t_np = best_time(lambda: run(npb, kind, a), args.repeat)
        print(f"{label:<36}{1e3 * t_nb:>10.3f}{1e3 * t_np:>10.3f}{t_np / t_nb:>9.1f}{diff:>11.1e}")


if __name__ == "__main__":
    main()
