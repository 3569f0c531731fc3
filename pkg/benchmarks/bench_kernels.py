"""Compare the compiled and pure-Python point-counting kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each workload is counted with both backends; the counts must agree.
"""
import argparse
import sys
import time

from zetaspaces import kernels
from zetaspaces.ffgeom import VarietySpec, count_points
from zetaspaces.ffield import FiniteField

WORKLOADS = [
    ("elliptic curve y^2+y=x^3", VarietySpec.affine(2, ["y^2+y-x^3"]), (2, 12)),
    ("elliptic curve y^2+y=x^3", VarietySpec.affine(2, ["y^2+y-x^3"]), (3, 9)),
    ("surface x^2+y^2+z^2=1", VarietySpec.affine(3, ["x^2+y^2+z^2-1"]), (5, 3)),
    ("projective cubic curve", VarietySpec.projective(2, ["y^2*z+y*z^2-x^3"]), (7, 4)),
    ("two quadrics in A^3", VarietySpec.affine(3, ["x*y-z^2", "x+y+z-1"]), (2, 8)),
]


def use(backend):
    if backend == "cython":
        kernels._impl, kernels.BACKEND = kernels.c_kernels, "cython"
    else:
        kernels._impl, kernels.BACKEND = kernels.python_kernels, "python"


def timed(X, F, repeat):
    best, count = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        count = count_points(X, F)
        best = min(best, time.perf_counter() - t)
    return count, best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.c_kernels is None:
        print("compiled kernels are not built; reinstall with Cython available", file=sys.stderr)
        return 1
    print(f"{'workload':32} {'q':>6} {'count':>10} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, X, (p, k) in WORKLOADS:
        F = FiniteField(p, k)
        F.tables()
        results = {}
        for backend in ("python", "cython"):
            use(backend)
            results[backend] = timed(X, F, args.repeat)
        (cp, tp), (cc, tc) = results["python"], results["cython"]
        if cp != cc:
            print(f"MISMATCH on {name} over F_{F.q}: python {cp}, cython {cc}", file=sys.stderr)
            return 1
        print(f"{name:32} {F.q:>6} {cc:>10} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
