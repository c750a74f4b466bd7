"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Each kernel is run on identical inputs under both backends; outputs are
checked for equality before timings are reported.  The last section times a
full Delaunay computation in a subprocess per backend.
"""

import argparse
import os
import random
import subprocess
import sys
import timeit
from fractions import Fraction

import numpy as np

from tropjac import _pykernels
from tropjac.delaunay import _Enumerator

try:
    from tropjac import _ckernels
except ImportError:
    _ckernels = None

D4 = [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]]
K4 = [[22, -7, -13], [-7, 23, -11], [-13, -11, 27]]

E2E = """
import time
from tropjac.delaunay import delaunay_subdivision
from tropjac._kernels import BACKEND
Q = {Q}
t = time.perf_counter()
for _ in range({n}):
    delaunay_subdivision(Q)
print(BACKEND, (time.perf_counter() - t) / {n})
"""


def ellipsoid_args(Q, radius):
    en = _Enumerator([[Fraction(x) for x in row] for row in Q])
    return en.Lf, en.df, [0.3] * len(Q), radius


def hull_args(n_points, dim, seed=0):
    rng = random.Random(seed)
    pts = [tuple(rng.randint(-50, 50) for _ in range(dim)) for _ in range(n_points)]
    normal = [rng.randint(-9, 9) for _ in range(dim)]
    return normal, 3, pts, np.array(pts, dtype=np.int64), list(range(n_points))


def bench(label, fn_py, fn_c, repeat):
    t_py = min(timeit.repeat(fn_py, number=1, repeat=repeat))
    if fn_c is None:
        print(f"{label:<34} python {t_py * 1e3:9.2f} ms   cython      n/a")
        return
    t_c = min(timeit.repeat(fn_c, number=1, repeat=repeat))
    print(f"{label:<34} python {t_py * 1e3:9.2f} ms   cython {t_c * 1e3:9.2f} ms   x{t_py / t_c:6.1f}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args()

    for name, Q, radius in (("K4 form", K4, 400.0), ("D4 lattice", D4, 30.0)):
        L, d, c, b = ellipsoid_args(Q, radius)
        ref = sorted(_pykernels.ellipsoid_candidates(L, d, c, b))
        fn_c = None
        if _ckernels is not None:
            got = sorted(tuple(y) for y in _ckernels.ellipsoid_candidates(L, d, c, b))
            assert got == ref, f"backends disagree on {name}"
            fn_c = lambda: _ckernels.ellipsoid_candidates(L, d, c, b)  # noqa: E731
        bench(f"ellipsoid {name} ({len(ref)} pts)",
              lambda: _pykernels.ellipsoid_candidates(L, d, c, b), fn_c, args.repeat)

    for n, dim in ((20000, 4), (20000, 5)):
        normal, off, pts, arr, idxs = hull_args(n, dim)
        ref = _pykernels.positive_side(normal, off, pts, idxs)
        fn_c = None
        if _ckernels is not None:
            assert list(_ckernels.positive_side(normal, off, arr, idxs)) == ref
            fn_c = lambda: _ckernels.positive_side(normal, off, arr, idxs)  # noqa: E731
        bench(f"positive_side n={n} dim={dim}",
              lambda: _pykernels.positive_side(normal, off, pts, idxs), fn_c, args.repeat)

    if args.skip_e2e:
        return
    for flag in ("0", "1"):
        env = dict(os.environ, TROPJAC_PURE_PYTHON=flag)
        code = E2E.format(Q=D4, n=2)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        backend, secs = out.stdout.split()
        print(f"delaunay D4 end to end ({backend:<7})   {float(secs):9.3f} s")


if __name__ == "__main__":
    main()
