import os
import random
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropjac import _kernels, _pykernels
from tropjac.delaunay import _Enumerator

try:
    from tropjac import _ckernels
except ImportError:
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


def random_form(rng, g):
    A = [[rng.randint(-3, 3) for _ in range(g)] for _ in range(g)]
    Q = [[sum(A[k][i] * A[k][j] for k in range(g)) + (i == j) for j in range(g)] for i in range(g)]
    return [[Fraction(x) for x in row] for row in Q]


@needs_ext
@given(st.integers(0, 10 ** 9), st.integers(1, 4))
@settings(max_examples=60, deadline=None)
def test_ellipsoid_backends_agree(seed, g):
    rng = random.Random(seed)
    en = _Enumerator(random_form(rng, g))
    center = [rng.uniform(-1, 1) for _ in range(g)]
    bound = rng.uniform(0.5, 12)
    ref = sorted(_pykernels.ellipsoid_candidates(en.Lf, en.df, center, bound))
    got = sorted(tuple(y) for y in _ckernels.ellipsoid_candidates(en.Lf, en.df, center, bound))
    assert got == ref


@needs_ext
@given(st.integers(0, 10 ** 9), st.integers(2, 5))
@settings(max_examples=60, deadline=None)
def test_positive_side_backends_agree(seed, dim):
    rng = random.Random(seed)
    pts = [tuple(rng.randint(-20, 20) for _ in range(dim)) for _ in range(50)]
    normal = [rng.randint(-5, 5) for _ in range(dim)]
    idxs = list(range(0, 50, 2))
    ref = _pykernels.positive_side(normal, 1, pts, idxs)
    got = list(_ckernels.positive_side(normal, 1, np.array(pts, dtype=np.int64), idxs))
    assert got == ref


def test_large_entries_use_fallback():
    big = 1 << 62
    pts = [(big, 0), (-big, 1)]
    arr = np.array([[0, 0], [0, 1]], dtype=np.int64)
    out = _kernels.positive_side([4, 1], 0, pts, [0, 1], array=arr, maxabs=big)
    assert out == [0]


def test_pure_python_switch():
    env = dict(os.environ, TROPJAC_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from tropjac._kernels import BACKEND; print(BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
