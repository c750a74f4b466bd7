"""Kernel backend selection.

The compiled extension is used when it imports; ``TROPJAC_PURE_PYTHON=1``
forces the fallback.  Both backends honour the same contracts, and every
caller re-checks their output with exact arithmetic.
"""

import os

from . import _pykernels

BACKEND = "python"
_c = None
if os.environ.get("TROPJAC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _c  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:  # extension not built
        _c = None

# int64 products must stay well inside range for the compiled dot products
_SAFE = 1 << 60


def ellipsoid_candidates(L, d, center, bound):
    if _c is not None:
        return _c.ellipsoid_candidates(L, d, center, bound)
    return _pykernels.ellipsoid_candidates(L, d, center, bound)


def positive_side(normal, offset, coords, idxs, array=None, maxabs=None):
    """Indices in ``idxs`` strictly on the positive side of normal.x = offset.

    ``array`` is an optional int64 numpy copy of ``coords``; ``maxabs`` bounds
    its entries.  The compiled path is used only when no overflow is possible.
    """
    if _c is not None and array is not None and maxabs is not None:
        nmax = max((abs(a) for a in normal), default=0)
        if nmax * maxabs * len(normal) < _SAFE and abs(offset) < _SAFE:
            return _c.positive_side(normal, offset, array, idxs)
    return _pykernels.positive_side(normal, offset, coords, idxs)
