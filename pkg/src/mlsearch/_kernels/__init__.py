"""Kernel dispatch.

The hot loops exist twice: a numba-jitted module and a pure Python twin
with identical behavior.  MLS_KERNELS selects the backend:

    MLS_KERNELS=python   force the pure Python twin
    MLS_KERNELS=numba    require the jitted path (raise if unavailable)
    MLS_KERNELS=auto     jitted when numba imports, twin otherwise (default)
"""

import os

from . import _python

_choice = os.environ.get("MLS_KERNELS", "auto").strip().lower()
if _choice not in ("auto", "numba", "python"):
    raise ValueError(f"MLS_KERNELS must be auto, numba, or python, not {_choice!r}")

HAS_NUMBA = False
if _choice != "python":
    try:
        from . import _numba  # noqa: F401

        HAS_NUMBA = True
    except ImportError:
        if _choice == "numba":
            raise

if HAS_NUMBA:
    from . import _numba as _impl

    BACKEND = "numba"
else:
    _impl = _python
    BACKEND = "python"

hs_extend_batch = _impl.hs_extend_batch
sat_extend_batch = _impl.sat_extend_batch
tour_extend_batch = _impl.tour_extend_batch
hs_collect_leaves = _impl.hs_collect_leaves
sat_collect_leaves = _impl.sat_collect_leaves
tour_collect_leaves = _impl.tour_collect_leaves
greedy_cover = _impl.greedy_cover
covering_exhaustive = _impl.covering_exhaustive
covering_missing_sampled = _impl.covering_missing_sampled

KERNEL_NAMES = (
    "hs_extend_batch",
    "sat_extend_batch",
    "tour_extend_batch",
    "hs_collect_leaves",
    "sat_collect_leaves",
    "tour_collect_leaves",
    "greedy_cover",
    "covering_exhaustive",
    "covering_missing_sampled",
)


def implementations():
    """Available (name, module) pairs, for parity tests and benchmarks."""
    out = [("python", _python)]
    if HAS_NUMBA:
        from . import _numba

        out.append(("numba", _numba))
    return out
