"""Kernel selection: compiled ``_core`` when importable, else ``_fallback``.

Set ``RANDPART_PURE=1`` to force the pure-Python kernels.
"""

import os

from . import _fallback

if os.environ.get("RANDPART_PURE", "") not in ("", "0"):
    _impl = _fallback
    COMPILED = False
else:
    try:
        from . import _core as _impl

        COMPILED = True
    except ImportError:
        _impl = _fallback
        COMPILED = False

BACKEND = "cython" if COMPILED else "python"

fill_u64 = _impl.fill_u64
fill_bounded = _impl.fill_bounded
join_maps = _impl.join_maps
sup_batch = _impl.sup_batch
inf_batch = _impl.inf_batch

__all__ = [
    "BACKEND",
    "COMPILED",
    "fill_u64",
    "fill_bounded",
    "join_maps",
    "sup_batch",
    "inf_batch",
]
