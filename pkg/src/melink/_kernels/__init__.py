"""Kernel backend selection.

The compiled extension is preferred when present; the pure Python reference
module is the fallback. Set MELINK_BACKEND=python or MELINK_BACKEND=cython to
force one (forcing cython raises if the extension is missing).
"""

import os

from . import _ref

_forced = os.environ.get("MELINK_BACKEND", "").strip().lower()

if _forced == "python":
    _impl = _ref
elif _forced == "cython":
    from . import _core as _impl
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = _ref

BACKEND = _impl.BACKEND
llg_heun_run = _impl.llg_heun_run
rc_factor = _impl.rc_factor
rc_trapezoid_run = _impl.rc_trapezoid_run


def backend_name():
    """Name of the active kernel backend ('cython' or 'python')."""
    return BACKEND
