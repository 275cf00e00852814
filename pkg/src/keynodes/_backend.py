"""Pick the compiled kernels when available, the pure-Python ones otherwise.

Set ``KEYNODES_PURE=1`` to force the fallback (used by the benchmark and the
backend-equivalence tests).
"""

import os

from . import _fallback

if os.environ.get("KEYNODES_PURE", "") not in ("", "0"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

kernels = _compiled if _compiled is not None else _fallback
BACKEND = "compiled" if _compiled is not None else "python"


def get(name):
    """Return the kernel module for ``name`` in {"compiled", "python"}."""
    if name == "python":
        return _fallback
    if name == "compiled":
        if _compiled is None:
            from . import _kernels  # raises ImportError with the real reason
            return _kernels
        return _compiled
    raise ValueError(f"unknown backend {name!r}")
