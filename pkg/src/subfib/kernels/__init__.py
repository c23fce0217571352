"""Backend selection for the enumeration kernels.

The hot loops (cartesianness decisions and commuting-square enumeration)
have two interchangeable implementations: numba-jitted integer loops and a
pure numpy/python fallback.  `SUBFIB_BACKEND=python` forces the fallback,
`SUBFIB_BACKEND=numba` requires numba; by default numba is used when it
imports cleanly.
"""

from __future__ import annotations

import os

_requested = os.environ.get("SUBFIB_BACKEND", "auto").lower()

if _requested in ("python", "numpy"):
    from . import _python as _impl
    BACKEND = "python"
elif _requested == "numba":
    from . import _numba as _impl
    BACKEND = "numba"
elif _requested == "auto":
    try:
        from . import _numba as _impl
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - depends on environment
        from . import _python as _impl
        BACKEND = "python"
else:
    raise RuntimeError(f"unknown SUBFIB_BACKEND={_requested!r} (use numba|python)")

cartesian_flags = _impl.cartesian_flags
comma_squares = _impl.comma_squares


def get_backend(name: str):
    """Explicit backend module, independent of the env selection (benchmarks)."""
    if name == "python":
        from . import _python
        return _python
    if name == "numba":
        from . import _numba
        return _numba
    raise ValueError(name)
