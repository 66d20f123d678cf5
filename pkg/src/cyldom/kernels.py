"""Kernel selection: compiled extension when importable, numpy otherwise.

Set ``CYLDOM_KERNEL=c`` or ``CYLDOM_KERNEL=py`` to force a backend
(``c`` raises if the extension is missing); the default ``auto`` prefers
the extension.
"""
from __future__ import annotations

import os

from . import _kernel_py

_requested = os.environ.get("CYLDOM_KERNEL", "auto").strip().lower() or "auto"
if _requested not in {"auto", "c", "py"}:
    raise ValueError(f"CYLDOM_KERNEL must be one of auto/c/py, got {_requested!r}")

_impl = None
if _requested in {"auto", "c"}:
    try:
        from . import _kernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _requested == "c":
            raise
        _impl = None
if _impl is None:
    _impl = _kernel_py

BACKEND = _impl.BACKEND_NAME
INF = _kernel_py.INF

run_seed = _impl.run_seed
relax_column = _impl.relax_column


def get_backend(name: str):
    """Return a specific kernel module ('c' or 'python'), for benchmarks/tests."""
    if name in {"py", "python"}:
        return _kernel_py
    if name == "c":
        from . import _kernel  # raises ImportError when not built
        return _kernel
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends() -> tuple[str, ...]:
    try:
        from . import _kernel  # noqa: F401
    except ImportError:
        return ("python",)
    return ("c", "python")
