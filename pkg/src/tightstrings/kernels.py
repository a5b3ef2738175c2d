"""Backend selection for the hot kernels.

The compiled ``_core`` extension is used when importable; otherwise the
pure-Python ``_pycore`` module.  Set ``TIGHTSTRINGS_PURE_PYTHON=1`` to force
the fallback.
"""
import os

from . import _pycore

_core = None
if os.environ.get("TIGHTSTRINGS_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _core
    except ImportError:  # extension not built
        _core = None

BACKEND = "compiled" if _core is not None else "python"
_active = _core if _core is not None else _pycore


def available_backends():
    return ["compiled", "python"] if _core is not None else ["python"]


def get(backend=None):
    """Kernel module for ``backend`` (``None`` = the active one)."""
    if backend is None:
        return _active
    if backend == "python":
        return _pycore
    if backend == "compiled":
        if _core is None:
            raise RuntimeError("compiled kernels are not built; run `pip install -e .`")
        return _core
    raise ValueError(f"unknown backend {backend!r}")


def use(backend):
    """Switch the active backend process-wide; returns the previous name."""
    global _active, BACKEND
    prev = BACKEND
    _active = get(backend)
    BACKEND = backend
    return prev
