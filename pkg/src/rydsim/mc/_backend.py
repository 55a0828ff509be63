"""Sweep-kernel backend selection.

The compiled extension is preferred when importable; setting the
environment variable ``RYDSIM_NO_EXT=1`` forces the pure-Python
fallback (used by the benchmark for a like-for-like comparison).
"""

from __future__ import annotations

import os

from rydsim.mc import _sweep_py

_FORCE_PY = os.environ.get("RYDSIM_NO_EXT", "") not in ("", "0")

if not _FORCE_PY:
    try:
        from rydsim.mc import _sweep_cy as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _sweep_py
        BACKEND = "python"
else:
    _impl = _sweep_py
    BACKEND = "python"


def get_sweep(backend: str | None = None):
    """Return (name, run_sweep) for the requested or default backend."""
    if backend is None:
        return BACKEND, _impl.run_sweep
    if backend == "python":
        return "python", _sweep_py.run_sweep
    if backend == "cython":
        if BACKEND != "cython":
            raise ImportError("compiled sweep kernel is not available")
        return "cython", _impl.run_sweep
    raise ValueError(f"unknown backend {backend!r}")
