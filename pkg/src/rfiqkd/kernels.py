"""Kernel selection: the compiled extension when built, numpy otherwise."""

from __future__ import annotations

try:
    from ._kernels import bound_scan, cyclic_sumset

    BACKEND = "cython"
except ImportError:  # extension not built
    from ._fallback import bound_scan, cyclic_sumset

    BACKEND = "numpy"

__all__ = ["BACKEND", "bound_scan", "cyclic_sumset"]
