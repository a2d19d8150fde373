"""Backend selection for the BdG integration kernel.

The compiled Cython kernel is preferred when importable; the vectorized
numpy twin is the fallback.  ``FLOQXY_BACKEND`` overrides the choice
(values: ``auto``, ``cython``, ``python``).
"""

from __future__ import annotations

import os

from ._bdg_np import IntegrationError, integrate_columns as _integrate_np

try:
    from ._bdg_cy import integrate_columns as _integrate_cy
except ImportError:  # extension not built
    _integrate_cy = None


def _select(name: str):
    if name == "python":
        return _integrate_np, "python"
    if name == "cython":
        if _integrate_cy is None:
            raise RuntimeError("cython backend requested but the extension is not built")
        return _integrate_cy, "cython"
    if name == "auto":
        if _integrate_cy is not None:
            return _integrate_cy, "cython"
        return _integrate_np, "python"
    raise ValueError(f"unknown backend {name!r} (use auto, cython or python)")


_impl, BACKEND = _select(os.environ.get("FLOQXY_BACKEND", "auto"))


def integrate_columns(k, gamma, h0, dh, omega, t_end, tol, backend: str | None = None):
    """Dispatch to the selected backend (see module docstring)."""
    if backend is None:
        fn = _impl
    else:
        fn, _ = _select(backend)
    return fn(k, gamma, h0, dh, omega, t_end, tol)


def available_backends() -> list[str]:
    out = ["python"]
    if _integrate_cy is not None:
        out.insert(0, "cython")
    return out


__all__ = ["integrate_columns", "available_backends", "BACKEND", "IntegrationError"]
