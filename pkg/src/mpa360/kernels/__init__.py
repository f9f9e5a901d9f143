"""Sampling and SAD kernels with a compiled core and a numpy fallback.

The compiled extension (`mpa360.kernels._native`, built from Cython) and
the numpy implementation (`mpa360.kernels._python`) expose the same three
functions and are arithmetic-order identical, so they produce bit-equal
results; the compiled one is just much faster.  The active backend is
chosen at import time: the extension when importable, numpy otherwise.
Set MPA360_KERNELS=python (or =native) to force one, or call
`set_backend` at runtime.

Kernel contract (shared by both backends):
  - `ref` is a C-contiguous float64 raster holding integer sample values.
  - Horizontal positions wrap modulo width, vertical positions clamp to
    [0, height-1]; all positions must be finite.
  - interp is INTERP_BILINEAR or INTERP_BICUBIC (4-tap Keys, a = -0.5).
  - Output samples are rounded with floor(v + 0.5) and clamped to
    [0, max_val], so they are valid integer sample values.
"""

from __future__ import annotations

import os

from mpa360.kernels import _python

INTERP_BILINEAR = 0
INTERP_BICUBIC = 1

try:
    from mpa360.kernels import _native
except ImportError:
    _native = None

_BACKENDS = {"python": _python}
if _native is not None:
    _BACKENDS["native"] = _native


def _initial_backend():
    requested = os.environ.get("MPA360_KERNELS", "auto")
    if requested == "auto":
        return "native" if _native is not None else "python"
    if requested not in _BACKENDS:
        raise ImportError(f"MPA360_KERNELS={requested!r} is not available")
    return requested


_active_name = _initial_backend()


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def backend_name() -> str:
    return _active_name


def get_backend(name: str | None = None):
    """Return a backend module; the active one when `name` is None."""
    return _BACKENDS[name if name is not None else _active_name]


def set_backend(name: str) -> None:
    global _active_name
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; have {available_backends()}")
    _active_name = name


def sample_values(ref, xs, ys, interp, max_val):
    """Interpolated, rounded samples of `ref` at positions (xs, ys)."""
    return _BACKENDS[_active_name].sample_values(ref, xs, ys, interp, max_val)


def predict_block(ref, x0, y0, bw, bh, sub_size, sub_dx, sub_dy, interp, max_val):
    """Predicted (bh, bw) raster for a block with per-subblock shifts.

    sub_dx/sub_dy hold one shift per sub_size x sub_size subblock in
    row-major subblock order; every pixel of a subblock shares its shift.
    """
    return _BACKENDS[_active_name].predict_block(
        ref, x0, y0, bw, bh, sub_size, sub_dx, sub_dy, interp, max_val
    )


def sad_candidates(ref, x0, y0, orig, sub_size, cand_dx, cand_dy, interp, max_val):
    """SAD against `orig` for C candidates of per-subblock shifts (C, S)."""
    return _BACKENDS[_active_name].sad_candidates(
        ref, x0, y0, orig, sub_size, cand_dx, cand_dy, interp, max_val
    )
