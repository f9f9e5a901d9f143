"""Block-level motion compensation with 4x4 subblock approximation."""

from __future__ import annotations

import numpy as np

from mpa360 import kernels
from mpa360.frame import Block, FramePlane
from mpa360.geometry import ImageCoord, ProjectionConfig
from mpa360.motion import MotionCandidate, shift_table

SUBBLOCK_SIZE = 4

INTERPOLATORS = {
    "bilinear": kernels.INTERP_BILINEAR,
    "bicubic": kernels.INTERP_BICUBIC,
}


def interp_mode(interp: str) -> int:
    try:
        return INTERPOLATORS[interp]
    except KeyError:
        raise ValueError(
            f"unknown interpolator {interp!r}; have {sorted(INTERPOLATORS)}"
        ) from None


def interpolate(ref: FramePlane, pos: ImageCoord, interp: str = "bilinear"):
    """Sample the reference at a fractional position.

    u wraps modulo width, v clamps to valid rows.  The result is rounded
    with floor(value + 0.5) and clamped to the sample range, so integer
    positions return the stored sample exactly.  Accepts array fields.
    """
    out = kernels.sample_values(
        ref.as_f64(),
        np.asarray(pos.u, dtype=np.float64),
        np.asarray(pos.v, dtype=np.float64),
        interp_mode(interp),
        float(ref.max_value),
    )
    return out if np.ndim(pos.u) else float(out)


def predict_block(
    ref: FramePlane,
    blk: Block,
    cand: MotionCandidate,
    cfg: ProjectionConfig,
    interp: str = "bilinear",
) -> np.ndarray:
    """Motion-compensated prediction of one block from the reference frame.

    The motion model is evaluated once per 4x4 subblock at the subblock
    center and the resulting shift is shared by the subblock's pixels.
    Returns the predicted raster in the frame's integer dtype.
    """
    blk.check_inside(ref)
    dx, dy = shift_table(blk, cand, cfg, SUBBLOCK_SIZE)
    pred = kernels.predict_block(
        ref.as_f64(),
        float(blk.x0),
        float(blk.y0),
        blk.w,
        blk.h,
        SUBBLOCK_SIZE,
        dx,
        dy,
        interp_mode(interp),
        float(ref.max_value),
    )
    return pred.astype(ref.samples.dtype)


def residual(orig: FramePlane, pred: np.ndarray, blk: Block) -> tuple[int, int]:
    """(SAD, SSE) of a predicted block against the original frame."""
    blk.check_inside(orig)
    diff = blk.pixels(orig).astype(np.int64) - pred.astype(np.int64)
    return int(np.abs(diff).sum()), int((diff * diff).sum())
