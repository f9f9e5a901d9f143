"""Motion models: classical translational and motion-plane-adaptive (MPA).

Both models are coordinate transforms that answer one question: given a
pixel coordinate in the current frame, where should the reference frame
be sampled?  Motion vectors are quarter-pel integers in the model's
native units: ERP pixels for the translational model, plane pixels for
MPA (with the default focal length the two scales match at the relevant
plane center).

The MPA transform reprojects the coordinate onto the selected motion
plane, translates there, and maps back:

    moved = unreproject(reproject(p) + t)

Block prediction evaluates the transform once per 4x4 subblock at the
subblock's continuous center (offset +sub/2 from its corner) and shares
the resulting pixel shift among the subblock's pixels; the helpers at
the bottom compute those shift tables.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from mpa360.frame import Block
from mpa360.geometry import (
    ImageCoord,
    MotionPlane,
    PlaneCoord,
    ProjectionConfig,
    reproject,
    unreproject,
)

QPEL = 4  # quarter-pel motion vector precision


class ModelKind(str, enum.Enum):
    TRANSLATIONAL = "translational"
    MPA = "mpa"


@dataclass(frozen=True)
class MotionVector:
    """Signed displacement in quarter-pel units of the model's native system."""

    tx: int
    ty: int

    def to_pixels(self) -> tuple[float, float]:
        return self.tx / QPEL, self.ty / QPEL


@dataclass(frozen=True)
class MotionCandidate:
    model: ModelKind
    mv: MotionVector
    plane: MotionPlane | None = None

    def __post_init__(self):
        if (self.model is ModelKind.MPA) != (self.plane is not None):
            raise ValueError("plane must be present exactly when model is MPA")


def apply_translational(
    p: ImageCoord, mv: MotionVector, cfg: ProjectionConfig
) -> ImageCoord:
    """p + t with the ERP horizontal wrap; v is left for sampling to clamp."""
    dx, dy = mv.to_pixels()
    return ImageCoord((p.u + dx) % cfg.width, p.v + dy)


def apply_mpa(
    p_o: ImageCoord,
    mv: MotionVector,
    plane: MotionPlane,
    cfg: ProjectionConfig,
    *,
    strict: bool = True,
) -> ImageCoord:
    """Translate p_o by mv on the given motion plane.

    The plane translation never changes the real/virtual side tag.  With
    strict=True, coordinates in the plane-horizon band raise
    HorizonSingularityError; block-level prediction instead uses
    strict=False and lets the sampler's wrap/clamp act as the fallback.
    """
    dx, dy = mv.to_pixels()
    p_p = reproject(p_o, plane, cfg, strict=strict)
    moved = PlaneCoord(p_p.u + dx, p_p.v + dy, p_p.side)
    return unreproject(moved, plane, cfg)


def subblock_centers(blk: Block, sub_size: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """Continuous centers of the block's subblocks, row-major, flattened."""
    cx = blk.x0 + np.arange(blk.w // sub_size, dtype=np.float64) * sub_size + sub_size / 2.0
    cy = blk.y0 + np.arange(blk.h // sub_size, dtype=np.float64) * sub_size + sub_size / 2.0
    gx, gy = np.meshgrid(cx, cy)
    return gx.ravel(), gy.ravel()


def candidate_shift_tables(
    blk: Block,
    model: ModelKind,
    plane: MotionPlane | None,
    tqx: np.ndarray,
    tqy: np.ndarray,
    cfg: ProjectionConfig,
    sub_size: int = 4,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-candidate per-subblock pixel shifts, shape (C, S).

    tqx/tqy are quarter-pel motion vector components for C candidates.
    For MPA the subblock centers are reprojected once and every candidate
    reuses them; unpredictable centers (horizon band, NaN fallout) fall
    back to a zero shift, i.e. the co-located reference sample.
    """
    tqx = np.asarray(tqx, dtype=np.float64)
    tqy = np.asarray(tqy, dtype=np.float64)
    cx, cy = subblock_centers(blk, sub_size)
    n_sub = cx.size
    if model is ModelKind.TRANSLATIONAL:
        dx = np.broadcast_to((tqx / QPEL)[:, None], (tqx.size, n_sub)).copy()
        dy = np.broadcast_to((tqy / QPEL)[:, None], (tqy.size, n_sub)).copy()
        return dx, dy
    p_p = reproject(ImageCoord(cx, cy), plane, cfg, strict=False)
    moved = PlaneCoord(
        p_p.u[None, :] + (tqx / QPEL)[:, None],
        p_p.v[None, :] + (tqy / QPEL)[:, None],
        np.broadcast_to(p_p.side, (tqx.size, n_sub)),
    )
    m = unreproject(moved, plane, cfg)
    dx = m.u - cx[None, :]
    dy = m.v - cy[None, :]
    np.nan_to_num(dx, copy=False, nan=0.0, posinf=0.0, neginf=0.0)
    np.nan_to_num(dy, copy=False, nan=0.0, posinf=0.0, neginf=0.0)
    return dx, dy


def shift_table(
    blk: Block, cand: MotionCandidate, cfg: ProjectionConfig, sub_size: int = 4
) -> tuple[np.ndarray, np.ndarray]:
    """Per-subblock pixel shifts (S,) for a single motion candidate."""
    dx, dy = candidate_shift_tables(
        blk,
        cand.model,
        cand.plane,
        np.array([cand.mv.tx]),
        np.array([cand.mv.ty]),
        cfg,
        sub_size,
    )
    return dx[0], dy[0]
