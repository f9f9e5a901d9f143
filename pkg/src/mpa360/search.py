"""Encoder-side motion estimation and rate-distortion candidate selection.

Every block is searched independently: an exhaustive integer-pel grid in
the model's native units (ERP pixels for translational, plane pixels for
MPA), optionally refined by two halving stages (half-pel, quarter-pel)
around the integer optimum.  Candidates are compared by

    cost = SAD + lambda * bits

where bits is a transparent rate proxy: signed exp-Golomb code lengths
of the quarter-pel vector components plus the model/plane signaling
flags (1 bit for MPA on/off, 1 more for front/back vs. not, and 1 more
to distinguish left/right from top/bottom).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from mpa360 import kernels
from mpa360.frame import Block, FramePlane
from mpa360.geometry import MotionPlane, PlaneKind, ProjectionConfig, motion_plane
from mpa360.motion import ModelKind, MotionCandidate, MotionVector, candidate_shift_tables
from mpa360.prediction import SUBBLOCK_SIZE, interp_mode


def lambda_from_qp(qp: int) -> float:
    """Conventional hybrid-codec RD multiplier heuristic."""
    return 0.85 * 2.0 ** ((qp - 12) / 3.0)


@dataclass(frozen=True)
class SearchConfig:
    """Motion search parameters.

    rd_lambda, when left at None, is derived from qp.  range is the
    integer-pel search radius in the model's native units.
    """

    range: int = 8
    qp: int = 32
    rd_lambda: float | None = None
    fractional_refine: bool = True

    def __post_init__(self):
        if self.range < 1:
            raise ValueError("search range must be >= 1")
        if self.rd_lambda is None:
            object.__setattr__(self, "rd_lambda", lambda_from_qp(self.qp))
        if self.rd_lambda <= 0:
            raise ValueError("lambda must be positive")


@dataclass(frozen=True)
class SearchResult:
    candidate: MotionCandidate
    cost: float
    sad: int
    bits: int


@dataclass(frozen=True)
class RDDecision:
    best: MotionCandidate
    cost: float
    distortion: int
    bits: int
    per_candidate_log: list[SearchResult] = field(default_factory=list)


def exp_golomb_signed_length(value: int) -> int:
    """Bit length of the signed exp-Golomb code for `value`."""
    n = 2 * value - 1 if value > 0 else -2 * value
    return 2 * (n + 1).bit_length() - 1


def _component_bits(values: np.ndarray) -> np.ndarray:
    """Vectorized exp_golomb_signed_length; frexp gives exact bit lengths."""
    v = values.astype(np.int64)
    n = np.where(v > 0, 2 * v - 1, -2 * v)
    return (2 * np.frexp((n + 1).astype(np.float64))[1] - 1).astype(np.float64)


def flag_bits(model: ModelKind, plane_kind: PlaneKind | None) -> int:
    """Signaling-tree cost: MPA on/off, then which plane."""
    if model is ModelKind.TRANSLATIONAL:
        return 1
    return 2 if plane_kind is PlaneKind.FRONT_BACK else 3


def mv_bits(mv: MotionVector, model: ModelKind, plane_kind: PlaneKind | None = None) -> int:
    """Rate proxy in bits for one motion candidate."""
    return (
        exp_golomb_signed_length(mv.tx)
        + exp_golomb_signed_length(mv.ty)
        + flag_bits(model, plane_kind)
    )


def _evaluate(orig_block, ref_f64, blk, model, plane, tqx, tqy, cfg, scfg, mode, max_val):
    """Cost all candidates, return the winner with deterministic tie-breaks:
    lowest cost, then smallest |mv|^2, then first in scan order."""
    dx, dy = candidate_shift_tables(blk, model, plane, tqx, tqy, cfg, SUBBLOCK_SIZE)
    sads = kernels.sad_candidates(
        ref_f64, float(blk.x0), float(blk.y0), orig_block, SUBBLOCK_SIZE,
        dx, dy, mode, max_val,
    )
    plane_kind = plane.kind if plane is not None else None
    bits = _component_bits(tqx) + _component_bits(tqy) + flag_bits(model, plane_kind)
    cost = sads + scfg.rd_lambda * bits
    mag = tqx.astype(np.int64) ** 2 + tqy.astype(np.int64) ** 2
    order = np.arange(cost.size)
    best = np.lexsort((order, mag, cost))[0]
    return (
        MotionVector(int(tqx[best]), int(tqy[best])),
        float(cost[best]),
        int(sads[best]),
        int(bits[best]),
    )


def search_plane(
    orig: FramePlane,
    ref: FramePlane,
    blk: Block,
    model: ModelKind,
    plane: MotionPlane | None,
    cfg: ProjectionConfig,
    scfg: SearchConfig,
    interp: str = "bilinear",
) -> SearchResult:
    """Full integer-pel search plus optional two-stage fractional refinement."""
    blk.check_inside(orig)
    blk.check_inside(ref)
    mode = interp_mode(interp)
    max_val = float(ref.max_value)
    orig_block = np.ascontiguousarray(blk.pixels(orig), dtype=np.float64)
    ref_f64 = ref.as_f64()

    r = scfg.range
    d = np.arange(-r, r + 1, dtype=np.int64)
    gy, gx = np.meshgrid(d, d, indexing="ij")
    tqx = (4 * gx).ravel().astype(np.float64)
    tqy = (4 * gy).ravel().astype(np.float64)
    mv, cost, sad, bits = _evaluate(
        orig_block, ref_f64, blk, model, plane, tqx, tqy, cfg, scfg, mode, max_val
    )

    if scfg.fractional_refine:
        for step in (2, 1):  # half-pel, then quarter-pel, in qpel units
            offs = [(0, 0)] + [
                (ox, oy)
                for oy in (-step, 0, step)
                for ox in (-step, 0, step)
                if (ox, oy) != (0, 0)
            ]
            tqx = np.array([mv.tx + ox for ox, _ in offs], dtype=np.float64)
            tqy = np.array([mv.ty + oy for _, oy in offs], dtype=np.float64)
            mv, cost, sad, bits = _evaluate(
                orig_block, ref_f64, blk, model, plane, tqx, tqy, cfg, scfg, mode, max_val
            )

    plane_for_candidate = plane if model is ModelKind.MPA else None
    cand = MotionCandidate(model, mv, plane_for_candidate)
    return SearchResult(cand, cost, sad, bits)


def decide(
    orig: FramePlane,
    ref: FramePlane,
    blk: Block,
    cfg: ProjectionConfig,
    scfg: SearchConfig,
    models: tuple[ModelKind, ...] = (ModelKind.TRANSLATIONAL, ModelKind.MPA),
    planes: tuple[PlaneKind, ...] = tuple(PlaneKind),
    interp: str = "bilinear",
) -> RDDecision:
    """Search every enabled candidate family and keep the cheapest.

    Families are evaluated in a fixed order (translational, then MPA
    planes in front/back, left/right, top/bottom order); exact cost ties
    go to the earlier family.
    """
    log: list[SearchResult] = []
    for model in models:
        if model is ModelKind.TRANSLATIONAL:
            log.append(search_plane(orig, ref, blk, model, None, cfg, scfg, interp))
        else:
            for kind in tuple(PlaneKind):
                if kind in planes:
                    log.append(
                        search_plane(
                            orig, ref, blk, model, motion_plane(kind), cfg, scfg, interp
                        )
                    )
    if not log:
        raise ValueError("no candidate families enabled")
    best = min(range(len(log)), key=lambda i: (log[i].cost, i))
    chosen = log[best]
    return RDDecision(
        best=chosen.candidate,
        cost=chosen.cost,
        distortion=chosen.sad,
        bits=chosen.bits,
        per_candidate_log=log,
    )
