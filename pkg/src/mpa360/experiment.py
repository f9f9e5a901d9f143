"""Experiment pipeline: per-block decisions, per-frame metrics, reports.

The reference for every frame is the previous ORIGINAL frame (open loop):
there is no quantization or entropy loop here, which isolates motion-model
quality from codec effects.  Reports are fully deterministic for identical
inputs: records are sorted before emission, floats are serialized with
repr, and infinities are written as the string "inf" to keep the JSON
strictly valid.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from mpa360.frame import FramePlane, block_grid
from mpa360.geometry import PlaneKind, ProjectionConfig
from mpa360.metrics import psnr, ws_psnr
from mpa360.motion import ModelKind
from mpa360.prediction import predict_block
from mpa360.search import SearchConfig, decide
from mpa360.video import save_raw_luma

CSV_COLUMNS = (
    "qp",
    "frame",
    "block_x",
    "block_y",
    "model",
    "plane",
    "tx_qpel",
    "ty_qpel",
    "sad",
    "bits",
    "cost",
)


@dataclass(frozen=True)
class BlockRecord:
    qp: int
    frame: int
    block_x: int
    block_y: int
    model: str
    plane: str  # empty for translational
    tx_qpel: int
    ty_qpel: int
    sad: int
    bits: int
    cost: float

    def row(self) -> list:
        return [getattr(self, col) for col in CSV_COLUMNS]


@dataclass(frozen=True)
class FrameStats:
    qp: int
    frame: int
    psnr: float
    ws_psnr: float
    mpa_share: float
    mean_sad: float
    bits: int


@dataclass
class ExperimentReport:
    config: dict
    records: list[BlockRecord] = field(default_factory=list)
    frame_stats: list[FrameStats] = field(default_factory=list)
    predicted: dict[int, list[FramePlane]] = field(default_factory=dict)

    def qp_totals(self, qp: int) -> dict:
        stats = [s for s in self.frame_stats if s.qp == qp]
        records = [r for r in self.records if r.qp == qp]
        return {
            "bits": sum(r.bits for r in records),
            "mean_psnr": _mean([s.psnr for s in stats]),
            "mean_ws_psnr": _mean([s.ws_psnr for s in stats]),
            "mpa_share": _mean([s.mpa_share for s in stats]),
        }

    def rd_points(self) -> dict:
        points = {"psnr": [], "ws_psnr": []}
        for qp in self.config["qps"]:
            totals = self.qp_totals(qp)
            points["psnr"].append({"rate": totals["bits"], "quality": totals["mean_psnr"]})
            points["ws_psnr"].append(
                {"rate": totals["bits"], "quality": totals["mean_ws_psnr"]}
            )
        return points


def _mean(values: list[float]) -> float:
    return sum(values) / len(values) if values else math.nan


def run_experiment(
    frames: list[FramePlane],
    qps: list[int],
    models: tuple[ModelKind, ...] = (ModelKind.TRANSLATIONAL, ModelKind.MPA),
    planes: tuple[PlaneKind, ...] = tuple(PlaneKind),
    block_size: int = 16,
    search_range: int = 8,
    fractional_refine: bool = True,
    interp: str = "bilinear",
    focal_length: float = 0.0,
    keep_predicted: bool = True,
) -> ExperimentReport:
    """Motion-compensate every frame from its predecessor at each QP."""
    if len(frames) < 2:
        raise ValueError("need at least 2 frames")
    first = frames[0]
    cfg = ProjectionConfig(first.width, first.height, focal_length)
    grid = block_grid(first.width, first.height, block_size)
    report = ExperimentReport(
        config={
            "width": first.width,
            "height": first.height,
            "bit_depth": first.bit_depth,
            "frames": len(frames),
            "block_size": block_size,
            "search_range": search_range,
            "fractional_refine": fractional_refine,
            "interp": interp,
            "focal_length": cfg.focal_length,
            "models": [m.value for m in models],
            "planes": [p.value for p in planes],
            "qps": list(qps),
        }
    )
    for qp in qps:
        scfg = SearchConfig(range=search_range, qp=qp, fractional_refine=fractional_refine)
        predicted = []
        for k in range(1, len(frames)):
            ref, orig = frames[k - 1], frames[k]
            pred_samples = np.zeros_like(orig.samples)
            frame_records = []
            for blk in grid:
                dec = decide(orig, ref, blk, cfg, scfg, models, planes, interp)
                pred = predict_block(ref, blk, dec.best, cfg, interp)
                pred_samples[blk.y0 : blk.y0 + blk.h, blk.x0 : blk.x0 + blk.w] = pred
                cand = dec.best
                frame_records.append(
                    BlockRecord(
                        qp=qp,
                        frame=k,
                        block_x=blk.x0,
                        block_y=blk.y0,
                        model=cand.model.value,
                        plane=cand.plane.kind.value if cand.plane else "",
                        tx_qpel=cand.mv.tx,
                        ty_qpel=cand.mv.ty,
                        sad=dec.distortion,
                        bits=dec.bits,
                        cost=dec.cost,
                    )
                )
            pred_frame = FramePlane.from_array(pred_samples, orig.bit_depth)
            predicted.append(pred_frame)
            report.records.extend(frame_records)
            report.frame_stats.append(
                FrameStats(
                    qp=qp,
                    frame=k,
                    psnr=psnr(orig, pred_frame),
                    ws_psnr=ws_psnr(orig, pred_frame),
                    mpa_share=_mean(
                        [1.0 if r.model == ModelKind.MPA.value else 0.0 for r in frame_records]
                    ),
                    mean_sad=_mean([float(r.sad) for r in frame_records]),
                    bits=sum(r.bits for r in frame_records),
                )
            )
        if keep_predicted:
            report.predicted[qp] = predicted
    report.records.sort(key=lambda r: (r.qp, r.frame, r.block_y, r.block_x))
    return report


def _json_safe(value):
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def summary_dict(report: ExperimentReport) -> dict:
    runs = []
    for qp in report.config["qps"]:
        runs.append(
            {
                "qp": qp,
                "frames": [
                    {
                        "frame": s.frame,
                        "psnr": s.psnr,
                        "ws_psnr": s.ws_psnr,
                        "mpa_share": s.mpa_share,
                        "mean_sad": s.mean_sad,
                        "bits": s.bits,
                    }
                    for s in report.frame_stats
                    if s.qp == qp
                ],
                "totals": report.qp_totals(qp),
            }
        )
    return {"config": report.config, "runs": runs, "rd_points": report.rd_points()}


def write_csv(report: ExperimentReport, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for record in report.records:
            writer.writerow(
                ["inf" if isinstance(v, float) and math.isinf(v) else v for v in record.row()]
            )


def write_summary(report: ExperimentReport, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(_json_safe(summary_dict(report)), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_report(
    report: ExperimentReport, out_dir: str | Path, dump_pred: bool = False
) -> dict[str, Path]:
    """Emit blocks.csv and summary.json (plus optional predicted luma dumps)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"csv": out / "blocks.csv", "summary": out / "summary.json"}
    write_csv(report, paths["csv"])
    write_summary(report, paths["summary"])
    if dump_pred:
        for qp, frames in report.predicted.items():
            path = out / f"pred_qp{qp}.luma"
            save_raw_luma(frames, path)
            paths[f"pred_qp{qp}"] = path
    return paths
