"""Command-line interface: run experiments, synthesize scenes, compute metrics."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from mpa360 import kernels
from mpa360.geometry import PlaneKind
from mpa360.metrics import RDPoint, bd_rate, psnr, ws_psnr
from mpa360.motion import ModelKind
from mpa360.experiment import run_experiment, summary_dict, write_report
from mpa360.video import SCENES, SequenceSpec, load_yuv, save_yuv, synth_sequence

_PLANE_ALIASES = {
    "fb": PlaneKind.FRONT_BACK,
    "lr": PlaneKind.LEFT_RIGHT,
    "tb": PlaneKind.TOP_BOTTOM,
    **{p.value: p for p in PlaneKind},
}


def _parse_models(text: str) -> tuple[ModelKind, ...]:
    try:
        return tuple(ModelKind(tok.strip()) for tok in text.split(","))
    except ValueError:
        raise SystemExit(f"bad --models {text!r}; use e.g. 'translational,mpa'")


def _parse_planes(text: str) -> tuple[PlaneKind, ...]:
    try:
        return tuple(_PLANE_ALIASES[tok.strip()] for tok in text.split(","))
    except KeyError:
        raise SystemExit(f"bad --planes {text!r}; use e.g. 'fb,lr,tb'")


def _add_geometry_args(parser, bit_depth=True):
    parser.add_argument("--width", type=int, required=True)
    parser.add_argument("--height", type=int, required=True)
    if bit_depth:
        parser.add_argument("--bit-depth", type=int, default=8, choices=(8, 10))


def _load_sequence(args, frames_arg=None) -> list:
    spec = SequenceSpec(
        path=args.input,
        width=args.width,
        height=args.height,
        bit_depth=args.bit_depth,
        frame_count=frames_arg,
    )
    return load_yuv(spec)


def _cmd_run(args) -> int:
    if (args.input is None) == (args.scene is None):
        raise SystemExit("run: give exactly one of --input or --scene")
    if args.scene is not None:
        frames = synth_sequence(
            args.scene, args.width, args.height, args.frames, args.seed, args.bit_depth
        )
    else:
        frames = _load_sequence(args, args.frames)
    report = run_experiment(
        frames,
        qps=args.qp,
        models=_parse_models(args.models),
        planes=_parse_planes(args.planes),
        block_size=args.block_size,
        search_range=args.search_range,
        fractional_refine=not args.no_refine,
        interp=args.interp,
    )
    paths = write_report(report, args.out, dump_pred=args.dump_pred)
    summary = summary_dict(report)
    for run in summary["runs"]:
        totals = run["totals"]
        print(
            f"qp={run['qp']} bits={totals['bits']} "
            f"psnr={totals['mean_psnr']:.4f} ws_psnr={totals['mean_ws_psnr']:.4f} "
            f"mpa_share={totals['mpa_share']:.3f}"
        )
    print(f"wrote {paths['csv']} and {paths['summary']} [kernels: {kernels.backend_name()}]")
    return 0


def _cmd_synth(args) -> int:
    frames = synth_sequence(
        args.scene, args.width, args.height, args.frames, args.seed, args.bit_depth
    )
    save_yuv(frames, args.out)
    print(f"wrote {args.frames} frames ({args.width}x{args.height}) to {args.out}")
    return 0


def _metric_frames(args):
    spec_a = SequenceSpec(args.file_a, args.width, args.height, args.bit_depth, args.frames)
    spec_b = SequenceSpec(args.file_b, args.width, args.height, args.bit_depth, args.frames)
    return load_yuv(spec_a), load_yuv(spec_b)


def _cmd_metrics_psnr(args, weighted: bool) -> int:
    frames_a, frames_b = _metric_frames(args)
    if len(frames_a) != len(frames_b):
        raise SystemExit("sequences have different frame counts")
    fn = ws_psnr if weighted else psnr
    values = [fn(a, b) for a, b in zip(frames_a, frames_b)]
    for k, val in enumerate(values):
        print(f"frame {k}: {val:.6f} dB")
    mean = sum(values) / len(values)
    print(f"mean: {mean:.6f} dB")
    return 0


def _read_rd_points(path: str, metric: str) -> list[RDPoint]:
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict) and "rd_points" in data:
        data = data["rd_points"][metric]
    points = []
    for entry in data:
        quality = entry["quality"]
        if isinstance(quality, str):
            quality = float(quality)
        if math.isinf(quality) or math.isnan(quality):
            raise SystemExit(f"{path}: non-finite quality value, cannot fit BD curve")
        points.append(RDPoint(rate=float(entry["rate"]), quality=quality))
    return points


def _cmd_metrics_bd(args) -> int:
    anchor = _read_rd_points(args.anchor, args.metric)
    test = _read_rd_points(args.test, args.metric)
    value = bd_rate(anchor, test)
    print(f"bd_rate: {value:.4f} %")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpa360",
        description="Motion-plane-adaptive motion compensation for 360-degree video",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="run a motion-compensation experiment")
    runp.add_argument("--input", help="raw 4:2:0 YUV file (luma consumed)")
    runp.add_argument("--scene", choices=SCENES, help="synthesize instead of reading")
    _add_geometry_args(runp)
    runp.add_argument("--frames", type=int, default=8)
    runp.add_argument("--block-size", type=int, default=16)
    runp.add_argument("--search-range", type=int, default=8)
    runp.add_argument("--qp", type=int, nargs="+", default=[32])
    runp.add_argument("--models", default="translational,mpa")
    runp.add_argument("--planes", default="fb,lr,tb")
    runp.add_argument("--seed", type=int, default=0)
    runp.add_argument("--interp", default="bilinear", choices=("bilinear", "bicubic"))
    runp.add_argument("--no-refine", action="store_true",
                      help="disable fractional-pel refinement")
    runp.add_argument("--dump-pred", action="store_true",
                      help="dump predicted luma frames per QP")
    runp.add_argument("--out", required=True, help="output directory")
    runp.set_defaults(func=_cmd_run)

    synthp = sub.add_parser("synth", help="generate a synthetic ERP scene")
    synthp.add_argument("--scene", choices=SCENES, required=True)
    _add_geometry_args(synthp)
    synthp.add_argument("--frames", type=int, default=8)
    synthp.add_argument("--seed", type=int, default=0)
    synthp.add_argument("--out", required=True, help="output .yuv path")
    synthp.set_defaults(func=_cmd_synth)

    metricsp = sub.add_parser("metrics", help="quality / rate-delta metrics")
    msub = metricsp.add_subparsers(dest="metric_command", required=True)
    for name, weighted in (("psnr", False), ("wspsnr", True)):
        mp = msub.add_parser(name, help=f"{name} between two raw videos")
        mp.add_argument("file_a")
        mp.add_argument("file_b")
        _add_geometry_args(mp)
        mp.add_argument("--frames", type=int, default=None)
        mp.set_defaults(func=lambda a, w=weighted: _cmd_metrics_psnr(a, w))
    bdp = msub.add_parser("bd", help="Bjontegaard delta rate between two curves")
    bdp.add_argument("anchor", help="JSON: rd-point list or run summary")
    bdp.add_argument("test")
    bdp.add_argument("--metric", default="psnr", choices=("psnr", "ws_psnr"))
    bdp.set_defaults(func=_cmd_metrics_bd)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
