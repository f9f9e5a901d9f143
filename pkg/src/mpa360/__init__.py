"""Motion-plane-adaptive motion compensation for 360-degree (ERP) video."""

from mpa360.frame import Block, FramePlane, block_grid
from mpa360.geometry import (
    EPS_HORIZON,
    HorizonSingularityError,
    ImageCoord,
    InvalidCoordinateError,
    MotionPlane,
    PlaneCoord,
    PlaneKind,
    ProjectionConfig,
    Side,
    SphereCoord,
    SphericalAngles,
    all_motion_planes,
    erp_to_sphere,
    motion_plane,
    perspective_to_sphere,
    reproject,
    sphere_to_erp,
    sphere_to_perspective,
    unreproject,
)
from mpa360.metrics import RDPoint, bd_rate, psnr, ws_psnr
from mpa360.motion import (
    ModelKind,
    MotionCandidate,
    MotionVector,
    apply_mpa,
    apply_translational,
)
from mpa360.prediction import interpolate, predict_block, residual
from mpa360.search import (
    RDDecision,
    SearchConfig,
    decide,
    lambda_from_qp,
    mv_bits,
    search_plane,
)
from mpa360.experiment import ExperimentReport, run_experiment, write_report
from mpa360.video import SequenceSpec, load_yuv, save_yuv, synth_sequence

__version__ = "0.1.0"

__all__ = [
    "Block",
    "EPS_HORIZON",
    "ExperimentReport",
    "FramePlane",
    "HorizonSingularityError",
    "ImageCoord",
    "InvalidCoordinateError",
    "ModelKind",
    "MotionCandidate",
    "MotionPlane",
    "MotionVector",
    "PlaneCoord",
    "PlaneKind",
    "ProjectionConfig",
    "RDDecision",
    "RDPoint",
    "SearchConfig",
    "SequenceSpec",
    "Side",
    "SphereCoord",
    "SphericalAngles",
    "all_motion_planes",
    "apply_mpa",
    "apply_translational",
    "bd_rate",
    "block_grid",
    "decide",
    "erp_to_sphere",
    "interpolate",
    "lambda_from_qp",
    "load_yuv",
    "motion_plane",
    "mv_bits",
    "perspective_to_sphere",
    "predict_block",
    "psnr",
    "reproject",
    "residual",
    "run_experiment",
    "save_yuv",
    "search_plane",
    "sphere_to_erp",
    "sphere_to_perspective",
    "synth_sequence",
    "unreproject",
    "write_report",
    "ws_psnr",
]
