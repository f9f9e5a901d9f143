"""Quality and rate-delta metrics: PSNR, WS-PSNR (ERP), Bjontegaard delta."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from mpa360.frame import FramePlane


@dataclass(frozen=True)
class RDPoint:
    """One point of a rate-quality curve: rate > 0, quality in dB."""

    rate: float
    quality: float

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError("rate must be positive")


def _check_pair(a: FramePlane, b: FramePlane):
    if (a.width, a.height) != (b.width, b.height):
        raise ValueError(
            f"dimension mismatch: {a.width}x{a.height} vs {b.width}x{b.height}"
        )
    if a.bit_depth != b.bit_depth:
        raise ValueError(f"bit depth mismatch: {a.bit_depth} vs {b.bit_depth}")


def mse(a: FramePlane, b: FramePlane) -> float:
    _check_pair(a, b)
    diff = a.samples.astype(np.float64) - b.samples.astype(np.float64)
    return float(np.mean(diff * diff))


def psnr(a: FramePlane, b: FramePlane) -> float:
    """10*log10(MAX^2 / MSE); identical frames give math.inf."""
    err = mse(a, b)
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(a.max_value**2 / err)


def erp_row_weights(height: int) -> np.ndarray:
    """Latitude weights w(j) = cos((j + 0.5 - H/2) * pi / H), one per row."""
    j = np.arange(height, dtype=np.float64)
    return np.cos((j + 0.5 - height / 2.0) * (np.pi / height))


def ws_psnr(a: FramePlane, b: FramePlane, weights: np.ndarray | None = None) -> float:
    """Sphere-weighted PSNR for ERP frames.

    Row weights default to the ERP cosine profile and are normalized by
    their sum; pass uniform `weights` to reduce to plain PSNR.
    """
    _check_pair(a, b)
    if weights is None:
        weights = erp_row_weights(a.height)
    if weights.shape != (a.height,):
        raise ValueError("need one weight per row")
    diff = a.samples.astype(np.float64) - b.samples.astype(np.float64)
    wmse = float((weights @ np.mean(diff * diff, axis=1)) / weights.sum())
    if wmse == 0.0:
        return math.inf
    return 10.0 * math.log10(a.max_value**2 / wmse)


def _bd_prepare(points: list[RDPoint], label: str):
    if len(points) < 4:
        raise ValueError(f"{label}: need at least 4 rate-quality points")
    quality = np.array([p.quality for p in points], dtype=np.float64)
    log_rate = np.log([p.rate for p in points])
    if not np.all(np.diff(quality) > 0):
        raise ValueError(f"{label}: quality values must be strictly increasing")
    return quality, log_rate


def bd_rate(anchor: list[RDPoint], test: list[RDPoint]) -> float:
    """Average rate difference of `test` against `anchor`, in percent.

    Fits cubic polynomials of log(rate) over quality to both curves and
    integrates them across the overlapping quality interval; negative
    values mean the test curve needs less rate.
    """
    q_a, lr_a = _bd_prepare(anchor, "anchor")
    q_t, lr_t = _bd_prepare(test, "test")
    lo = max(q_a.min(), q_t.min())
    hi = min(q_a.max(), q_t.max())
    if not hi > lo:
        raise ValueError("quality ranges do not overlap")
    poly_a = np.polyint(np.polyfit(q_a, lr_a, 3))
    poly_t = np.polyint(np.polyfit(q_t, lr_t, 3))
    int_a = np.polyval(poly_a, hi) - np.polyval(poly_a, lo)
    int_t = np.polyval(poly_t, hi) - np.polyval(poly_t, lo)
    avg_diff = (int_t - int_a) / (hi - lo)
    return 100.0 * math.expm1(avg_diff)
