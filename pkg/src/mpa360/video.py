"""Raw YUV 4:2:0 ingestion and deterministic synthetic ERP sequences.

Only the luma plane is consumed and produced; chroma bytes are skipped on
read and written as the neutral mid-value so the emitted files remain
valid 4:2:0 video.  10-bit samples are two bytes little-endian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from mpa360.frame import FramePlane

SCENES = ("ground", "scroll", "noise")


@dataclass(frozen=True)
class SequenceSpec:
    """Description of a raw planar 4:2:0 file holding an ERP sequence."""

    path: str | Path
    width: int
    height: int
    bit_depth: int = 8
    frame_count: int | None = None  # None: infer from file size

    def __post_init__(self):
        if self.width != 2 * self.height:
            raise ValueError(
                f"ERP rasters need width = 2*height, got {self.width}x{self.height}"
            )
        if self.bit_depth not in (8, 10):
            raise ValueError(f"unsupported bit depth {self.bit_depth}")
        if self.frame_count is not None and self.frame_count < 2:
            raise ValueError("need at least 2 frames")

    @property
    def bytes_per_sample(self) -> int:
        return 1 if self.bit_depth == 8 else 2

    @property
    def frame_bytes(self) -> int:
        luma = self.width * self.height
        return (luma + luma // 2) * self.bytes_per_sample


def load_yuv(spec: SequenceSpec) -> list[FramePlane]:
    """Decode the luma planes of a raw planar 4:2:0 file."""
    data = Path(spec.path).read_bytes()
    if spec.frame_count is None:
        count, rem = divmod(len(data), spec.frame_bytes)
        if rem or count < 2:
            raise ValueError(
                f"{spec.path}: size {len(data)} is not a whole number (>= 2) "
                f"of {spec.frame_bytes}-byte frames"
            )
    else:
        count = spec.frame_count
        if len(data) != count * spec.frame_bytes:
            raise ValueError(
                f"{spec.path}: expected {count * spec.frame_bytes} bytes for "
                f"{count} frames, found {len(data)}"
            )
    dtype = np.uint8 if spec.bit_depth == 8 else np.dtype("<u2")
    luma_samples = spec.width * spec.height
    frames = []
    for k in range(count):
        off = k * spec.frame_bytes
        plane = np.frombuffer(
            data, dtype=dtype, count=luma_samples, offset=off
        ).reshape(spec.height, spec.width)
        frames.append(FramePlane.from_array(plane, spec.bit_depth))
    return frames


def save_yuv(frames: list[FramePlane], path: str | Path) -> None:
    """Write frames as planar 4:2:0 with neutral chroma."""
    first = frames[0]
    dtype = np.uint8 if first.bit_depth == 8 else np.dtype("<u2")
    neutral = 1 << (first.bit_depth - 1)
    chroma = np.full((first.height // 2) * first.width, neutral, dtype=dtype)
    with open(path, "wb") as fh:
        for frame in frames:
            if (frame.width, frame.height, frame.bit_depth) != (
                first.width,
                first.height,
                first.bit_depth,
            ):
                raise ValueError("frames in a sequence must share geometry")
            fh.write(np.ascontiguousarray(frame.samples, dtype=dtype).tobytes())
            fh.write(chroma.tobytes())


def save_raw_luma(frames: list[FramePlane], path: str | Path) -> None:
    """Write only the luma planes (no chroma), e.g. for predicted frames."""
    dtype = np.uint8 if frames[0].bit_depth == 8 else np.dtype("<u2")
    with open(path, "wb") as fh:
        for frame in frames:
            fh.write(np.ascontiguousarray(frame.samples, dtype=dtype).tobytes())


def load_raw_luma(
    path: str | Path, width: int, height: int, bit_depth: int = 8
) -> list[FramePlane]:
    """Read back a luma-only dump produced by save_raw_luma."""
    data = Path(path).read_bytes()
    dtype = np.uint8 if bit_depth == 8 else np.dtype("<u2")
    frame_bytes = width * height * (1 if bit_depth == 8 else 2)
    count, rem = divmod(len(data), frame_bytes)
    if rem:
        raise ValueError(f"{path}: size {len(data)} is not a whole number of frames")
    return [
        FramePlane.from_array(
            np.frombuffer(data, dtype=dtype, count=width * height,
                          offset=k * frame_bytes).reshape(height, width),
            bit_depth,
        )
        for k in range(count)
    ]


@dataclass(frozen=True)
class GroundSceneParams:
    """Textured ground plane translating under a downward-looking camera.

    The camera sits at the origin, the ground is the plane z = -camera_height,
    and per frame the ground translates so that, on the top/bottom motion
    plane, the content moves by exactly plane_step plane pixels.  The true
    quarter-pel motion vector of frame k relative to frame k-1 is therefore
    -4 * plane_step on the top/bottom plane.
    """

    plane_step: tuple[float, float] = (2.0, 1.0)
    camera_height: float = 1.0
    n_waves: int = 8
    sky_value: float = 128.0


def _ground_texture_params(rng: np.random.Generator, params: GroundSceneParams):
    # Frequency band chosen so the ground stays well-sampled at ERP pixel
    # density over the bottom quarter of the frame but is textured enough
    # for SAD to discriminate the motion models.
    n = params.n_waves
    freq = rng.uniform(2.0, 6.0, size=(n, 2))
    phase = rng.uniform(0.0, 2.0 * np.pi, size=n)
    amp = rng.uniform(0.5, 1.0, size=n)
    amp *= 90.0 / amp.sum()
    return freq, phase, amp


def ground_texture(x, y, freq, phase, amp):
    """Band-limited procedural texture: 128 + sum of plane waves."""
    val = np.full(np.shape(x), 128.0)
    for (fx, fy), ph, a in zip(freq, phase, amp):
        val = val + a * np.sin(2.0 * np.pi * (fx * x + fy * y) + ph)
    return val


def synth_ground(
    width: int,
    height: int,
    frames: int,
    seed: int = 0,
    bit_depth: int = 8,
    params: GroundSceneParams = GroundSceneParams(),
) -> list[FramePlane]:
    """Ray-cast the moving ground plane through every ERP pixel."""
    rng = np.random.default_rng(seed)
    freq, phase, amp = _ground_texture_params(rng, params)
    focal = width / (2.0 * math.pi)
    step_x = params.plane_step[0] * params.camera_height / focal
    step_y = params.plane_step[1] * params.camera_height / focal

    u = np.arange(width, dtype=np.float64)[None, :]
    v = np.arange(height, dtype=np.float64)[:, None]
    phi = u * (2.0 * np.pi / width)
    theta = v * (np.pi / height)
    sin_t = np.sin(theta)
    sx = sin_t * np.cos(phi)
    sy = sin_t * np.sin(phi)
    sz = np.broadcast_to(np.cos(theta), (height, width))
    below = sz < 0.0
    inv = np.where(below, -params.camera_height / np.where(below, sz, -1.0), 0.0)
    hit_x = sx * inv
    hit_y = sy * inv

    max_val = (1 << bit_depth) - 1
    scale = max_val / 255.0
    out = []
    for k in range(frames):
        tex = ground_texture(hit_x - k * step_x, hit_y - k * step_y, freq, phase, amp)
        values = np.where(below, tex, params.sky_value) * scale
        samples = np.clip(np.floor(values + 0.5), 0, max_val)
        out.append(FramePlane.from_array(samples, bit_depth))
    return out


def synth_scroll(
    width: int,
    height: int,
    frames: int,
    seed: int = 0,
    bit_depth: int = 8,
    dx: int = 2,
) -> list[FramePlane]:
    """Global horizontal scroll: frame k is frame 0 rolled by k*dx pixels."""
    rng = np.random.default_rng(seed)
    max_val = (1 << bit_depth) - 1
    base = rng.integers(0, max_val + 1, size=(height, width))
    return [
        FramePlane.from_array(np.roll(base, k * dx, axis=1), bit_depth)
        for k in range(frames)
    ]


def synth_noise(
    width: int, height: int, frames: int, seed: int = 0, bit_depth: int = 8
) -> list[FramePlane]:
    """Static scene: every frame repeats the same seeded noise."""
    rng = np.random.default_rng(seed)
    max_val = (1 << bit_depth) - 1
    base = rng.integers(0, max_val + 1, size=(height, width))
    return [FramePlane.from_array(base, bit_depth) for _ in range(frames)]


def synth_sequence(
    scene: str,
    width: int,
    height: int,
    frames: int,
    seed: int = 0,
    bit_depth: int = 8,
    **scene_kwargs,
) -> list[FramePlane]:
    """Generate a named scene; deterministic for a fixed seed."""
    if width != 2 * height:
        raise ValueError(f"ERP rasters need width = 2*height, got {width}x{height}")
    if frames < 2:
        raise ValueError("need at least 2 frames")
    if scene == "ground":
        return synth_ground(width, height, frames, seed, bit_depth, **scene_kwargs)
    if scene == "scroll":
        return synth_scroll(width, height, frames, seed, bit_depth, **scene_kwargs)
    if scene == "noise":
        return synth_noise(width, height, frames, seed, bit_depth, **scene_kwargs)
    raise ValueError(f"unknown scene {scene!r}; have {SCENES}")
