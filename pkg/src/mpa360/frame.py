"""Single-channel rasters and block geometry."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ALLOWED_BLOCK_SIZES = (4, 8, 16, 32, 64)


@dataclass
class FramePlane:
    """Luma raster with explicit bit depth.

    samples is a (height, width) uint8 or uint16 array; all values must be
    below 2**bit_depth.
    """

    width: int
    height: int
    bit_depth: int
    samples: np.ndarray
    _f64: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.bit_depth not in (8, 10):
            raise ValueError(f"unsupported bit depth {self.bit_depth}")
        expected_dtype = np.uint8 if self.bit_depth == 8 else np.uint16
        if self.samples.dtype != expected_dtype:
            raise ValueError(
                f"samples dtype {self.samples.dtype} does not match "
                f"bit depth {self.bit_depth}"
            )
        if self.samples.shape != (self.height, self.width):
            raise ValueError(
                f"samples shape {self.samples.shape} does not match "
                f"{self.height}x{self.width}"
            )
        if self.samples.size and int(self.samples.max()) >= self.max_value + 1:
            raise ValueError(f"sample exceeds {self.bit_depth}-bit range")

    @property
    def max_value(self) -> int:
        return (1 << self.bit_depth) - 1

    @classmethod
    def from_array(cls, samples: np.ndarray, bit_depth: int = 8) -> "FramePlane":
        dtype = np.uint8 if bit_depth == 8 else np.uint16
        samples = np.ascontiguousarray(samples, dtype=dtype)
        h, w = samples.shape
        return cls(width=w, height=h, bit_depth=bit_depth, samples=samples)

    def as_f64(self) -> np.ndarray:
        """Cached C-contiguous float64 view for the sampling kernels."""
        if self._f64 is None:
            self._f64 = np.ascontiguousarray(self.samples, dtype=np.float64)
        return self._f64


@dataclass(frozen=True)
class Block:
    """Axis-aligned pixel block; sizes must be multiples of 4."""

    x0: int
    y0: int
    w: int
    h: int

    def __post_init__(self):
        if self.w not in ALLOWED_BLOCK_SIZES or self.h not in ALLOWED_BLOCK_SIZES:
            raise ValueError(f"unsupported block size {self.w}x{self.h}")

    def check_inside(self, frame: FramePlane) -> None:
        if (
            self.x0 < 0
            or self.y0 < 0
            or self.x0 + self.w > frame.width
            or self.y0 + self.h > frame.height
        ):
            raise ValueError(
                f"block {self} not fully inside {frame.width}x{frame.height} frame"
            )

    def pixels(self, frame: FramePlane) -> np.ndarray:
        return frame.samples[self.y0 : self.y0 + self.h, self.x0 : self.x0 + self.w]


def block_grid(width: int, height: int, block_size: int) -> list[Block]:
    """Uniform non-overlapping grid covering the frame exactly."""
    if width % block_size or height % block_size:
        raise ValueError(
            f"{width}x{height} frame is not divisible into {block_size} blocks"
        )
    return [
        Block(x, y, block_size, block_size)
        for y in range(0, height, block_size)
        for x in range(0, width, block_size)
    ]
