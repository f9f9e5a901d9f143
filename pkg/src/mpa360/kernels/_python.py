"""Pure numpy kernel backend.

Arithmetic is written in exactly the association order used by the
compiled backend so both produce bit-identical values.
"""

from __future__ import annotations

import numpy as np

_BILINEAR = 0
_BICUBIC = 1

# Candidate-chunk size cap for sad_candidates, in gathered samples.
_CHUNK_SAMPLES = 4_000_000


def _gather(ref, iy, ix):
    return ref[iy, ix]


def _interp_bilinear(ref, x, y):
    h, w = ref.shape
    ixf = np.floor(x)
    iyf = np.floor(y)
    fx = x - ixf
    fy = y - iyf
    ix0 = ixf.astype(np.int64) % w
    ix1 = (ix0 + 1) % w
    iy0 = np.clip(iyf.astype(np.int64), 0, h - 1)
    iy1 = np.clip(iyf.astype(np.int64) + 1, 0, h - 1)
    top = (1.0 - fx) * _gather(ref, iy0, ix0) + fx * _gather(ref, iy0, ix1)
    bot = (1.0 - fx) * _gather(ref, iy1, ix0) + fx * _gather(ref, iy1, ix1)
    return (1.0 - fy) * top + fy * bot


def _cubic_weights(t):
    # Keys cubic convolution, a = -0.5, taps at offsets -1, 0, +1, +2.
    w0 = ((-0.5 * t + 1.0) * t - 0.5) * t
    w1 = (1.5 * t - 2.5) * t * t + 1.0
    w2 = ((-1.5 * t + 2.0) * t + 0.5) * t
    w3 = (0.5 * t - 0.5) * t * t
    return w0, w1, w2, w3


def _interp_bicubic(ref, x, y):
    h, w = ref.shape
    ixf = np.floor(x)
    iyf = np.floor(y)
    fx = x - ixf
    fy = y - iyf
    ix = ixf.astype(np.int64)
    iy = iyf.astype(np.int64)
    wx = _cubic_weights(fx)
    wy = _cubic_weights(fy)
    cols = [(ix + k) % w for k in (-1, 0, 1, 2)]
    rows = [np.clip(iy + k, 0, h - 1) for k in (-1, 0, 1, 2)]
    val = 0.0
    for k in range(4):
        row = (
            wx[0] * _gather(ref, rows[k], cols[0])
            + wx[1] * _gather(ref, rows[k], cols[1])
            + wx[2] * _gather(ref, rows[k], cols[2])
            + wx[3] * _gather(ref, rows[k], cols[3])
        )
        val = val + wy[k] * row
    return val


def _interp(ref, x, y, interp):
    if interp == _BILINEAR:
        return _interp_bilinear(ref, x, y)
    if interp == _BICUBIC:
        return _interp_bicubic(ref, x, y)
    raise ValueError(f"unknown interpolation mode {interp}")


def _round_clamp(val, max_val):
    return np.minimum(np.maximum(np.floor(val + 0.5), 0.0), max_val)


def sample_values(ref, xs, ys, interp, max_val):
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    return _round_clamp(_interp(ref, xs, ys, interp), max_val)


def _pixel_shifts(bw, bh, sub_size, sub_dx, sub_dy):
    nsx = bw // sub_size
    nsy = bh // sub_size
    dx = np.repeat(np.repeat(sub_dx.reshape(nsy, nsx), sub_size, 0), sub_size, 1)
    dy = np.repeat(np.repeat(sub_dy.reshape(nsy, nsx), sub_size, 0), sub_size, 1)
    return dx, dy


def predict_block(ref, x0, y0, bw, bh, sub_size, sub_dx, sub_dy, interp, max_val):
    dx, dy = _pixel_shifts(bw, bh, sub_size, np.asarray(sub_dx), np.asarray(sub_dy))
    px = x0 + np.arange(bw, dtype=np.float64)[None, :]
    py = y0 + np.arange(bh, dtype=np.float64)[:, None]
    return _round_clamp(_interp(ref, px + dx, py + dy, interp), max_val)


def sad_candidates(ref, x0, y0, orig, sub_size, cand_dx, cand_dy, interp, max_val):
    cand_dx = np.asarray(cand_dx, dtype=np.float64)
    cand_dy = np.asarray(cand_dy, dtype=np.float64)
    bh, bw = orig.shape
    n_cand = cand_dx.shape[0]
    nsx = bw // sub_size
    nsy = bh // sub_size
    px = x0 + np.arange(bw, dtype=np.float64)[None, None, :]
    py = y0 + np.arange(bh, dtype=np.float64)[None, :, None]
    sads = np.empty(n_cand, dtype=np.float64)
    chunk = max(1, _CHUNK_SAMPLES // (bh * bw))
    for lo in range(0, n_cand, chunk):
        hi = min(lo + chunk, n_cand)
        dx = np.repeat(
            np.repeat(cand_dx[lo:hi].reshape(-1, nsy, nsx), sub_size, 1), sub_size, 2
        )
        dy = np.repeat(
            np.repeat(cand_dy[lo:hi].reshape(-1, nsy, nsx), sub_size, 1), sub_size, 2
        )
        pred = _round_clamp(_interp(ref, px + dx, py + dy, interp), max_val)
        sads[lo:hi] = np.abs(pred - orig[None, :, :]).sum(axis=(1, 2))
    return sads
