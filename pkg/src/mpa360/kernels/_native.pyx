# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel backend.

Mirrors mpa360.kernels._python operation for operation (same association
order, same rounding) so both backends return bit-identical results.
"""

import numpy as np

cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport fabs

cnp.import_array()

cdef int BILINEAR = 0
cdef int BICUBIC = 1


cdef inline Py_ssize_t _floor_i(double x) nogil:
    # libm-free floor for the |x| < 2^62 positions the callers guarantee
    cdef Py_ssize_t i = <Py_ssize_t>x
    if x < <double>i:
        i -= 1
    return i


cdef inline Py_ssize_t _wrap(Py_ssize_t i, Py_ssize_t n) nogil:
    if 0 <= i < n:  # fast path: integer division is expensive
        return i
    i = i % n
    if i < 0:
        i += n
    return i


cdef inline Py_ssize_t _clamp(Py_ssize_t i, Py_ssize_t hi) nogil:
    if i < 0:
        return 0
    if i > hi:
        return hi
    return i


cdef inline double _bilinear(const double[:, ::1] ref, double x, double y) nogil:
    cdef Py_ssize_t h = ref.shape[0], w = ref.shape[1]
    cdef Py_ssize_t ix = _floor_i(x), iy = _floor_i(y)
    cdef double fx = x - <double>ix, fy = y - <double>iy
    cdef Py_ssize_t ix0 = _wrap(ix, w)
    cdef Py_ssize_t iy0 = _clamp(iy, h - 1)
    if fx == 0.0 and fy == 0.0:
        # integer position: the 0/1 weights make the blend collapse exactly
        return ref[iy0, ix0]
    cdef Py_ssize_t ix1 = _wrap(ix + 1, w)
    cdef Py_ssize_t iy1 = _clamp(iy + 1, h - 1)
    cdef double top = (1.0 - fx) * ref[iy0, ix0] + fx * ref[iy0, ix1]
    cdef double bot = (1.0 - fx) * ref[iy1, ix0] + fx * ref[iy1, ix1]
    return (1.0 - fy) * top + fy * bot


cdef inline void _cubic_weights(double t, double* w) nogil:
    # Keys cubic convolution, a = -0.5, taps at offsets -1, 0, +1, +2.
    w[0] = ((-0.5 * t + 1.0) * t - 0.5) * t
    w[1] = (1.5 * t - 2.5) * t * t + 1.0
    w[2] = ((-1.5 * t + 2.0) * t + 0.5) * t
    w[3] = (0.5 * t - 0.5) * t * t


cdef inline double _bicubic(const double[:, ::1] ref, double x, double y) nogil:
    cdef Py_ssize_t h = ref.shape[0], w = ref.shape[1]
    cdef Py_ssize_t ix = _floor_i(x), iy = _floor_i(y)
    cdef double fx = x - <double>ix, fy = y - <double>iy
    if fx == 0.0 and fy == 0.0:
        # Keys weights at t=0 are (0, 1, 0, 0): exact single-sample result
        return ref[_clamp(iy, h - 1), _wrap(ix, w)]
    cdef double wx[4]
    cdef double wy[4]
    cdef Py_ssize_t cols[4]
    cdef Py_ssize_t rows[4]
    cdef Py_ssize_t k
    cdef double row, val = 0.0
    _cubic_weights(fx, wx)
    _cubic_weights(fy, wy)
    for k in range(4):
        cols[k] = _wrap(ix + k - 1, w)
        rows[k] = _clamp(iy + k - 1, h - 1)
    for k in range(4):
        row = (
            wx[0] * ref[rows[k], cols[0]]
            + wx[1] * ref[rows[k], cols[1]]
            + wx[2] * ref[rows[k], cols[2]]
            + wx[3] * ref[rows[k], cols[3]]
        )
        val = val + wy[k] * row
    return val


cdef inline double _sample(const double[:, ::1] ref, double x, double y,
                           int interp) nogil:
    if interp == BILINEAR:
        return _bilinear(ref, x, y)
    return _bicubic(ref, x, y)


cdef inline double _round_clamp(double val, double max_val) nogil:
    val = <double>_floor_i(val + 0.5)
    if val < 0.0:
        return 0.0
    if val > max_val:
        return max_val
    return val


def sample_values(const double[:, ::1] ref, xs, ys, int interp, double max_val):
    if interp != BILINEAR and interp != BICUBIC:
        raise ValueError(f"unknown interpolation mode {interp}")
    xs_arr = np.ascontiguousarray(np.atleast_1d(np.asarray(xs, dtype=np.float64)))
    ys_arr = np.ascontiguousarray(np.atleast_1d(np.asarray(ys, dtype=np.float64)))
    cdef const double[::1] xv = xs_arr.ravel()
    cdef const double[::1] yv = ys_arr.ravel()
    out_arr = np.empty(xv.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(xv.shape[0]):
            out[i] = _round_clamp(_sample(ref, xv[i], yv[i], interp), max_val)
    return out_arr.reshape(np.shape(xs))


# Pixel positions are computed as (block_origin + pixel_index) + shift in
# both loops below; the integer part is exact in double precision, so the
# values match the numpy backend's (origin + index) + shift bit for bit.


def predict_block(const double[:, ::1] ref, double x0, double y0,
                  Py_ssize_t bw, Py_ssize_t bh, Py_ssize_t sub_size,
                  const double[::1] sub_dx, const double[::1] sub_dy,
                  int interp, double max_val):
    if interp != BILINEAR and interp != BICUBIC:
        raise ValueError(f"unknown interpolation mode {interp}")
    cdef Py_ssize_t nsx = bw // sub_size
    cdef Py_ssize_t nsy = bh // sub_size
    out_arr = np.empty((bh, bw), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t sx, sy, xx, yy, px, py
    cdef double dx, dy
    with nogil:
        for sy in range(nsy):
            for sx in range(nsx):
                dx = sub_dx[sy * nsx + sx]
                dy = sub_dy[sy * nsx + sx]
                for yy in range(sub_size):
                    py = sy * sub_size + yy
                    for xx in range(sub_size):
                        px = sx * sub_size + xx
                        out[py, px] = _round_clamp(
                            _sample(ref, (x0 + px) + dx, (y0 + py) + dy, interp),
                            max_val,
                        )
    return out_arr


def sad_candidates(const double[:, ::1] ref, double x0, double y0,
                   const double[:, ::1] orig, Py_ssize_t sub_size,
                   const double[:, ::1] cand_dx, const double[:, ::1] cand_dy,
                   int interp, double max_val):
    if interp != BILINEAR and interp != BICUBIC:
        raise ValueError(f"unknown interpolation mode {interp}")
    cdef Py_ssize_t bh = orig.shape[0], bw = orig.shape[1]
    cdef Py_ssize_t n_cand = cand_dx.shape[0]
    cdef Py_ssize_t nsx = bw // sub_size
    cdef Py_ssize_t nsy = bh // sub_size
    out_arr = np.empty(n_cand, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t c, sx, sy, xx, yy, px, py
    cdef double dx, dy, pred, acc
    # candidates are independent and write disjoint slots, so the parallel
    # loop is bit-deterministic for any thread count
    for c in prange(n_cand, nogil=True, schedule="static"):
        acc = 0.0
        for sy in range(nsy):
            for sx in range(nsx):
                dx = cand_dx[c, sy * nsx + sx]
                dy = cand_dy[c, sy * nsx + sx]
                for yy in range(sub_size):
                    py = sy * sub_size + yy
                    for xx in range(sub_size):
                        px = sx * sub_size + xx
                        pred = _round_clamp(
                            _sample(ref, (x0 + px) + dx, (y0 + py) + dy, interp),
                            max_val,
                        )
                        acc = acc + fabs(pred - orig[py, px])
        out[c] = acc
    return out_arr
