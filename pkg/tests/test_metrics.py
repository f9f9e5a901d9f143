"""PSNR / WS-PSNR / Bjontegaard delta tests."""

import math

import numpy as np
import pytest

from mpa360.frame import FramePlane
from mpa360.metrics import RDPoint, bd_rate, erp_row_weights, mse, psnr, ws_psnr


def bd_rate_oracle(anchor, test):
    """Independent Bjontegaard evaluation: Chebyshev-basis cubic fit and
    composite-trapezoid quadrature on a dense grid instead of the monomial
    polyfit + analytic integral used by the library."""
    q_a = np.array([p.quality for p in anchor])
    q_t = np.array([p.quality for p in test])
    fit_a = np.polynomial.Polynomial.fit(q_a, np.log([p.rate for p in anchor]), 3)
    fit_t = np.polynomial.Polynomial.fit(q_t, np.log([p.rate for p in test]), 3)
    lo = max(q_a.min(), q_t.min())
    hi = min(q_a.max(), q_t.max())
    grid = np.linspace(lo, hi, 20001)
    avg = np.trapezoid(fit_t(grid) - fit_a(grid), grid) / (hi - lo)
    return 100.0 * (math.exp(avg) - 1.0)


def frame_of(values, bit_depth=8):
    return FramePlane.from_array(np.asarray(values), bit_depth)


@pytest.fixture
def pair(rng):
    a = rng.integers(0, 256, size=(64, 128))
    b = rng.integers(0, 256, size=(64, 128))
    return frame_of(a), frame_of(b)


class TestPsnr:
    def test_identical_frames_give_infinity(self, pair):
        a, _ = pair
        assert psnr(a, a) == math.inf

    def test_uniform_plus_one_closed_form(self):
        a = frame_of(np.full((32, 64), 100))
        b = frame_of(np.full((32, 64), 101))
        assert psnr(a, b) == pytest.approx(10 * math.log10(255**2), abs=1e-12)

    def test_against_scalar_loop(self, pair):
        a, b = pair
        acc = 0
        for y in range(64):
            for x in range(128):
                d = int(a.samples[y, x]) - int(b.samples[y, x])
                acc += d * d
        expected = 10 * math.log10(255**2 / (acc / (64 * 128)))
        assert psnr(a, b) == pytest.approx(expected, abs=1e-12)

    def test_monotone_in_sse(self):
        base = frame_of(np.full((16, 32), 128))
        noisy1 = frame_of(np.full((16, 32), 129))
        noisy2 = frame_of(np.full((16, 32), 131))
        assert psnr(base, noisy1) > psnr(base, noisy2)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            psnr(frame_of(np.zeros((16, 32))), frame_of(np.zeros((32, 64))))

    def test_bit_depth_mismatch(self):
        a = frame_of(np.zeros((16, 32)))
        b = FramePlane.from_array(np.zeros((16, 32)), bit_depth=10)
        with pytest.raises(ValueError):
            psnr(a, b)


class TestWsPsnr:
    def test_identical_frames_give_infinity(self, pair):
        a, _ = pair
        assert ws_psnr(a, a) == math.inf

    def test_weights_shape(self):
        w = erp_row_weights(64)
        assert w.shape == (64,)
        # symmetric, maximal at the central rows, decreasing toward poles
        np.testing.assert_allclose(w, w[::-1], atol=1e-15)
        assert np.all(np.diff(w[:32]) > 0)
        assert w[0] < w[16] < w[31]
        assert w[31] == pytest.approx(math.cos(0.5 * math.pi / 64))

    def test_polar_distortion_scores_higher_than_equatorial(self):
        base = np.full((64, 128), 100)
        top = base.copy()
        top[0, :] += 20
        mid = base.copy()
        mid[32, :] += 20
        ref = frame_of(base)
        assert ws_psnr(ref, frame_of(top)) > ws_psnr(ref, frame_of(mid))
        # plain PSNR cannot tell the two apart
        assert psnr(ref, frame_of(top)) == psnr(ref, frame_of(mid))

    def test_uniform_weights_reduce_to_psnr(self, pair):
        a, b = pair
        uniform = np.ones(a.height)
        assert ws_psnr(a, b, weights=uniform) == pytest.approx(psnr(a, b), abs=1e-12)

    def test_weighted_mse_formula(self, pair):
        a, b = pair
        w = erp_row_weights(a.height)
        diff = a.samples.astype(float) - b.samples.astype(float)
        wmse = (w[:, None] * diff**2).sum() / (w.sum() * a.width)
        assert ws_psnr(a, b) == pytest.approx(10 * math.log10(255**2 / wmse), abs=1e-12)


class TestBdRate:
    anchor = [
        RDPoint(1000.0, 30.0),
        RDPoint(2000.0, 33.5),
        RDPoint(4200.0, 36.0),
        RDPoint(9000.0, 38.2),
    ]

    def test_identical_curves_give_zero(self):
        assert bd_rate(self.anchor, self.anchor) == pytest.approx(0.0, abs=1e-12)

    def test_uniform_rate_scaling(self):
        scaled = [RDPoint(p.rate * 0.9, p.quality) for p in self.anchor]
        assert bd_rate(self.anchor, scaled) == pytest.approx(-10.0, abs=1e-9)

    def test_antisymmetry_for_uniform_scaling(self):
        scaled = [RDPoint(p.rate * 0.9, p.quality) for p in self.anchor]
        forward = bd_rate(self.anchor, scaled)
        backward = bd_rate(scaled, self.anchor)
        assert backward == pytest.approx(-forward / (1 + forward / 100), abs=1e-9)

    def test_against_independent_oracle(self):
        test = [
            RDPoint(900.0, 30.4),
            RDPoint(1750.0, 33.3),
            RDPoint(3900.0, 36.1),
            RDPoint(8600.0, 38.6),
        ]
        got = bd_rate(self.anchor, test)
        expected = bd_rate_oracle(self.anchor, test)
        assert got == pytest.approx(expected, abs=0.01)
        assert got < 0  # test curve uses less rate throughout

    def test_five_point_curves_against_oracle(self):
        anchor = self.anchor + [RDPoint(18000.0, 40.1)]
        test = [RDPoint(p.rate * 1.07, p.quality + 0.3) for p in anchor]
        got = bd_rate(anchor, test)
        expected = bd_rate_oracle(anchor, test)
        assert got == pytest.approx(expected, abs=0.01)

    def test_insufficient_points_rejected(self):
        with pytest.raises(ValueError):
            bd_rate(self.anchor[:3], self.anchor)

    def test_non_monotone_quality_rejected(self):
        bad = [
            RDPoint(1000.0, 30.0),
            RDPoint(2000.0, 29.0),
            RDPoint(4000.0, 36.0),
            RDPoint(8000.0, 38.0),
        ]
        with pytest.raises(ValueError):
            bd_rate(bad, self.anchor)

    def test_disjoint_quality_ranges_rejected(self):
        far = [RDPoint(p.rate, p.quality + 50) for p in self.anchor]
        with pytest.raises(ValueError):
            bd_rate(self.anchor, far)

    def test_rd_point_validation(self):
        with pytest.raises(ValueError):
            RDPoint(0.0, 30.0)


def test_mse_zero_for_identical(pair):
    a, _ = pair
    assert mse(a, a) == 0.0
