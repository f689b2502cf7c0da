import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from _generators import random_ads, random_spline, random_well
from flatmass import (
    SampledProfile,
    ads_schwarzschild,
    arclength,
    build_embedding,
    hyperbolic,
    slope_bounds,
    sphere_area,
    tubular_window,
)
from flatmass.errors import DomainError, HorizonError, TruncationError
from flatmass.geometry import envelope


def _sinh_cosh2(r):
    return np.sinh(r) * np.cosh(r) ** 2


@pytest.fixture(scope="module")
def hyp():
    return build_embedding(hyperbolic(3))


@pytest.fixture(scope="module")
def ads():
    return build_embedding(ads_schwarzschild(3, 0.1))


class TestHeight:
    def test_hyperbolic_flat(self, hyp):
        for r in np.linspace(0, hyp.profile.r_max, 17):
            assert hyp.height(r) == 0.0

    def test_ads_finite_depth(self, ads):
        p = ads.profile
        assert ads.height(p.r_min) == 0.0
        depth = ads.height(p.r_max)
        assert math.isfinite(depth) and depth > 0
        assert math.isinf(ads.slope(p.r_min))

    def test_ads_height_oracle(self, ads):
        # F(r) = int 2u z'(r_min + u^2) du on a uniform u-grid
        mu, r_min = 0.1, ads.profile.r_min
        top = r_min + 0.5
        n = 1_000_000
        umax = math.sqrt(top - r_min)
        u = (np.arange(n) + 0.5) / n * umax
        r = r_min + u * u
        zp = np.sqrt(2 * mu / (_sinh_cosh2(r) - 2 * mu))
        oracle = float(np.sum(2 * u * zp) * umax / n)
        assert ads.height(top) == pytest.approx(oracle, abs=1e-7)

    def test_gauge_shift(self, ads):
        moved = ads.shifted(-3.25)
        for r in (ads.profile.r_min, 0.4, 2.0, 7.0):
            assert moved.height(r) - ads.height(r) == pytest.approx(-3.25, abs=1e-12)
        gauged = ads.gauged_at(1.0)
        assert gauged.height(1.0) == pytest.approx(0.0, abs=1e-12)

    def test_slopes_unchanged_by_gauge(self, ads):
        assert ads.shifted(5.0).slope(1.3) == ads.slope(1.3)

    def test_out_of_range(self, ads):
        with pytest.raises(DomainError):
            ads.height(0.1)
        with pytest.raises(DomainError):
            ads.height(ads.profile.r_max + 1.0)


class TestArclength:
    def test_hyperbolic(self, hyp):
        assert arclength(hyp, 0.0, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_empty(self, ads):
        assert arclength(ads, 0.7, 0.7) == 0.0

    def test_reversed(self, ads):
        with pytest.raises(DomainError):
            arclength(ads, 1.0, 0.5)

    def test_ads_near_horizon_oracle(self, ads):
        mu, r_min = 0.1, ads.profile.r_min
        assert r_min == pytest.approx(brentq(lambda x: _sinh_cosh2(x) - 0.2, 0, 1, xtol=1e-15),
                                      abs=1e-12)
        # r = r_min + u^2, density 1/sqrt(1 - 2 mu / envelope)
        n = 1_000_000
        umax = math.sqrt(0.1)
        u = (np.arange(n) + 0.5) / n * umax
        r = r_min + u * u
        env = _sinh_cosh2(r)
        oracle = float(np.sum(2 * u * np.sqrt(env / (env - 2 * mu))) * umax / n)
        got = arclength(ads, r_min, r_min + 0.1)
        assert got > 0.1
        assert got == pytest.approx(oracle, abs=1e-7)

    def test_same_node_interval_path(self, ads):
        a, b = 1.0, 1.0 + 1e-4
        assert arclength(ads, a, b) == pytest.approx(
            ads.length_from_min(b) - ads.length_from_min(a), abs=1e-11)


def _profiles(seed):
    rng = np.random.default_rng(seed)
    return [random_well(rng), random_ads(rng), random_spline(rng)]


class TestInvariants:
    @pytest.mark.parametrize("seed", range(6))
    def test_geometric_inequalities(self, seed):
        for p in _profiles(seed):
            emb = build_embedding(p)
            r = np.linspace(p.r_min, min(p.r_max, p.r_min + 6.0), 9)
            h = np.array([emb.height(x) for x in r])
            assert np.all(np.diff(h) >= -1e-12)
            for a, b in zip(r[:-1], r[1:]):
                L = arclength(emb, a, b)
                chord = math.hypot(b - a, h[r.tolist().index(b)] - h[r.tolist().index(a)])
                assert L >= chord - 1e-9
            mid = 0.5 * (r[2] + r[3])
            whole = arclength(emb, r[2], r[4])
            assert whole == pytest.approx(arclength(emb, r[2], mid) + arclength(emb, mid, r[4]),
                                          abs=1e-9)

    @pytest.mark.parametrize("seed", range(4))
    def test_quad_matches_tables(self, seed):
        for p in _profiles(seed):
            emb = build_embedding(p)
            a, b = p.r_min, p.r_min + 2.0
            assert emb.quad(None, a, b, density="slope") == pytest.approx(
                emb.height(b) - emb.height(a), abs=1e-9)
            assert emb.quad(None, a, b) == pytest.approx(arclength(emb, a, b), abs=1e-9)

    def test_quad_bad_density(self, hyp):
        with pytest.raises(DomainError):
            hyp.quad(None, 0, 1, density="volume")


class TestWindow:
    def test_hyperbolic(self, hyp):
        w = tubular_window(hyp, float(sphere_area(1.0, 3)), 0.5)
        assert w.r0 == pytest.approx(1.0, abs=1e-12)
        assert w.rDminus == pytest.approx(0.5, abs=1e-9)
        assert w.rDplus == pytest.approx(1.5, abs=1e-9)
        assert not w.clipped

    def test_ads_clipped_to_horizon(self, ads):
        w = tubular_window(ads, float(sphere_area(1.0, 3)), 2.0)
        assert arclength(ads, ads.profile.r_min, 1.0) < 2.0
        assert w.clipped
        assert w.rDminus == ads.profile.r_min
        assert w.rDminus == pytest.approx(0.191654, abs=1e-6)
        assert arclength(ads, w.r0, w.rDplus) == pytest.approx(2.0, abs=1e-9)

    @pytest.mark.parametrize("seed", range(4))
    def test_distances(self, seed):
        rng = np.random.default_rng(100 + seed)
        for p in _profiles(seed):
            emb = build_embedding(p)
            r0 = p.r_min + rng.uniform(0.5, 2.0)
            D = rng.uniform(0.1, 1.5)
            w = tubular_window(emb, float(sphere_area(r0, p.dim)), D)
            assert w.r0 == pytest.approx(r0, abs=1e-10)
            assert arclength(emb, w.r0, w.rDplus) == pytest.approx(D, abs=1e-9)
            if w.clipped:
                assert w.rDminus == p.r_min
                assert arclength(emb, p.r_min, w.r0) <= D + 1e-9
            else:
                assert arclength(emb, w.rDminus, w.r0) == pytest.approx(D, abs=1e-9)

    def test_truncation(self):
        emb = build_embedding(hyperbolic(3, r_max=1.2))
        with pytest.raises(TruncationError):
            tubular_window(emb, float(sphere_area(1.0, 3)), 0.5)

    def test_bad_radius(self, hyp):
        with pytest.raises(DomainError):
            tubular_window(hyp, float(sphere_area(1.0, 3)), 0.0)


class TestSlopeBounds:
    def test_hyperbolic(self, hyp):
        sb = slope_bounds(hyp, 0.5)
        r = np.linspace(0.1, 5, 7)
        assert np.all(sb.lower(r) == 0) and np.all(sb.upper(r) == 0)

    @pytest.mark.parametrize("seed", range(5))
    def test_sandwich(self, seed):
        rng = np.random.default_rng(seed)
        for p in _profiles(seed):
            emb = build_embedding(p)
            r1 = p.r_min + rng.uniform(0.05, 2.0)
            sb = slope_bounds(emb, r1)
            r = np.linspace(r1, p.r_max, 400)[1:]
            fp = np.asarray(p.zprime(r))
            assert np.all(sb.lower(r) <= fp + 1e-9)
            up = r[r >= sb.upper_from]
            assert np.all(np.asarray(p.zprime(up)) <= sb.upper(up) + 1e-9)

    def test_below_r_min(self, ads):
        with pytest.raises(DomainError):
            slope_bounds(ads, 0.1)


class TestHorizon:
    def test_interior_horizon(self):
        r = np.array([0.0, 0.5, 1.0, 2.0, 3.0])
        cap = 0.5 * np.asarray(envelope(r, 3))
        masses = np.array([0.0, 0.3 * cap[1], 1.2 * cap[2], 1.2 * cap[2], 1.2 * cap[2]])
        with pytest.raises(HorizonError):
            build_embedding(SampledProfile(3, r, masses))

    @settings(max_examples=15, deadline=None)
    @given(mu=st.floats(1e-6, 5.0), m=st.integers(3, 5))
    def test_ads_depth_finite(self, mu, m):
        emb = build_embedding(ads_schwarzschild(m, mu))
        p = emb.profile
        top = p.r_min + 1.0
        assert math.isfinite(emb.height(top))
        assert arclength(emb, p.r_min, top) >= math.hypot(1.0, emb.height(top)) - 1e-9
