import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatmass.errors import BracketError, DomainError, RefinementError, SingularityError
from flatmass.numerics import (
    Tolerance,
    bracket_root_increasing,
    default_tolerance,
    find_root_increasing,
    integrate,
    integrate_singular_left,
)

TOL = Tolerance()


class TestIntegrate:
    def test_constant(self):
        assert integrate(lambda x: 1.0, 0.0, 2.0) == pytest.approx(2.0, abs=1e-12)

    def test_sinh_squared(self):
        expected = (math.sinh(2.0) - 2.0) / 4.0
        assert integrate(lambda x: np.sinh(x) ** 2, 0.0, 1.0) == pytest.approx(expected, abs=1e-10)

    def test_sinh_squared_cosh(self):
        expected = math.sinh(1.0) ** 3 / 3.0
        got = integrate(lambda x: np.sinh(x) ** 2 * np.cosh(x), 0.0, 1.0)
        assert got == pytest.approx(expected, abs=1e-10)

    def test_empty_interval(self):
        assert integrate(np.exp, 1.5, 1.5) == 0.0

    def test_reversed_limits(self):
        with pytest.raises(DomainError):
            integrate(np.exp, 1.0, 0.0)

    def test_non_finite_integrand(self):
        with pytest.raises(DomainError), np.errstate(divide="ignore"):
            integrate(lambda x: 1.0 / x, 0.0, 1.0)

    def test_refinement_failure_carries_estimate(self):
        with pytest.raises(RefinementError) as info:
            integrate(lambda x: np.sin(200.0 * x), 0.0, 3.0, Tolerance(1e-14, 0.0, 3))
        assert math.isfinite(info.value.estimate)

    @settings(max_examples=60, deadline=None)
    @given(a=st.floats(-2, 2), w1=st.floats(0, 2), w2=st.floats(0, 2),
           k=st.floats(0.1, 3.0))
    def test_additive(self, a, w1, w2, k):
        def f(x):
            return np.cosh(k * x) + np.sin(3 * x)
        b, c = a + w1, a + w1 + w2
        whole = integrate(f, a, c)
        parts = integrate(f, a, b) + integrate(f, b, c)
        scale = max(1.0, abs(whole))
        assert abs(whole - parts) <= 3 * (TOL.abs_tol + TOL.rel_tol * scale)


class TestSingular:
    def test_inverse_sqrt(self):
        assert integrate_singular_left(lambda r: 1.0 / np.sqrt(r), 0.0, 1.0) == pytest.approx(2.0, abs=1e-10)

    def test_translated(self):
        got = integrate_singular_left(lambda r: 1.0 / np.sqrt(r - 2.0), 2.0, 3.0)
        assert got == pytest.approx(2.0, abs=1e-10)

    def test_against_midpoint_oracle(self):
        # int_0^1 cosh(r)/sqrt(r) dr = int_0^1 2 cosh(u^2) du
        n = 1_000_000
        u = (np.arange(n) + 0.5) / n
        oracle = float(np.sum(2.0 * np.cosh(u * u)) / n)
        got = integrate_singular_left(lambda r: np.cosh(r) / np.sqrt(r), 0.0, 1.0)
        assert got == pytest.approx(oracle, abs=1e-8)

    def test_offset_mode(self):
        got = integrate_singular_left(lambda t: 1.0 / np.sqrt(t), 5.0, 6.0, offset=True)
        assert got == pytest.approx(2.0, abs=1e-10)

    def test_tiny_scale_structure(self):
        # sqrt(1e-30 + r)/r: inverse square root with a kink at r ~ 1e-30
        got = integrate_singular_left(lambda r: np.sqrt(1e-30 + r) / r, 0.0, 1.0)
        assert got == pytest.approx(2.0, abs=1e-10)

    def test_too_singular(self):
        with pytest.raises(SingularityError):
            integrate_singular_left(lambda r: 1.0 / r, 0.0, 1.0)

    def test_regular_path(self):
        got = integrate_singular_left(np.exp, 0.0, 1.0, exponent_half=False)
        assert got == pytest.approx(math.e - 1.0, abs=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(a=st.floats(0, 3), w=st.floats(0.01, 2), k=st.floats(-2, 2))
    def test_agrees_with_regular(self, a, w, k):
        def f(r):
            return np.exp(k * r) + r * r
        reg = integrate(f, a, a + w)
        sing = integrate_singular_left(f, a, a + w)
        assert abs(reg - sing) <= 2 * TOL.abs_tol + 2 * TOL.rel_tol * abs(reg)


class TestRoots:
    def test_linear(self):
        assert find_root_increasing(lambda x: x - 1.0, 0.0, 2.0) == pytest.approx(1.0, abs=1e-10)

    def test_envelope_two(self):
        root = find_root_increasing(lambda x: math.sinh(x) * math.cosh(x) ** 2 - 2.0, 0.0, 2.0)
        assert root == pytest.approx(math.asinh(1.0), abs=1e-10)

    def test_envelope_fifth(self):
        # independent check: the residual vanishes and the root is where
        # scipy's brentq puts it
        from scipy.optimize import brentq

        def g(x):
            return math.sinh(x) * math.cosh(x) ** 2 - 0.2
        root = find_root_increasing(g, 0.0, 1.0)
        assert abs(g(root)) < 1e-9
        assert root == pytest.approx(brentq(g, 0.0, 1.0, xtol=1e-14), abs=1e-10)
        assert root == pytest.approx(0.191654, abs=1e-6)

    def test_bad_bracket(self):
        with pytest.raises(BracketError):
            find_root_increasing(lambda x: x + 1.0, 0.0, 2.0)
        with pytest.raises(BracketError):
            find_root_increasing(lambda x: x - 5.0, 0.0, 2.0)

    def test_bracket_invariant(self):
        lo, hi = bracket_root_increasing(lambda x: x**3 - 2.0, 0.0, 2.0)
        assert lo**3 - 2.0 <= 0.0 <= hi**3 - 2.0
        assert hi - lo <= 4.0 * np.spacing(hi)

    @settings(max_examples=60, deadline=None)
    @given(c=st.floats(-5, 5), k=st.floats(0.1, 3))
    def test_tolerance_property(self, c, k):
        def g(x):
            return math.sinh(k * x) - c
        tol = Tolerance(1e-9)
        x = find_root_increasing(g, -50.0, 50.0, tol)
        assert g(x - tol.abs_tol) <= 0.0 <= g(x + tol.abs_tol)


class TestTolerance:
    @pytest.mark.parametrize("kw", [{"abs_tol": 0.0}, {"rel_tol": -1.0}, {"max_depth": 0}])
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            Tolerance(**kw)

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("FLATMASS_TOL", "1e-6")
        assert default_tolerance().abs_tol == 1e-6
        monkeypatch.setenv("FLATMASS_TOL", "junk")
        with pytest.raises(DomainError):
            default_tolerance()
        monkeypatch.delenv("FLATMASS_TOL")
        assert default_tolerance() == Tolerance()
