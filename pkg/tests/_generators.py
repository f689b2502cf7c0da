"""Seeded random profile generators shared by the test modules."""

from __future__ import annotations

import math

import numpy as np

from flatmass import SampledProfile, WarpSample, WellSpec, ads_schwarzschild, gravity_well
from flatmass.errors import ConstructionError
from flatmass.geometry import envelope

ALPHA0_M3 = 4.0 * math.pi * math.sinh(1.0) ** 2


def random_well(rng: np.random.Generator, dims=(3, 4, 5)):
    while True:
        m = int(rng.choice(dims))
        mass = 10.0 ** rng.uniform(-4, 0)
        q = 1.0 - 10.0 ** rng.uniform(-4, math.log10(0.5))
        spec = WellSpec(m, mass, q)
        width = spec.plateau_radius * rng.uniform(0.01, 0.2)
        try:
            return gravity_well(WellSpec(m, mass, q, width))
        except ConstructionError:
            continue


def random_ads(rng: np.random.Generator, dims=(3, 4, 5)):
    return ads_schwarzschild(int(rng.choice(dims)), 10.0 ** rng.uniform(-4, 1))


def random_spline(rng: np.random.Generator, dims=(3, 4, 5)) -> SampledProfile:
    """Monotone samples from 0 that stay below half the envelope.

    Each node value is capped by ``0.45 envelope`` at the previous node, so the
    monotone interpolant stays below the envelope between nodes too.
    """
    m = int(rng.choice(dims))
    n = int(rng.integers(8, 30))
    radii = np.concatenate([[0.0], np.sort(rng.uniform(0.05, 10.0, n))])
    radii = np.unique(radii)
    target = 10.0 ** rng.uniform(-4, 0)
    steps = rng.exponential(size=radii.size - 1) * (rng.random(radii.size - 1) < 0.8)
    masses = [0.0]
    cum = np.cumsum(steps) / max(steps.sum(), 1e-300) * target
    for k in range(1, radii.size):
        cap = 0.45 * float(envelope(radii[k - 1], m))
        masses.append(min(max(cum[k - 1], masses[-1]), max(cap, masses[-1])))
    return SampledProfile(m, radii, masses)


class WarpFamily:
    """``f(s) = A sinh s + B + C tanh s`` with ``1 + f^2 >= f'^2``."""

    def __init__(self, A, B, C):
        self.A, self.B, self.C = A, B, C

    def sample(self, s: float) -> WarpSample:
        A, B, C = self.A, self.B, self.C
        sech2 = 1.0 / math.cosh(s) ** 2
        f = A * math.sinh(s) + B + C * math.tanh(s)
        f1 = A * math.cosh(s) + C * sech2
        f2 = A * math.sinh(s) - 2.0 * C * sech2 * math.tanh(s)
        return WarpSample(s, f, f1, f2)

    def admissible(self, s_values) -> bool:
        for s in s_values:
            w = self.sample(s)
            if w.f <= 0 or w.f1 <= 0 or 1.0 + w.f * w.f - w.f1 * w.f1 <= 1e-6:
                return False
        return True


def random_warp(rng: np.random.Generator, s_values) -> WarpFamily:
    while True:
        fam = WarpFamily(rng.uniform(0.5, 1.0), rng.uniform(0.05, 2.0), rng.uniform(-0.3, 0.3))
        if fam.admissible(s_values):
            return fam


def graph_chart_from_warp(w: WarpSample):
    """Area radius, slope and second slope derivative of the graph chart.

    ``s'(r) = sqrt(1 + f^2) / f'`` and ``z' z'' = s' ds'/dr`` with
    ``z'^2 = s'^2 - 1``.
    """
    r = math.asinh(w.f)
    root = math.sqrt(1.0 + w.f * w.f)
    sp = root / w.f1
    zp = math.sqrt(max(sp * sp - 1.0, 0.0))
    dsp_ds = w.f / root - root * w.f2 / (w.f1 * w.f1)
    dsp_dr = dsp_ds * sp
    zpp = sp * dsp_dr / zp if zp > 0 else 0.0
    return r, zp, zpp
