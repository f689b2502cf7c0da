"""Constructors for hyperbolic space, anti-de Sitter-Schwarzschild, and
deep gravity wells."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from .errors import ConstructionError, DomainError, FlatmassError
from .geometry import (
    DEFAULT_R_MAX,
    AdSSchwarzschildProfile,
    Dimension,
    HyperbolicProfile,
    MetricProfile,
    as_dimension,
    envelope,
    envelope_derivative,
    invert_envelope,
)
from .numerics import bracket_root_increasing

__all__ = [
    "WellSpec",
    "WellProfile",
    "hyperbolic",
    "ads_schwarzschild",
    "gravity_well",
    "well_depth",
    "SweepItem",
    "sweep",
    "FAMILIES",
]

# default blend width as a fraction of the plateau radius
BLEND_FRACTION = 0.05


def hyperbolic(dim: Dimension | int, r_max: float = DEFAULT_R_MAX) -> HyperbolicProfile:
    return HyperbolicProfile(as_dimension(dim), r_max)


def ads_schwarzschild(dim: Dimension | int, mass: float,
                      r_max: float = DEFAULT_R_MAX) -> AdSSchwarzschildProfile:
    """Constant Hawking mass `mass`; ``r_min`` is the horizon radius."""
    return AdSSchwarzschildProfile(as_dimension(dim), mass, r_max)


@dataclass(frozen=True)
class WellSpec:
    """Parameters of a gravity well.

    On the rising segment ``2 m_H = q_peak * envelope``, so the graph slope
    is the constant ``sqrt(q_peak / (1 - q_peak))``.  A cubic ramp of width
    `blend_width` joins it to the plateau ``m_H = mass``.  ``blend_width``
    defaults to 5% of the plateau radius.
    """

    dim: Dimension
    mass: float
    q_peak: float
    blend_width: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "dim", as_dimension(self.dim))
        if not self.mass > 0:
            raise DomainError(f"well mass must be positive, got {self.mass}")
        if not 0 < self.q_peak < 1:
            raise DomainError(f"q_peak must lie in (0, 1), got {self.q_peak}")
        if self.blend_width is None:
            object.__setattr__(self, "blend_width", BLEND_FRACTION * self.plateau_radius)
        if not self.blend_width > 0:
            raise DomainError(f"blend_width must be positive, got {self.blend_width}")

    @property
    def plateau_radius(self) -> float:
        """Radius where the rising segment would reach the plateau value."""
        return invert_envelope(2.0 * self.mass / self.q_peak, self.dim)

    @property
    def slope(self) -> float:
        return math.sqrt(self.q_peak / (1.0 - self.q_peak))


@dataclass(frozen=True, repr=False)
class WellProfile(MetricProfile):
    """Boundaryless profile with a steep rising segment and a mass plateau."""

    spec: WellSpec
    r_max: float = DEFAULT_R_MAX
    r_min: float = field(default=0.0, init=False)
    ramp_start: float = field(default=0.0, init=False)
    ramp_end: float = field(default=0.0, init=False)
    kind = "gravity_well"

    def __post_init__(self):
        spec = self.spec
        q, w, mass = spec.q_peak, spec.blend_width, spec.mass

        def rise(r):
            return 0.5 * q * float(envelope(r, spec.dim))

        def drise(r):
            return 0.5 * q * float(envelope_derivative(r, spec.dim))

        # Start the ramp where the tangent slope is twice the secant slope to
        # the plateau; the cubic is then concave, hence monotone and below the
        # (convex) rising curve.
        def excess(a):
            return drise(a) * w - 2.0 * (mass - rise(a))

        if excess(0.0) >= 0:
            raise ConstructionError(
                f"blend_width {w} too wide for mass {mass} and q_peak {q}: "
                "the ramp cannot stay monotone"
            )
        lo, hi = bracket_root_increasing(excess, 0.0, spec.plateau_radius)
        a = hi
        if a + w >= self.r_max:
            raise ConstructionError(
                f"r_max = {self.r_max} does not exceed the plateau start {a + w}"
            )
        object.__setattr__(self, "ramp_start", a)
        object.__setattr__(self, "ramp_end", a + w)
        object.__setattr__(self, "_y0", rise(a))
        object.__setattr__(self, "_d0", drise(a))

    @property
    def dim(self) -> Dimension:
        return self.spec.dim

    @property
    def breakpoints(self):
        return (self.ramp_start, self.ramp_end)

    def params(self):
        return {"mass": self.spec.mass, "q_peak": self.spec.q_peak,
                "blend_width": self.spec.blend_width, "r_max": self.r_max}

    def _ramp(self, r):
        w = self.spec.blend_width
        t = (r - self.ramp_start) / w
        y0, d0, y1 = self._y0, self._d0, self.spec.mass
        value = ((2 * t**3 - 3 * t**2 + 1) * y0 + (t**3 - 2 * t**2 + t) * w * d0
                 + (-2 * t**3 + 3 * t**2) * y1)
        slope = ((6 * t**2 - 6 * t) * y0 / w + (3 * t**2 - 4 * t + 1) * d0
                 + (-6 * t**2 + 6 * t) * y1 / w)
        return value, slope

    def hawking_mass(self, r):
        r = np.asarray(r, dtype=float)
        q = self.spec.q_peak
        ramp, _ = self._ramp(r)
        return np.select(
            [r <= self.ramp_start, r < self.ramp_end],
            [0.5 * q * envelope(r, self.dim), ramp],
            self.spec.mass,
        )

    def hawking_mass_derivative(self, r):
        r = np.asarray(r, dtype=float)
        q = self.spec.q_peak
        _, dramp = self._ramp(r)
        return np.select(
            [r <= self.ramp_start, r < self.ramp_end],
            [0.5 * q * envelope_derivative(r, self.dim), dramp],
            0.0,
        )

    def mass_ratio(self, r):
        r = np.asarray(r, dtype=float)
        generic = super().mass_ratio(r)
        return np.where(r <= self.ramp_start, self.spec.q_peak, generic)

    def mass_ratio_derivative(self, r):
        r = np.asarray(r, dtype=float)
        generic = super().mass_ratio_derivative(r)
        return np.where(r <= self.ramp_start, 0.0, generic)


def gravity_well(spec: WellSpec, r_max: float = DEFAULT_R_MAX) -> WellProfile:
    return WellProfile(spec, r_max)


class WellDepth(NamedTuple):
    height: float
    arclength: float


def well_depth(profile: WellProfile) -> WellDepth:
    """Height gained and arclength travelled along the rising segment."""
    q = profile.spec.q_peak
    a = profile.ramp_start
    return WellDepth(a * math.sqrt(q / (1.0 - q)), a / math.sqrt(1.0 - q))


FAMILIES = ("hyperbolic", "ads_schwarzschild", "gravity_well")


class SweepItem(NamedTuple):
    mass: float
    profile: MetricProfile | None
    error: FlatmassError | None


def sweep(family: str, masses: Iterable[float], dim: Dimension | int = 3,
          r_max: float = DEFAULT_R_MAX, q_peak: float = 0.99,
          blend_width: float | None = None) -> list[SweepItem]:
    """One profile per mass; construction failures are recorded, not raised."""
    if family not in ("ads_schwarzschild", "gravity_well"):
        raise DomainError(f"sweep family must be ads_schwarzschild or gravity_well, got {family!r}")
    dim = as_dimension(dim)
    items = []
    for mass in masses:
        try:
            if family == "ads_schwarzschild":
                profile = ads_schwarzschild(dim, mass, r_max)
            else:
                profile = gravity_well(WellSpec(dim, mass, q_peak, blend_width), r_max)
        except FlatmassError as exc:
            items.append(SweepItem(mass, None, exc))
        else:
            items.append(SweepItem(mass, profile, None))
    return items
