"""Chart formulas and the Hawking-mass representation of rotationally
symmetric asymptotically hyperbolic metrics.

A metric ``g = ds^2 + f(s)^2 g_0`` on a manifold of dimension ``m`` is stored
through its Hawking mass profile ``m_H(r)`` in the area-radius coordinate
``r = arcsinh f``.  In that chart the metric is the graph
``g = (1 + z'(r)^2) dr^2 + sinh(r)^2 g_0`` over hyperbolic space, and

    m_H = envelope(r) / 2 * z'^2 / (1 + z'^2),
    envelope(r) = sinh(r)^(m-2) cosh(r)^2.

Class membership then reduces to ``m_H`` being nondecreasing and staying
below ``envelope / 2`` away from ``r_min``.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DimensionError, DomainError, HorizonError, MinimalSurfaceError
from .numerics import bracket_root_increasing

__all__ = [
    "Dimension",
    "as_dimension",
    "unit_sphere_volume",
    "envelope",
    "envelope_derivative",
    "envelope_increment",
    "invert_envelope",
    "sphere_area",
    "area_radius",
    "hyperbolic_ball_volume",
    "annulus_volume",
    "hawking_mass_graph",
    "zprime_from_hawking",
    "scalar_curvature_graph",
    "mean_curvature_graph",
    "WarpSample",
    "WarpGeometry",
    "warp_geometry",
    "MetricProfile",
    "HyperbolicProfile",
    "AdSSchwarzschildProfile",
    "SampledProfile",
    "convert_warp_to_profile",
    "MassEstimate",
    "mass_of",
    "disk_radius",
    "DEFAULT_R_MAX",
    "TRUNCATION_THRESHOLD",
]

DEFAULT_R_MAX = 10.0
TRUNCATION_THRESHOLD = 1e-9


def unit_sphere_volume(m: int) -> float:
    """Volume of the unit ``(m-1)``-sphere, ``2 pi^(m/2) / Gamma(m/2)``."""
    if int(m) != m or m < 3:
        raise DimensionError(f"dimension must be an integer >= 3, got {m}")
    return 2.0 * math.pi ** (m / 2.0) / math.gamma(m / 2.0)


@dataclass(frozen=True)
class Dimension:
    """Manifold dimension together with the unit-sphere volume."""

    m: int

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 3:
            raise DimensionError(f"dimension must be an integer >= 3, got {self.m}")
        object.__setattr__(self, "m", int(self.m))

    @property
    def omega(self) -> float:
        return unit_sphere_volume(self.m)


def as_dimension(dim: Dimension | int) -> Dimension:
    return dim if isinstance(dim, Dimension) else Dimension(dim)


def envelope(r, dim: Dimension | int):
    """``sinh(r)^(m-2) cosh(r)^2``: twice the largest Hawking mass at radius r."""
    m = as_dimension(dim).m
    r = np.asarray(r, dtype=float)
    return np.sinh(r) ** (m - 2) * np.cosh(r) ** 2


def envelope_derivative(r, dim: Dimension | int):
    m = as_dimension(dim).m
    r = np.asarray(r, dtype=float)
    sh, ch = np.sinh(r), np.cosh(r)
    first = (m - 2) * sh ** (m - 3) * ch**3 if m > 3 else ch**3
    return first + 2.0 * sh ** (m - 1) * ch


def envelope_increment(a: float, t, dim: Dimension | int):
    """``envelope(a + t) - envelope(a)`` without cancellation for small t."""
    k = as_dimension(dim).m - 2
    t = np.asarray(t, dtype=float)
    s0, c0 = math.sinh(a), math.cosh(a)
    ds = s0 * 2.0 * np.sinh(0.5 * t) ** 2 + c0 * np.sinh(t)
    s1 = s0 + ds
    dc2 = ds * (s1 + s0)
    c1sq = c0 * c0 + dc2
    # s1^k - s0^k = ds * sum_j s1^j s0^(k-1-j)
    acc = np.zeros_like(t)
    for j in range(k):
        acc = acc + s1**j * s0 ** (k - 1 - j)
    return ds * acc * c1sq + s0**k * dc2


def _snap_gap(env0: float, twice_mass: float) -> float:
    # r_min is only the float nearest the horizon; a roundoff-sized gap there
    # would put a spurious kink into the square-root-substituted integrands.
    gap = env0 - twice_mass
    return 0.0 if abs(gap) <= 8.0 * np.finfo(float).eps * env0 else gap


def invert_envelope(c: float, dim: Dimension | int) -> float:
    """Unique ``r >= 0`` with ``envelope(r) = c``.

    Bisection is carried to floating-point resolution and the upper end of
    the final bracket is returned, so ``envelope(result) >= c`` always.
    """
    dim = as_dimension(dim)
    c = float(c)
    if c < 0 or not math.isfinite(c):
        raise DomainError(f"envelope value must be finite and >= 0, got {c}")
    if c == 0:
        return 0.0
    hi = 1.0
    while float(envelope(hi, dim)) < c:
        hi *= 2.0
    _, hi = bracket_root_increasing(lambda x: float(envelope(x, dim)) - c, 0.0, hi)
    return hi


def sphere_area(r, dim: Dimension | int):
    """Area ``omega_{m-1} sinh(r)^(m-1)`` of the centred sphere of radius r."""
    dim = as_dimension(dim)
    return dim.omega * np.sinh(np.asarray(r, dtype=float)) ** (dim.m - 1)


def area_radius(alpha: float, dim: Dimension | int) -> float:
    """Inverse of :func:`sphere_area`."""
    dim = as_dimension(dim)
    if alpha < 0:
        raise DomainError(f"area must be >= 0, got {alpha}")
    return math.asinh((alpha / dim.omega) ** (1.0 / (dim.m - 1)))


def _sinh_power_integral(r, n: int):
    """``int_0^r sinh(t)^n dt`` for integer n >= 0, vectorised."""
    r = np.asarray(r, dtype=float)
    small = np.abs(r) < 1e-2
    # series: sinh^n t = t^n (1 + n t^2/6 + (n/120 + n(n-1)/72) t^4 + ...)
    c4 = n / 120.0 + n * (n - 1) / 72.0
    series = (r ** (n + 1) / (n + 1) + n * r ** (n + 3) / (6.0 * (n + 3))
              + c4 * r ** (n + 5) / (n + 5))
    sh, ch = np.sinh(r), np.cosh(r)
    if n % 2 == 0:
        acc = r.copy()
        k = 2
    else:
        acc = 2.0 * np.sinh(0.5 * r) ** 2
        k = 3
    while k <= n:
        acc = sh ** (k - 1) * ch / k - (k - 1) / k * acc
        k += 2
    return np.where(small, series, acc)


def hyperbolic_ball_volume(r, dim: Dimension | int):
    """Volume of the geodesic ball of radius r in hyperbolic m-space (closed form)."""
    dim = as_dimension(dim)
    return dim.omega * _sinh_power_integral(r, dim.m - 1)


def annulus_volume(a: float, b: float, dim: Dimension | int) -> float:
    """Hyperbolic volume of ``{a < r < b}``; negative radii are clipped to 0."""
    a = max(0.0, float(a))
    b = max(0.0, float(b))
    if b <= a:
        return 0.0
    return float(hyperbolic_ball_volume(b, dim) - hyperbolic_ball_volume(a, dim))


# ---------------------------------------------------------------------------
# graph chart


def hawking_mass_graph(r, zprime, dim: Dimension | int):
    """Hawking mass of the sphere at r on the graph with slope `zprime`."""
    zp2 = np.asarray(zprime, dtype=float) ** 2
    with np.errstate(invalid="ignore"):
        frac = np.where(np.isinf(zp2), 1.0, zp2 / (1.0 + zp2))
    return 0.5 * envelope(r, dim) * frac


def zprime_from_hawking(r: float, mh: float, dim: Dimension | int) -> float:
    """Graph slope ``sqrt(2 mh / (envelope(r) - 2 mh))``.

    Raises
    ------
    HorizonError
        If ``mh >= envelope(r) / 2``.
    DomainError
        If ``mh < 0``.
    """
    if mh < 0:
        raise DomainError(f"Hawking mass must be >= 0, got {mh}")
    if mh == 0:
        return 0.0
    gap = float(envelope(r, dim)) - 2.0 * mh
    if gap <= 0:
        raise HorizonError(f"Hawking mass {mh} reaches the envelope at r = {r}")
    return math.sqrt(2.0 * mh / gap)


def scalar_curvature_graph(r, zprime, zsecond, dim: Dimension | int):
    """Scalar curvature of ``(1 + z'^2) dr^2 + sinh^2 r g_0``."""
    m = as_dimension(dim).m
    r = np.asarray(r, dtype=float)
    zp = np.asarray(zprime, dtype=float)
    zpp = np.asarray(zsecond, dtype=float)
    q = 1.0 + zp**2
    sh2 = np.sinh(r) ** 2
    inner = -m + (m - 2) * zp**2 / sh2 + zp * zpp * np.sinh(2.0 * r) / (q * sh2)
    return (m - 1) / q * inner


def mean_curvature_graph(r, zprime, dim: Dimension | int):
    """Mean curvature ``(m-1) coth r / sqrt(1 + z'^2)`` of the centred sphere."""
    m = as_dimension(dim).m
    r = np.asarray(r, dtype=float)
    return (m - 1) / np.tanh(r) / np.sqrt(1.0 + np.asarray(zprime, dtype=float) ** 2)


# ---------------------------------------------------------------------------
# warped-product chart


@dataclass(frozen=True)
class WarpSample:
    """Warp factor and its first two derivatives at geodesic distance s."""

    s: float
    f: float
    f1: float
    f2: float


class WarpGeometry(NamedTuple):
    area: float
    mean_curv: float
    scal: float
    mh: float


def warp_geometry(sample: WarpSample, dim: Dimension | int) -> WarpGeometry:
    """Area, mean curvature, scalar curvature and Hawking mass in the s-chart."""
    dim = as_dimension(dim)
    m = dim.m
    f, f1, f2 = sample.f, sample.f1, sample.f2
    area = dim.omega * f ** (m - 1)
    mh = 0.5 * f ** (m - 2) * (1.0 - f1**2 + f**2)
    if f > 0:
        mean_curv = (m - 1) * f1 / f
        scal = (m - 1) * ((m - 2) * (1.0 - f1**2) - 2.0 * f * f2) / f**2
    else:
        mean_curv = math.nan
        scal = math.nan
    return WarpGeometry(area, mean_curv, scal, mh)


# ---------------------------------------------------------------------------
# profiles


class MetricProfile(ABC):
    """A member of the rotationally symmetric class, stored through ``m_H(r)``.

    Subclasses supply :meth:`hawking_mass` and :meth:`hawking_mass_derivative`
    on ``[r_min, r_max]``; the graph slope, its derivative and the scalar
    curvature are derived here.  Instances are immutable.
    """

    kind: str = "abstract"
    dim: Dimension
    r_min: float
    r_max: float

    @abstractmethod
    def hawking_mass(self, r):
        """Hawking mass of the centred sphere at area radius r."""

    @abstractmethod
    def hawking_mass_derivative(self, r):
        """Derivative of :meth:`hawking_mass` in r."""

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Radii in ``(r_min, r_max)`` where the profile changes formula."""
        return ()

    @property
    def has_horizon(self) -> bool:
        """True when the inner boundary is a horizon (``r_min > 0``)."""
        return self.r_min > 0

    def params(self) -> dict:
        """Constructor parameters, as stored in a metric spec file."""
        return {}

    def mass_ratio(self, r):
        """``2 m_H / envelope``; below 1 away from a horizon."""
        r = np.asarray(r, dtype=float)
        env = envelope(r, self.dim)
        mh = self.hawking_mass(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(env > 0, 2.0 * mh / np.where(env > 0, env, 1.0), 0.0)
        return ratio

    def mass_ratio_derivative(self, r):
        r = np.asarray(r, dtype=float)
        env = envelope(r, self.dim)
        denv = envelope_derivative(r, self.dim)
        mh = self.hawking_mass(r)
        dmh = self.hawking_mass_derivative(r)
        safe = np.where(env > 0, env, 1.0)
        return np.where(env > 0, 2.0 * (dmh * safe - mh * denv) / safe**2, 0.0)

    def horizon_gap(self, t):
        """``envelope(r) - 2 m_H(r)`` at ``r = r_min + t``, accurate for small t."""
        a = self.r_min
        t = np.asarray(t, dtype=float)
        mh0 = float(self.hawking_mass(a))
        base = _snap_gap(float(envelope(a, self.dim)), 2.0 * mh0)
        return (envelope_increment(a, t, self.dim) + base
                - 2.0 * (self.hawking_mass(a + t) - mh0))

    def zprime_at_offset(self, t):
        """:meth:`zprime` at ``r_min + t`` using :meth:`horizon_gap`."""
        t = np.asarray(t, dtype=float)
        mh = self.hawking_mass(self.r_min + t)
        gap = self.horizon_gap(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(gap > 0, np.sqrt(2.0 * mh / np.where(gap > 0, gap, 1.0)), np.inf)

    def arclength_density_at_offset(self, t):
        """:meth:`arclength_density` at ``r_min + t`` using :meth:`horizon_gap`."""
        t = np.asarray(t, dtype=float)
        env = envelope(self.r_min + t, self.dim)
        gap = self.horizon_gap(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(gap > 0, np.sqrt(env / np.where(gap > 0, gap, 1.0)), np.inf)

    def _ratio_with_horizon(self, r):
        # r_min itself is only known to rounding; trust the snapped gap there
        r = np.asarray(r, dtype=float)
        rho = self.mass_ratio(r)
        if self.has_horizon and float(self.horizon_gap(0.0)) <= 0:
            rho = np.where(r <= self.r_min, 1.0, rho)
        return rho

    def zprime(self, r):
        """Graph slope ``F'(r)``; infinite on a horizon."""
        rho = self._ratio_with_horizon(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(rho >= 1.0, np.inf, np.sqrt(rho / (1.0 - rho)))

    def arclength_density(self, r):
        """``sqrt(1 + F'(r)^2) = 1 / sqrt(1 - ratio)``."""
        rho = self._ratio_with_horizon(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(rho >= 1.0, np.inf, 1.0 / np.sqrt(1.0 - rho))

    def zsecond(self, r):
        """Second derivative of the graph height."""
        rho = self.mass_ratio(r)
        drho = self.mass_ratio_derivative(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            u = rho / (1.0 - rho)
            du = drho / (1.0 - rho) ** 2
            out = du / (2.0 * np.sqrt(u))
            out = np.where(u == 0, np.where(du == 0, 0.0, np.inf), out)
            return np.where(rho >= 1.0, np.inf, out)

    def scalar_curvature(self, r):
        """Scalar curvature reconstructed from the graph chart.

        Written through the ratio ``2 m_H / envelope`` so that ``z' z''``
        never appears as ``0 * inf``.
        """
        m = self.dim.m
        r = np.asarray(r, dtype=float)
        rho = self.mass_ratio(r)
        drho = self.mass_ratio_derivative(r)
        sh2 = np.sinh(r) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            return (m - 1) * (-m * (1.0 - rho) + (m - 2) * rho / sh2
                              + 0.5 * drho * np.sinh(2.0 * r) / sh2)

    def grid(self, n: int = 2001) -> np.ndarray:
        """Sample radii used by validation: uniform plus breakpoints."""
        pts = np.linspace(self.r_min, self.r_max, n)
        return np.unique(np.concatenate([pts, np.asarray(self.breakpoints, float)]))

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{type(self).__name__}(m={self.dim.m}, {args})"


@dataclass(frozen=True, repr=False)
class HyperbolicProfile(MetricProfile):
    dim: Dimension
    r_max: float = DEFAULT_R_MAX
    r_min: float = field(default=0.0, init=False)
    kind = "hyperbolic"

    def __post_init__(self):
        object.__setattr__(self, "dim", as_dimension(self.dim))
        if not self.r_max > 0:
            raise DomainError(f"r_max must be positive, got {self.r_max}")

    def hawking_mass(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def hawking_mass_derivative(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def params(self):
        return {"r_max": self.r_max}


@dataclass(frozen=True, repr=False)
class AdSSchwarzschildProfile(MetricProfile):
    """Constant Hawking mass; the inner boundary is the horizon."""

    dim: Dimension
    mass: float
    r_max: float = DEFAULT_R_MAX
    r_min: float = field(default=0.0, init=False)
    kind = "ads_schwarzschild"

    def __post_init__(self):
        object.__setattr__(self, "dim", as_dimension(self.dim))
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass}")
        r_min = invert_envelope(2.0 * self.mass, self.dim)
        if not self.r_max > r_min:
            raise DomainError(
                f"r_max = {self.r_max} does not exceed the horizon radius {r_min}"
            )
        object.__setattr__(self, "r_min", r_min)

    def hawking_mass(self, r):
        return np.full_like(np.asarray(r, dtype=float), self.mass)

    def hawking_mass_derivative(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def mass_ratio(self, r):
        env = envelope(r, self.dim)
        with np.errstate(divide="ignore"):
            return 2.0 * self.mass / env

    def horizon_gap(self, t):
        base = _snap_gap(float(envelope(self.r_min, self.dim)), 2.0 * self.mass)
        return envelope_increment(self.r_min, t, self.dim) + base

    def params(self):
        return {"mass": self.mass, "r_max": self.r_max}


class SampledProfile(MetricProfile):
    """Hawking mass given on a grid, joined by monotone piecewise cubics."""

    kind = "sampled"

    def __init__(self, dim: Dimension | int, radii: Sequence[float],
                 masses: Sequence[float]):
        radii = np.array(radii, dtype=float)
        masses = np.array(masses, dtype=float)
        if radii.ndim != 1 or radii.shape != masses.shape or radii.size == 0:
            raise DomainError("radii and masses must be equal-length 1-D sequences")
        if np.any(np.diff(radii) <= 0):
            raise DomainError("radii must be strictly increasing")
        if radii[0] < 0:
            raise DomainError("radii must be >= 0")
        self.dim = as_dimension(dim)
        self.radii = radii
        self.masses = masses
        self.radii.setflags(write=False)
        self.masses.setflags(write=False)
        self.r_min = float(radii[0])
        self.r_max = float(radii[-1])
        if radii.size > 1:
            self._interp = PchipInterpolator(radii, masses)
            self._deriv = self._interp.derivative()
        else:
            self._interp = None
            self._deriv = None

    def __setattr__(self, name, value):
        if hasattr(self, "_deriv"):
            raise AttributeError(f"{type(self).__name__} is immutable")
        super().__setattr__(name, value)

    def hawking_mass(self, r):
        r = np.asarray(r, dtype=float)
        if self._interp is None:
            return np.full_like(r, self.masses[0])
        return self._interp(r)

    def hawking_mass_derivative(self, r):
        r = np.asarray(r, dtype=float)
        if self._deriv is None:
            return np.zeros_like(r)
        return self._deriv(r)

    def grid(self, n: int = 0) -> np.ndarray:
        """Nodes plus interval midpoints."""
        if self.radii.size == 1:
            return self.radii.copy()
        mids = 0.5 * (self.radii[1:] + self.radii[:-1])
        return np.sort(np.concatenate([self.radii, mids]))

    def params(self):
        return {"samples": [[float(r), float(v)] for r, v in zip(self.radii, self.masses)]}

    def __eq__(self, other):
        return (isinstance(other, SampledProfile) and self.dim == other.dim
                and np.array_equal(self.radii, other.radii)
                and np.array_equal(self.masses, other.masses))

    def __hash__(self):
        return hash((self.dim, self.radii.tobytes(), self.masses.tobytes()))


def convert_warp_to_profile(samples: Sequence[WarpSample],
                            dim: Dimension | int) -> SampledProfile:
    """Sampled profile from warped-product data via ``r = arcsinh f``.

    Raises
    ------
    MinimalSurfaceError
        If ``f' <= 0`` at any sample after the first.
    """
    dim = as_dimension(dim)
    samples = list(samples)
    if not samples:
        raise DomainError("at least one warp sample is required")
    s = np.array([p.s for p in samples])
    if np.any(np.diff(s) <= 0):
        raise DomainError("samples must be strictly increasing in s")
    for i, p in enumerate(samples):
        if p.f < 0 or (p.f == 0 and i > 0):
            raise DomainError(f"warp factor must be positive, got f = {p.f} at s = {p.s}")
        if i > 0 and p.f1 <= 0:
            raise MinimalSurfaceError(
                f"f' = {p.f1} <= 0 at s = {p.s}: interior minimal hypersurface"
            )
    radii = np.arcsinh([p.f for p in samples])
    masses = [warp_geometry(p, dim).mh for p in samples]
    return SampledProfile(dim, radii, masses)


class MassEstimate(NamedTuple):
    """Total mass read off at ``r_max``.

    ``truncated`` is set when ``m_H`` still moved by more than the threshold
    between ``0.9 r_max`` and ``r_max``; by monotonicity ``value`` is then
    only a lower bound for the mass.
    """

    value: float
    truncated: bool


def mass_of(profile: MetricProfile,
            threshold: float = TRUNCATION_THRESHOLD) -> MassEstimate:
    value = float(profile.hawking_mass(profile.r_max))
    ref_r = max(profile.r_min, 0.9 * profile.r_max)
    ref = float(profile.hawking_mass(ref_r))
    return MassEstimate(value, value - ref > threshold)


def disk_radius(profile: MetricProfile, tol: float = 0.0) -> float:
    """``sup{r : m_H(r) = 0}`` on the validation grid.

    Returns ``inf`` when the Hawking mass vanishes on the whole grid and
    ``r_min`` when it is positive everywhere.
    """
    r = profile.grid()
    zero = np.asarray(profile.hawking_mass(r)) <= tol
    if zero.all():
        return math.inf
    if not zero[0]:
        return profile.r_min
    return float(r[np.argmin(zero) - 1])
