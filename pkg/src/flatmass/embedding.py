"""Graph embedding ``z = F(r)`` into hyperbolic space times a line.

Heights and arclengths are tabulated once on a node grid (cumulative from
``r_min``); a query integrates only the stretch from the nearest node.  On a
horizon the first stretch uses the square-root substitution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, HorizonError, TruncationError
from .geometry import MetricProfile, area_radius, invert_envelope, mass_of
from .numerics import (
    Tolerance,
    bracket_root_increasing,
    default_tolerance,
    integrate,
    integrate_singular_left,
)

__all__ = [
    "GraphEmbedding",
    "build_embedding",
    "arclength",
    "TubularWindow",
    "tubular_window",
    "SlopeBounds",
    "slope_bounds",
]

_UNIFORM_NODES = 241
_GEOMETRIC_NODES = 40
_PER_DECADE = 4
# bracket width for window radii
_WINDOW_RESOLUTION = 1e-13


class GraphEmbedding:
    """Height function of the isometric graph embedding of a profile.

    Parameters
    ----------
    profile : MetricProfile
    z_min : float
        Height of the innermost sphere (gauge choice).
    tol : Tolerance, optional
        Quadrature tolerance for the whole of ``[r_min, r_max]``.
    """

    def __init__(self, profile: MetricProfile, z_min: float = 0.0,
                 tol: Tolerance | None = None, *, _tables=None):
        self.profile = profile
        self.z_min = float(z_min)
        self.tol = tol or default_tolerance()
        if _tables is None:
            _tables = self._tabulate()
        self._nodes, self._heights, self._lengths = _tables

    def _tabulate(self):
        p = self.profile
        lo, hi = p.r_min, p.r_max
        span = hi - lo
        parts = [np.linspace(lo, hi, _UNIFORM_NODES),
                 np.asarray([b for b in p.breakpoints if lo < b < hi], float)]
        if span > 0:
            parts.append(lo + span * np.logspace(-8, -1, _GEOMETRIC_NODES))
        for b in p.breakpoints:
            if lo < b < hi:
                # structure scales with b itself, which may be tiny
                decades = math.log10(hi / b)
                parts.append(np.geomspace(b, hi, max(2, int(_PER_DECADE * decades) + 1)))
        nodes = np.unique(np.concatenate(parts))
        heights = np.zeros_like(nodes)
        lengths = np.zeros_like(nodes)
        for k in range(1, nodes.size):
            a, b = nodes[k - 1], nodes[k]
            share = self.tol.scaled((b - a) / span)
            heights[k] = heights[k - 1] + self._piece("slope", None, a, b, share)
            lengths[k] = lengths[k - 1] + self._piece("arclength", None, a, b, share)
        return nodes, heights, lengths

    def _piece(self, density, weight, a, b, tol):
        p = self.profile
        if not p.has_horizon:
            dens = p.zprime if density == "slope" else p.arclength_density
            if weight is None:
                return integrate(dens, a, b, tol)
            return integrate(lambda r: weight(r) * dens(r), a, b, tol)
        # Work in t = r - r_min so the gap to the horizon keeps full precision.
        r_min = p.r_min
        dens = p.zprime_at_offset if density == "slope" else p.arclength_density_at_offset
        if weight is None:
            f = dens
        else:
            def f(t):
                return weight(r_min + t) * dens(t)
        ta, tb = a - r_min, b - r_min
        if ta == 0.0:
            return integrate_singular_left(f, 0.0, tb, True, tol)
        return integrate(f, ta, tb, tol)

    def _check(self, r):
        p = self.profile
        slack = 1e-12 * max(1.0, p.r_max)
        if not (p.r_min - slack <= r <= p.r_max + slack):
            raise DomainError(f"radius {r} outside [{p.r_min}, {p.r_max}]")
        return min(max(r, p.r_min), p.r_max)

    def _cumulative(self, table, density, r):
        r = self._check(float(r))
        k = int(np.searchsorted(self._nodes, r, side="right")) - 1
        k = min(max(k, 0), self._nodes.size - 1)
        a = self._nodes[k]
        if r == a:
            return float(table[k])
        share = self.tol.scaled((r - a) / max(self.profile.r_max - self.profile.r_min, 1e-300))
        return float(table[k]) + self._piece(density, None, a, r, share)

    def height(self, r: float) -> float:
        """``F(r)``."""
        return self.z_min + self._cumulative(self._heights, "slope", r)

    def slope(self, r):
        """``F'(r)``; infinite on a horizon."""
        return self.profile.zprime(r)

    def length_from_min(self, r: float) -> float:
        """Distance in M from the innermost sphere to the sphere at r."""
        return self._cumulative(self._lengths, "arclength", r)

    def shifted(self, z_min: float) -> "GraphEmbedding":
        """Same embedding in a different gauge (tables are shared)."""
        return GraphEmbedding(self.profile, z_min, self.tol,
                              _tables=(self._nodes, self._heights, self._lengths))

    def gauged_at(self, r_ref: float) -> "GraphEmbedding":
        """Re-gauge so that ``F(r_ref) = 0``."""
        return self.shifted(self.z_min - self.height(r_ref))

    def quad(self, weight: Callable | None, ra: float, rb: float,
             density: str = "arclength") -> float:
        """Integrate ``weight(r) * density(r)`` over ``[ra, rb]``.

        `density` is ``"arclength"`` (``sqrt(1 + F'^2)``) or ``"slope"``
        (``F'``); ``weight=None`` means 1.  The range is split at profile
        breakpoints and the square-root rule handles a horizon endpoint.
        """
        if density not in ("arclength", "slope"):
            raise DomainError(f"unknown density {density!r}")
        ra = self._check(float(ra))
        rb = self._check(float(rb))
        if rb <= ra:
            return 0.0
        cuts = [ra] + [b for b in self.profile.breakpoints if ra < b < rb] + [rb]
        total = 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            share = self.tol.scaled((b - a) / (rb - ra))
            total += self._piece(density, weight, a, b, share)
        return total

    def __repr__(self):
        return f"GraphEmbedding({self.profile!r}, z_min={self.z_min!r})"


def build_embedding(profile: MetricProfile, z_min: float = 0.0,
                    tol: Tolerance | None = None) -> GraphEmbedding:
    """Embed `profile` as a graph with ``F(r_min) = z_min``.

    Raises
    ------
    HorizonError
        If ``2 m_H`` reaches the envelope anywhere past ``r_min``.
    """
    r = profile.grid()
    interior = r[r > profile.r_min]
    ratio = np.asarray(profile.mass_ratio(interior))
    if np.any(ratio >= 1.0):
        bad = float(interior[np.argmax(ratio >= 1.0)])
        raise HorizonError(f"horizon in the interior of the profile at r = {bad}")
    return GraphEmbedding(profile, z_min, tol)


def arclength(emb: GraphEmbedding, ra: float, rb: float) -> float:
    """Length in M of a radial segment between area radii `ra` <= `rb`."""
    if ra > rb:
        raise DomainError(f"arclength limits out of order: {ra} > {rb}")
    if ra == rb:
        return 0.0
    nodes = emb._nodes
    ka = int(np.searchsorted(nodes, ra, side="right"))
    kb = int(np.searchsorted(nodes, rb, side="right"))
    if ka == kb:
        emb._check(ra)
        emb._check(rb)
        # same node interval: integrate directly
        return emb.quad(None, ra, rb)
    return emb.length_from_min(rb) - emb.length_from_min(ra)


@dataclass(frozen=True)
class TubularWindow:
    """Radii spanned by the distance-D tube around the sphere of area alpha0."""

    alpha0: float
    r0: float
    D: float
    rDminus: float
    rDplus: float
    clipped: bool = False
    """True when the tube reaches ``r_min`` before distance D."""


def tubular_window(emb: GraphEmbedding, alpha0: float, D: float) -> TubularWindow:
    """Area radii of the tube of radius D around the sphere of area `alpha0`.

    ``rDplus`` solves ``arclength(r0, rDplus) = D``.  ``rDminus`` solves
    ``arclength(rDminus, r0) = D`` when that is possible; otherwise the tube
    reaches the inner boundary or centre and ``rDminus = r_min``.

    Raises
    ------
    TruncationError
        If the profile ends before the tube does.
    """
    p = emb.profile
    if not D > 0:
        raise DomainError(f"tube radius must be positive, got {D}")
    r0 = area_radius(alpha0, p.dim)
    if not p.r_min <= r0 <= p.r_max:
        raise DomainError(
            f"centre sphere radius {r0} outside profile range [{p.r_min}, {p.r_max}]"
        )
    base = emb.length_from_min(r0)
    if emb.length_from_min(p.r_max) - base < D:
        raise TruncationError(
            f"r_max = {p.r_max} is within distance {D} of the centre sphere"
        )
    _, r_plus = bracket_root_increasing(
        lambda x: emb.length_from_min(x) - base - D, r0, p.r_max, _WINDOW_RESOLUTION)
    clipped = base <= D
    if clipped:
        r_minus = p.r_min
    else:
        r_minus, _ = bracket_root_increasing(
            lambda x: D - (base - emb.length_from_min(x)), p.r_min, r0, _WINDOW_RESOLUTION)
    return TubularWindow(float(alpha0), r0, float(D), r_minus, r_plus, clipped)


@dataclass(frozen=True)
class SlopeBounds:
    """Two-sided control of ``F'`` from monotonicity of the Hawking mass.

    ``lower(r) <= F'(r)`` for ``r > r1`` and ``F'(r) <= upper(r)`` for
    ``r >= max(r1, r_inf)``.
    """

    r1: float
    m1: float
    mass: float
    r_inf: float
    lower: Callable
    upper: Callable

    @property
    def upper_from(self) -> float:
        return max(self.r1, self.r_inf)


def _slope_for_mass(level: float, dim):
    from .geometry import envelope

    def bound(r):
        r = np.asarray(r, dtype=float)
        if level == 0:
            return np.zeros_like(r)
        gap = envelope(r, dim) - 2.0 * level
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(gap > 0, np.sqrt(2.0 * level / np.where(gap > 0, gap, 1.0)),
                            np.inf)
    return bound


def slope_bounds(emb: GraphEmbedding, r1: float) -> SlopeBounds:
    p = emb.profile
    if r1 < p.r_min:
        raise DomainError(f"r1 = {r1} below r_min = {p.r_min}")
    m1 = float(p.hawking_mass(r1))
    mass = mass_of(p).value
    r_inf = invert_envelope(2.0 * mass, p.dim)
    return SlopeBounds(float(r1), m1, mass, r_inf,
                       _slope_for_mass(m1, p.dim), _slope_for_mass(mass, p.dim))
