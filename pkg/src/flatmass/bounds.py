"""Explicit upper bound on the intrinsic flat distance between the distance-D
tube around a centred sphere in a profile and the same tube in hyperbolic
space.

The bound is a sum of region volumes.  Each region has an analytic bound,
which depends only on ``(eps, D, alpha0, m, delta)`` and the window radii,
and a numeric volume computed from the graph embedding.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import NamedTuple, Sequence

from .embedding import GraphEmbedding, TubularWindow, build_embedding, tubular_window
from .errors import CapViolationError, ClassError, DomainError, FlatmassError
from .geometry import (
    Dimension,
    MetricProfile,
    annulus_volume,
    area_radius,
    as_dimension,
    envelope,
    hyperbolic_ball_volume,
    invert_envelope,
    mass_of,
    sphere_area,
)
from .numerics import Tolerance
from .validators import validate

__all__ = [
    "REGIONS",
    "CutoffData",
    "cutoff",
    "q_factor",
    "SpecialRadius",
    "special_radii",
    "Strip",
    "strip_geometry",
    "Constraint",
    "DeltaBudget",
    "budget_at",
    "choose_delta",
    "analytic_region_bounds",
    "numeric_region_volumes",
    "RegionVolume",
    "BoundReport",
    "flat_distance_bound",
    "SweepRow",
    "bound_sweep",
]

REGIONS = ("A0", "A1", "A2", "A31", "A32", "A33", "B1", "B2")

# strict-slack factor applied to the largest admissible delta
DELTA_SHRINK = 0.99


def _positive(**kw):
    for name, value in kw.items():
        if not (value > 0 and math.isfinite(value)):
            raise DomainError(f"{name} must be positive and finite, got {value}")


def _w(r, dim) -> float:
    # omega * sinh^(m-1)(r)
    return float(sphere_area(r, dim))


# ---------------------------------------------------------------------------
# building blocks


@dataclass(frozen=True)
class CutoffData:
    alpha_eps: float
    r_eps_prime: float
    r_eps: float

    @property
    def deep(self) -> bool:
        """True when the cut-off sphere lies outside the inner tube radius."""
        return self.r_eps == self.r_eps_prime


def cutoff(eps: float, D: float, alpha0: float, dim: Dimension | int,
           rDminus: float = 0.0) -> CutoffData:
    """Cut-off sphere area ``min(eps/16D, 1/4, area(eps/4), alpha0)`` and radii."""
    _positive(eps=eps, D=D, alpha0=alpha0)
    dim = as_dimension(dim)
    alpha = min(eps / (16.0 * D), 0.25, _w(eps / 4.0, dim), alpha0)
    r_prime = area_radius(alpha, dim)
    return CutoffData(alpha, r_prime, max(r_prime, float(rDminus)))


def q_factor(delta: float, r: float, dim: Dimension | int) -> float:
    """``sqrt(2 delta / (envelope(r) - 2 delta))``, the slope cap at radius r.

    Raises
    ------
    CapViolationError
        If ``2 delta >= envelope(r)``.
    """
    if delta < 0:
        raise DomainError(f"delta must be >= 0, got {delta}")
    env = float(envelope(r, dim))
    if not 2.0 * delta < env:
        raise CapViolationError(
            f"2*delta = {2.0 * delta} is not below envelope({r}) = {env}")
    return math.sqrt(2.0 * delta / (env - 2.0 * delta))


class SpecialRadius(NamedTuple):
    radius: float
    diameter_bound: float


def special_radii(value: float, dim: Dimension | int) -> SpecialRadius:
    """Radius where ``envelope = 2 * value`` and the matching ``pi sinh`` bound.

    With a mass this is the outermost possible horizon radius and a bound on
    the boundary diameter; with a delta it is the radius below which the
    delta cap fails.
    """
    if value < 0:
        raise DomainError(f"value must be >= 0, got {value}")
    r = invert_envelope(2.0 * value, dim)
    return SpecialRadius(r, math.pi * math.sinh(r))


class Strip(NamedTuple):
    C: float
    S: float


def strip_geometry(delta: float, r_eps: float, D: float, r0: float,
                   dim: Dimension | int) -> Strip:
    """Embedding constant C and strip width S."""
    q = q_factor(delta, r_eps, dim)
    c = (4.0 * D + 2.0 * math.pi * math.sinh(r0)) * q
    s = math.sqrt(c * (2.0 * D + math.pi * math.sinh(r0) + c))
    return Strip(c, s)


# ---------------------------------------------------------------------------
# delta budget


class Constraint(NamedTuple):
    name: str
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def satisfied(self) -> bool:
        return self.lhs < self.rhs


@dataclass(frozen=True)
class DeltaBudget:
    delta: float
    constraints: tuple[Constraint, ...]

    @property
    def feasible(self) -> bool:
        return all(c.satisfied for c in self.constraints)

    def __getitem__(self, name: str) -> Constraint:
        for c in self.constraints:
            if c.name == name:
                return c
        raise KeyError(name)


def budget_at(delta: float, eps: float, D: float, alpha0: float,
              dim: Dimension | int) -> DeltaBudget:
    """Evaluate every delta constraint at the profile-independent ``r_eps'``."""
    _positive(eps=eps, D=D, alpha0=alpha0)
    dim = as_dimension(dim)
    r_eps = cutoff(eps, D, alpha0, dim).r_eps_prime
    r0 = area_radius(alpha0, dim)
    cap = 0.5 * float(envelope(r_eps, dim))
    outer = _w(r0 + D, dim)
    try:
        q = q_factor(delta, r_eps, dim)
        s = strip_geometry(delta, r_eps, D, r0, dim).S
    except CapViolationError:
        q = s = math.inf
    return DeltaBudget(float(delta), (
        Constraint("cap", float(delta), cap),
        Constraint("A0A2", D * q * outer, eps / 8.0),
        Constraint("B1", 4.0 * D * D * outer * q, eps / 8.0),
        Constraint("B2", s * 2.0 * D * outer * (1.0 + q), eps / 8.0),
        Constraint("A31A32", s * outer, eps / 12.0),
        Constraint("A33", 2.0 * D * outer * q, eps / 12.0),
    ))


@lru_cache(maxsize=256)
def _choose_delta(eps: float, D: float, alpha0: float, m: int) -> DeltaBudget:
    dim = Dimension(m)

    def ok(delta):
        return budget_at(delta, eps, D, alpha0, dim).feasible

    hi = budget_at(0.0, eps, D, alpha0, dim)["cap"].rhs
    lo = hi
    # halve until feasible; every constraint tends to 0 with delta
    while not ok(lo):
        hi = lo
        lo *= 0.5
        if lo == 0.0:
            raise FlatmassError("no positive delta satisfies the budget")
    # geometric bisection between a feasible lo and an infeasible hi
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if not lo < mid < hi or hi / lo < 1.0 + 1e-13:
            break
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return budget_at(DELTA_SHRINK * lo, eps, D, alpha0, dim)


def choose_delta(eps: float, D: float, alpha0: float, dim: Dimension | int) -> DeltaBudget:
    """Largest delta meeting every budget constraint, shrunk by 1%.

    All left-hand sides increase with delta, so feasibility is monotone and
    bisection applies.  The result is cached.
    """
    _positive(eps=eps, D=D, alpha0=alpha0)
    return _choose_delta(float(eps), float(D), float(alpha0), as_dimension(dim).m)


# ---------------------------------------------------------------------------
# region volumes


def _q_or_inf(delta, r, dim):
    try:
        return q_factor(delta, r, dim)
    except CapViolationError:
        return math.inf


def _strip_or_inf(delta, r_eps, D, r0, dim):
    try:
        return strip_geometry(delta, r_eps, D, r0, dim)
    except CapViolationError:
        return Strip(math.inf, math.inf)


def analytic_region_bounds(eps: float, D: float, alpha0: float, dim: Dimension | int,
                           delta: float, window: TubularWindow,
                           cut: CutoffData) -> dict[str, float]:
    """Closed-form volume bound for each region.

    Terms that need the slope cap are ``inf`` when ``2 delta`` is not below
    the envelope at the relevant radius.
    """
    dim = as_dimension(dim)
    r0 = window.r0
    outer = _w(r0 + D, dim)
    q = _q_or_inf(delta, cut.r_eps, dim)
    s = _strip_or_inf(delta, cut.r_eps, D, r0, dim).S
    if cut.deep:
        a1 = a2 = eps / 8.0
    else:
        a1 = 0.0
        a2 = D * q * _w(r0, dim)
    return {
        "A0": D * _q_or_inf(delta, r0, dim) * outer,
        "A1": a1,
        "A2": a2,
        "A31": s * outer,
        "A32": s * _w(r0, dim),
        "A33": 2.0 * D * outer * q,
        "B1": 4.0 * D * D * outer * q,
        "B2": s * 2.0 * D * outer * (1.0 + q),
    }


def numeric_region_volumes(emb: GraphEmbedding, window: TubularWindow,
                           cut: CutoffData, strip: Strip) -> dict[str, float]:
    """Region volumes by quadrature over the graph embedding.

    Heights are measured from the sphere at ``r_eps``, so the gauge of
    `emb` does not matter.
    """
    p = emb.profile
    dim = p.dim
    r0, D = window.r0, window.D
    r_eps, r_plus = cut.r_eps, window.rDplus
    w_plus = float(hyperbolic_ball_volume(r_plus, dim))

    def area(r):
        return sphere_area(r, dim)

    def shell_below(t):
        return w_plus - hyperbolic_ball_volume(t, dim)

    inner_h = max(0.0, r0 - D)
    if cut.deep:
        a1 = emb.quad(area, window.rDminus, r_eps)
        a2 = annulus_volume(inner_h, r_eps, dim)
    else:
        a1 = 0.0
        a2 = annulus_volume(inner_h, window.rDminus, dim)
    rise = emb.height(r_plus) - emb.height(r_eps)
    band = emb.quad(area, r_eps, r_plus)
    s = strip.S
    return {
        "A0": annulus_volume(r_plus, r0 + D, dim),
        "A1": a1,
        "A2": a2,
        "A31": s * _w(r_plus, dim),
        "A32": s * _w(r_eps, dim),
        "A33": _w(r_plus, dim) * rise,
        # volume under the graph between r_eps and rDplus, by Fubini
        "B1": emb.quad(shell_below, r_eps, r_plus, density="slope"),
        "B2": s * band if s else 0.0,
    }


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class RegionVolume:
    name: str
    analytic_bound: float
    numeric_volume: float | None

    @property
    def dominated(self) -> bool:
        """Numeric volume does not exceed the analytic bound (1e-8 slack)."""
        if self.numeric_volume is None:
            return True
        return self.numeric_volume <= self.analytic_bound + 1e-8


@dataclass(frozen=True)
class BoundReport:
    """Everything computed by :func:`flat_distance_bound`.

    ``total_flat_bound`` sums the numeric region volumes; ``analytic_total``
    sums the closed-form bounds.  Both bound the flat distance.  ``delta_used`` is
    the slope-cap parameter the strip and the analytic terms were evaluated
    at (the profile mass); ``delta_star`` is the profile-independent budget
    value and ``certified`` records ``mass < delta_star``.
    """

    dimension: int
    eps: float
    D: float
    alpha0: float
    mass: float
    delta_used: float
    delta_star: float
    certified: bool
    r0: float
    rDminus: float
    rDplus: float
    alpha_eps: float
    r_eps_prime: float
    r_eps: float
    deep: bool
    Q: float
    C: float
    S: float
    regions: tuple[RegionVolume, ...]
    total_flat_bound: float
    analytic_total: float
    vol_tube_H: float
    vol_tube_M: float
    volume_upper: float
    volume_lower: float
    volume_difference_bound: float
    notes: tuple[str, ...] = field(default_factory=tuple)

    def region(self, name: str) -> RegionVolume:
        for reg in self.regions:
            if reg.name == name:
                return reg
        raise KeyError(name)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["regions"] = {r.name: {"analytic_bound": r.analytic_bound,
                                   "numeric_volume": r.numeric_volume}
                          for r in self.regions}
        out["notes"] = list(self.notes)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "BoundReport":
        data = dict(data)
        data["regions"] = tuple(
            RegionVolume(name, float(v["analytic_bound"]),
                         None if v["numeric_volume"] is None else float(v["numeric_volume"]))
            for name, v in data["regions"].items())
        data["notes"] = tuple(data.get("notes", ()))
        return cls(**data)


def flat_distance_bound(profile: MetricProfile, eps: float, D: float, alpha0: float,
                        tol: Tolerance | None = None,
                        emb: GraphEmbedding | None = None) -> BoundReport:
    """Assemble the flat-distance and volume bounds for one profile.

    Raises
    ------
    ClassError
        If the profile fails :func:`validate`.
    """
    _positive(eps=eps, D=D, alpha0=alpha0)
    check = validate(profile)
    if not check.is_member:
        raise ClassError("profile is not in the class: " + "; ".join(check.notes))
    dim = profile.dim
    notes = ["volume_lower is derived from the same region accounting as volume_upper"]
    if emb is None:
        emb = build_embedding(profile, tol=tol)
    window = tubular_window(emb, alpha0, D)
    cut = cutoff(eps, D, alpha0, dim, window.rDminus)
    delta_star = choose_delta(eps, D, alpha0, dim).delta
    est = mass_of(profile)
    mass = est.value
    if est.truncated:
        notes.append("mass read at r_max is only a lower bound")
    certified = mass < delta_star and not est.truncated
    if not certified:
        notes.append(f"mass {mass:.6g} is not below delta* = {delta_star:.6g}; "
                     "report is not certified")

    q = _q_or_inf(mass, cut.r_eps, dim)
    strip = _strip_or_inf(mass, cut.r_eps, D, window.r0, dim)
    if math.isinf(q):
        notes.append("2*mass reaches the envelope at r_eps; slope-cap terms are infinite")
    analytic = analytic_region_bounds(eps, D, alpha0, dim, mass, window, cut)
    numeric = numeric_region_volumes(emb, window, cut, strip)
    regions = tuple(RegionVolume(n, analytic[n], numeric[n]) for n in REGIONS)

    vol_h = annulus_volume(window.r0 - D, window.r0 + D, dim)
    vol_m = emb.quad(lambda r: sphere_area(r, dim), window.rDminus, window.rDplus)
    core = vol_h - numeric["A0"] - numeric["A2"]
    lower = core
    upper = numeric["A1"] + math.sqrt(1.0 + q * q) * core
    return BoundReport(
        dimension=dim.m, eps=float(eps), D=float(D), alpha0=float(alpha0),
        mass=mass, delta_used=mass, delta_star=delta_star, certified=certified,
        r0=window.r0, rDminus=window.rDminus, rDplus=window.rDplus,
        alpha_eps=cut.alpha_eps, r_eps_prime=cut.r_eps_prime, r_eps=cut.r_eps,
        deep=cut.deep, Q=q, C=strip.C, S=strip.S, regions=regions,
        total_flat_bound=math.fsum(numeric.values()),
        analytic_total=math.fsum(analytic.values()),
        vol_tube_H=vol_h, vol_tube_M=vol_m,
        volume_upper=upper, volume_lower=lower,
        volume_difference_bound=max(upper - vol_h, vol_h - lower),
        notes=tuple(notes),
    )


class SweepRow(NamedTuple):
    mass: float
    report: BoundReport | None
    error: str | None


def _sweep_one(args):
    mass, profile, eps, D, alpha0, tol = args
    try:
        return SweepRow(mass, flat_distance_bound(profile, eps, D, alpha0, tol), None)
    except FlatmassError as exc:
        return SweepRow(mass, None, f"{type(exc).__name__}: {exc}")


def bound_sweep(items: Sequence, eps: float, D: float, alpha0: float,
                jobs: int = 1, tol: Tolerance | None = None) -> list[SweepRow]:
    """Bound reports for ``(mass, profile)`` pairs, in input order.

    A pair whose profile is ``None`` is passed through with `error` set to
    the accompanying message, so the result lines up with a
    :func:`flatmass.families.sweep`.  With ``jobs > 1`` rows are computed in
    worker processes.
    """
    rows: list[SweepRow | None] = [None] * len(items)
    work = []
    for i, item in enumerate(items):
        mass, profile = item[0], item[1]
        if profile is None:
            err = item[2] if len(item) > 2 else None
            rows[i] = SweepRow(mass, None, f"{type(err).__name__}: {err}" if err else "no profile")
        else:
            work.append((i, (mass, profile, eps, D, alpha0, tol)))
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_one, [w for _, w in work]))
    else:
        results = [_sweep_one(w) for _, w in work]
    for (i, _), row in zip(work, results):
        rows[i] = row
    return rows
