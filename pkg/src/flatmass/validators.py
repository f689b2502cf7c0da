"""Class-membership checks and the rigidity gap.

A profile belongs to the class when its Hawking mass is nondecreasing, stays
strictly below half the envelope away from ``r_min``, and starts either at 0
(no boundary) or on the envelope (minimal boundary).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .geometry import MetricProfile, envelope, mass_of

__all__ = [
    "BoundaryCondition",
    "ValidationReport",
    "validate",
    "RigidityGap",
    "rigidity_gap",
    "DEFAULT_VALIDATION_TOL",
]

DEFAULT_VALIDATION_TOL = 1e-9


class BoundaryCondition(str, enum.Enum):
    NO_BOUNDARY = "NoBoundary"
    MINIMAL_BOUNDARY = "MinimalBoundary"
    VIOLATED = "Violated"


@dataclass(frozen=True)
class ValidationReport:
    is_member: bool
    worst_monotonicity_defect: float
    boundary_condition: BoundaryCondition
    min_scalar_slack: float
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "is_member": self.is_member,
            "worst_monotonicity_defect": self.worst_monotonicity_defect,
            "boundary_condition": self.boundary_condition.value,
            "min_scalar_slack": self.min_scalar_slack,
            "notes": list(self.notes),
        }


def validate(profile: MetricProfile, tol: float = DEFAULT_VALIDATION_TOL) -> ValidationReport:
    """Check class membership on the profile's validation grid.

    ``worst_monotonicity_defect`` is the most negative step of ``m_H``
    between neighbouring grid radii (0 when there is none).  The scalar
    slack ``R + m(m-1)`` is the minimum over interior grid points where it
    is defined.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    notes: list[str] = []
    r = profile.grid()
    mh = np.asarray(profile.hawking_mass(r), dtype=float)
    steps = np.diff(mh)
    defect = float(min(0.0, steps.min())) if steps.size else 0.0
    ok = defect >= -tol
    if not ok:
        where = float(r[int(np.argmin(steps))])
        notes.append(f"Hawking mass decreases by {-defect:.3e} after r = {where:.6g}")

    if mh.min() < -tol:
        ok = False
        notes.append(f"negative Hawking mass {mh.min():.3e}")

    interior = r > profile.r_min
    ratio = np.asarray(profile.mass_ratio(r[interior]), dtype=float)
    if ratio.size and ratio.max() >= 1.0:
        ok = False
        bad = float(r[interior][int(np.argmax(ratio >= 1.0))])
        notes.append(f"2 m_H reaches the envelope inside the profile at r = {bad:.6g}")

    env0 = float(envelope(profile.r_min, profile.dim))
    mh0 = float(mh[0])
    if profile.r_min == 0.0:
        boundary = (BoundaryCondition.NO_BOUNDARY if abs(mh0) <= tol
                    else BoundaryCondition.VIOLATED)
    elif abs(2.0 * mh0 - env0) <= tol * max(1.0, env0):
        boundary = BoundaryCondition.MINIMAL_BOUNDARY
    else:
        boundary = BoundaryCondition.VIOLATED
    if boundary is BoundaryCondition.VIOLATED:
        ok = False
        notes.append(f"inner boundary condition fails: m_H(r_min) = {mh0:.6g}, "
                     f"envelope/2 = {0.5 * env0:.6g}")

    m = profile.dim.m
    with np.errstate(all="ignore"):
        slack = np.asarray(profile.scalar_curvature(r[interior]), dtype=float) + m * (m - 1)
    slack = slack[~np.isnan(slack)]
    min_slack = float(slack.min()) if slack.size else math.nan

    if mass_of(profile).truncated:
        notes.append("Hawking mass still growing near r_max; mass is a lower bound")
    return ValidationReport(bool(ok), defect, boundary, min_slack, tuple(notes))


class RigidityGap(NamedTuple):
    mass: float
    sup_slope: float
    sup_mh: float


def rigidity_gap(profile: MetricProfile, r_lo: float | None = None) -> RigidityGap:
    """Mass, largest graph slope on ``[r_lo, r_max]`` and largest Hawking mass.

    All three vanish together exactly for hyperbolic space.  On a horizon
    the slope is unbounded and ``sup_slope`` is ``inf`` unless `r_lo` cuts
    the horizon off.
    """
    r = profile.grid()
    lo = profile.r_min if r_lo is None else max(float(r_lo), profile.r_min)
    r = np.unique(np.concatenate([[lo], r[r >= lo]]))
    slope = np.asarray(profile.zprime(r), dtype=float)
    sup_mh = float(np.max(profile.hawking_mass(profile.grid())))
    return RigidityGap(mass_of(profile).value, float(slope.max()), sup_mh)
