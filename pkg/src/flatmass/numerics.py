"""Deterministic quadrature and root finding.

Every volume, arclength and height in the package goes through
:func:`integrate` or :func:`integrate_singular_left`.  Integrands are called
with 1-D ``numpy`` arrays and must return an array of the same shape (a
scalar result is broadcast).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BracketError, DomainError, RefinementError, SingularityError

__all__ = [
    "Tolerance",
    "default_tolerance",
    "integrate",
    "integrate_singular_left",
    "find_root_increasing",
    "bracket_root_increasing",
]

# Largest number of simultaneously active subintervals before giving up.
_MAX_ACTIVE = 1 << 20
# Initial stretch of the substituted range handled by the open rule.
_HEAD_FRACTION = 2.0**-10
_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(5)


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 40

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if not self.rel_tol >= 0:
            raise DomainError(f"rel_tol must be non-negative, got {self.rel_tol}")
        if self.max_depth < 1:
            raise DomainError(f"max_depth must be >= 1, got {self.max_depth}")

    def scaled(self, factor: float) -> "Tolerance":
        """Return a copy with ``abs_tol`` multiplied by `factor`."""
        return Tolerance(self.abs_tol * factor, self.rel_tol, self.max_depth)


def default_tolerance() -> Tolerance:
    """Default tolerance, honouring the ``FLATMASS_TOL`` environment variable.

    The variable, when set, replaces the absolute tolerance only.
    """
    raw = os.environ.get("FLATMASS_TOL")
    if raw is None or raw.strip() == "":
        return Tolerance()
    try:
        value = float(raw)
    except ValueError as exc:
        raise DomainError(f"FLATMASS_TOL is not a number: {raw!r}") from exc
    return Tolerance(abs_tol=value)


def _evaluate(f, x):
    y = np.asarray(f(x), dtype=float)
    return np.array(np.broadcast_to(y, x.shape), dtype=float)


def integrate(f: Callable, a: float, b: float, tol: Tolerance | None = None) -> float:
    """Adaptive Simpson quadrature with Richardson correction.

    All subintervals of one refinement level are evaluated in a single
    vectorised call.  A subinterval of width ``h`` is accepted once the two
    half-interval Simpson sums differ from the whole-interval sum by at most
    ``15 * target * h / (b - a)``, where ``target = max(abs_tol, rel_tol*|I|)``.

    Parameters
    ----------
    f : callable
        Vectorised integrand.
    a, b : float
        Integration limits, ``a <= b``.
    tol : Tolerance, optional
        Defaults to :func:`default_tolerance`.

    Returns
    -------
    float

    Raises
    ------
    RefinementError
        If ``max_depth`` levels do not suffice; carries the last estimate.
    """
    tol = tol or default_tolerance()
    a = float(a)
    b = float(b)
    if not a <= b:
        raise DomainError(f"integration limits out of order: [{a}, {b}]")
    if a == b:
        return 0.0
    length = b - a

    x0 = np.array([a, 0.5 * (a + b), b])
    y0 = _evaluate(f, x0)
    if not np.all(np.isfinite(y0)):
        raise DomainError(f"integrand not finite on [{a}, {b}]")
    whole0 = length / 6.0 * (y0[0] + 4.0 * y0[1] + y0[2])
    target = max(tol.abs_tol, tol.rel_tol * abs(whole0))

    lo = x0[:1]
    hi = x0[2:]
    flo = y0[:1]
    fmid = y0[1:2]
    fhi = y0[2:]
    whole = np.array([whole0])
    total = 0.0

    for depth in range(tol.max_depth):
        mid = 0.5 * (lo + hi)
        h = hi - lo
        quarter = np.concatenate([0.5 * (lo + mid), 0.5 * (mid + hi)])
        fq = _evaluate(f, quarter)
        if not np.all(np.isfinite(fq)):
            raise DomainError(f"integrand not finite inside [{a}, {b}]")
        n = lo.size
        fl, fr = fq[:n], fq[n:]
        left = h / 12.0 * (flo + 4.0 * fl + fmid)
        right = h / 12.0 * (fmid + 4.0 * fr + fhi)
        diff = left + right - whole
        ok = np.abs(diff) <= 15.0 * target * h / length
        if depth == 0:
            ok[:] = False
        # intervals too narrow to split further are accepted as they stand
        ok |= (mid <= lo) | (mid >= hi)
        total += float(np.sum((left + right + diff / 15.0)[ok]))

        keep = ~ok
        if not keep.any():
            return total
        lo_k, mid_k, hi_k = lo[keep], mid[keep], hi[keep]
        lo = np.concatenate([lo_k, mid_k])
        hi = np.concatenate([mid_k, hi_k])
        new_flo = np.concatenate([flo[keep], fmid[keep]])
        new_fmid = np.concatenate([fl[keep], fr[keep]])
        new_fhi = np.concatenate([fmid[keep], fhi[keep]])
        flo, fmid, fhi = new_flo, new_fmid, new_fhi
        whole = np.concatenate([left[keep], right[keep]])
        if lo.size > _MAX_ACTIVE:
            break

    estimate = total + float(np.sum(whole))
    raise RefinementError(
        f"adaptive Simpson did not converge on [{a}, {b}] within "
        f"{tol.max_depth} levels",
        estimate,
    )


def integrate_singular_left(
    f: Callable,
    a: float,
    b: float,
    exponent_half: bool = True,
    tol: Tolerance | None = None,
    *,
    offset: bool = False,
) -> float:
    """Integrate `f` over ``[a, b]`` allowing ``(r - a)**-0.5`` growth at `a`.

    With ``u = sqrt(r - a)`` the integral becomes
    ``int_0^sqrt(b-a) 2 u f(a + u**2) du`` whose integrand is bounded.  The
    substituted integrand is never evaluated at ``u = 0``: a short initial
    stretch is handled by an open Gauss-Legendre rule and the rest by
    :func:`integrate`.

    When `exponent_half` is false the call reduces to :func:`integrate`.
    With ``offset=True`` `f` receives ``r - a`` instead of ``r``, which lets
    callers keep full precision in the distance to the endpoint.

    Raises
    ------
    SingularityError
        If the substituted integrand still grows towards ``u = 0``.
    """
    tol = tol or default_tolerance()
    if not exponent_half:
        if offset:
            return integrate(lambda r: f(r - a), a, b, tol)
        return integrate(f, a, b, tol)
    a = float(a)
    b = float(b)
    if not a <= b:
        raise DomainError(f"integration limits out of order: [{a}, {b}]")
    if a == b:
        return 0.0
    ub = math.sqrt(b - a)

    def g(u):
        return 2.0 * u * _evaluate(f, u * u if offset else a + u * u)

    probes = ub * np.array([2.0**-4, 2.0**-8, 2.0**-12])
    with np.errstate(all="ignore"):
        gp = g(probes)
    if not np.all(np.isfinite(gp)):
        raise SingularityError(f"integrand not finite near left endpoint {a}")
    m4, m8, m12 = np.abs(gp)
    if m12 > 0 and m12 > 1.25 * m8 and m8 > 1.25 * m4:
        raise SingularityError(
            f"integrand grows faster than (r - a)^(-1/2) at left endpoint {a}"
        )
    head = ub * _HEAD_FRACTION
    gx = head * 0.5 * (_GAUSS_X + 1.0)
    first = head * 0.5 * float(np.dot(_GAUSS_W, g(gx)))
    return first + integrate(g, head, ub, tol)


def bracket_root_increasing(g: Callable[[float], float], lo: float, hi: float,
                            width: float = 0.0) -> tuple[float, float]:
    """Shrink ``[lo, hi]`` around the root of increasing `g`.

    Bisection runs until the bracket is no wider than `width` or cannot be
    split in floating point.  The invariant ``g(lo) <= 0 <= g(hi)`` holds on
    return.
    """
    lo = float(lo)
    hi = float(hi)
    if lo > hi:
        raise BracketError(f"empty bracket [{lo}, {hi}]")
    glo = g(lo)
    ghi = g(hi)
    if glo > 0 or ghi < 0:
        raise BracketError(
            f"root not bracketed: g({lo}) = {glo}, g({hi}) = {ghi}"
        )
    if glo == 0:
        return lo, lo
    if ghi == 0:
        return hi, hi
    for _ in range(2200):
        if hi - lo <= width:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        gm = g(mid)
        if gm == 0:
            return mid, mid
        if gm < 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def find_root_increasing(g: Callable[[float], float], lo: float, hi: float,
                         tol: Tolerance | None = None) -> float:
    """Root of an increasing function by bisection.

    Returns the midpoint of a bracket no wider than ``tol.abs_tol``, so
    ``g(x - abs_tol) <= 0 <= g(x + abs_tol)``.

    Raises
    ------
    BracketError
        If ``g(lo) > 0`` or ``g(hi) < 0``.
    """
    tol = tol or default_tolerance()
    lo, hi = bracket_root_increasing(g, lo, hi, tol.abs_tol)
    return 0.5 * (lo + hi)
