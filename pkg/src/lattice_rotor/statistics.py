"""Cylinder coordinates, invariant samples, and period statistics.

On the regular strip of a polygon class the return dynamics conjugate to
a linear twist map of the cylinder: rotating the strip onto the axes and
rescaling by the strip width sends lattice points to

    theta = (x - y) / (2*(2*v1 + 1))        (periodic, [-1/2, 1/2))
    rho   = (x + y - 2*x0) / (2*(2*v1 + 1)),

with x0 a return-fixed anchor on the symmetry line.  One return twists
theta by K(e)*rho, so circles of rational rho/rho_bar are periodic and a
band of width |rho_bar| in rho is one fundamental domain of the twist.

For square classes (where the twist survives at infinity) the period
statistics of the return map are compared against the distribution of a
random reversible map,

    R(x) = 1 - exp(-x) * (1 + x),

after the usual scaling by kappa = 2*N / (g + h), where g and h count
the two reversor fixed sets.  The experiment closes a band of m
fundamental domains under the return map, deduplicates orbits, and
integrates R - D against the empirical step function in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import _engine as eng
from ._engine import EscapeError, GuardViolation, IrregularOrbit
from .core_map import (LatticePoint, RotationParameter, as_parameter,
                       recurrence_time)
from .hamiltonian import PolygonClass
from .return_map import _class, find_density_anchor, phi_point

__all__ = [
    "CylinderPoint", "CoordinateFrame", "OrbitSummary", "InvariantSet",
    "DistributionResult", "to_cylinder", "choose_anchor", "omega_step",
    "build_invariant_set", "period_distribution", "universal_R",
    "gh_ratio", "symmetric_census", "recurrence_time", "orbit_period_fast",
]


def _wrap_half(f: Fraction) -> Fraction:
    """Wrap into the half-open unit interval centred at zero."""
    return f - math.floor(f + Fraction(1, 2))


@dataclass(frozen=True)
class CylinderPoint:
    theta: Fraction
    rho: Fraction
    nu: Fraction


@dataclass
class CoordinateFrame:
    e: int
    lam: RotationParameter
    z0: LatticePoint
    cls: PolygonClass


def choose_anchor(e: int, lam, margin: Fraction = Fraction(0)) -> CoordinateFrame:
    """Anchor frame at the least return-fixed regular point on the diagonal."""
    lam = as_parameter(lam)
    z0 = find_density_anchor(e, lam, margin=margin)
    return CoordinateFrame(e=e, lam=lam, z0=z0, cls=_class(e))


def to_cylinder(z: LatticePoint, frame: CoordinateFrame) -> CylinderPoint:
    W = 2 * frame.cls.v1 + 1
    theta = _wrap_half(Fraction(z[0] - z[1], 2 * W))
    rho = Fraction(z[0] + z[1] - 2 * frame.z0[0], 2 * W)
    nu = _wrap_half(rho / frame.cls.rho_bar)
    return CylinderPoint(theta=theta, rho=rho, nu=nu)


def omega_step(pt: CylinderPoint, e: int) -> CylinderPoint:
    """One application of the unperturbed twist map of class e."""
    cls = _class(e)
    theta = _wrap_half(pt.theta + cls.twist * pt.rho)
    return CylinderPoint(theta=theta, rho=pt.rho, nu=pt.nu)


@dataclass
class OrbitSummary:
    rep: LatticePoint        # lexicographically least point of the orbit
    period: int              # return-map period
    size: int                # == period: points contributed to the sample
    symmetric: bool
    rho_span: Fraction


@dataclass
class InvariantSet:
    e: int
    v_k: int
    m: int
    lam: RotationParameter
    anchor: LatticePoint
    n_points: int            # size of the closed set
    n_band: int              # size of the seeded band
    g: int
    h: int
    orbits: list[OrbitSummary]
    max_rho_span: Fraction
    rho_tilde: Fraction
    points: Optional[set[LatticePoint]] = None   # kept only on request

    @property
    def overspill(self) -> float:
        return self.n_points / self.n_band


def build_invariant_set(v_k: int, m: int, lam=None,
                        lam_exponents: range = range(8, 26),
                        budget: int = 60_000_000,
                        keep_points: bool = False) -> InvariantSet:
    """Close a band of m twist fundamental domains under the return map.

    The class is e = v_k**2 (the square regime, positive twist).  When lam
    is omitted, reciprocal powers of two are scanned downward until the
    closure neither escapes the class nor spills out of the strip; the
    value used is recorded in the result.  Orbits are walked exactly once
    and summarised; the reversor counts g and h are tallied along the way.
    """
    if lam is not None:
        return _build_invariant_set(v_k, m, as_parameter(lam), budget,
                                    keep_points)
    last_exc: Exception | None = None
    for s in lam_exponents:
        cand = RotationParameter(1, 2 ** s)
        if not eng.guard_ok(v_k + 2, v_k + 2, cand.p, cand.q):
            continue
        try:
            return _build_invariant_set(v_k, m, cand, budget, keep_points)
        except (EscapeError, GuardViolation, IrregularOrbit) as exc:
            last_exc = exc
    raise EscapeError(f"no parameter in the scan closed the band: {last_exc}")


def _build_invariant_set(v_k: int, m: int, lam: RotationParameter,
                         budget: int, keep_points: bool = False) -> InvariantSet:
    e = v_k * v_k
    cls = _class(e)
    if cls.twist <= 0:
        raise ValueError("invariant bands require a positive-twist class")
    p, q = lam.p, lam.q
    W = 2 * cls.v1 + 1
    rho_bar = cls.rho_bar

    # anchor clear of the class floor: room for half a fundamental domain
    # below, plus a boundary allowance for the irregular fringe
    margin = Fraction(p, q) * (W * W * rho_bar + 32 * (2 * v_k + 1))
    anchor = find_density_anchor(e, lam, margin=margin)
    x0 = anchor[0]

    s_lo = -math.floor(W * rho_bar)
    s_hi = math.floor((2 * m - 1) * W * rho_bar)
    qlo, qhi = e * q, cls.e.interval_end * q

    visited: set[int] = set()
    KEY = 1 << 64
    orbits: list[OrbitSummary] = []
    g = 0
    h = 0
    n_points = 0
    n_band = 0
    steps_used = 0
    max_span = Fraction(0)

    v1, k = cls.v1, cls.k
    for S in range(s_lo, s_hi + 1):
        base = 2 * x0 + S
        d0 = -W if (base - W) % 2 == 0 else -W + 1
        for d in range(d0, W, 2):
            x = (base + d) // 2
            y = x - d
            key = x * KEY + y
            n_band += 1
            if key in visited:
                continue
            # walk the whole orbit of this seed
            cyc_min = (x, y)
            smin = smax = x + y
            cx, cy = x, y
            period = 0
            sym = False
            while True:
                visited.add(cx * KEY + cy)
                n_points += 1
                period += 1
                dd = cx - cy
                if dd == 0 or dd == -W:
                    g += 1
                    sym = True
                nx, ny, _tau = eng.phi_fast(cx, cy, p, q, v1, k, qlo, qhi)
                steps_used += 1
                if steps_used > budget:
                    raise EscapeError("closure exceeded its step budget")
                # reversor-H count: Phi(u) equals the reflected u
                if dd == -W:
                    if (nx, ny) == (cx, cy):
                        h += 1
                        sym = True
                elif (nx, ny) == (cy, cx):
                    h += 1
                    sym = True
                if (nx, ny) == (x, y):
                    break
                cx, cy = nx, ny
                if (cx, cy) < cyc_min:
                    cyc_min = (cx, cy)
                ssum = cx + cy
                if ssum < smin:
                    smin = ssum
                elif ssum > smax:
                    smax = ssum
                if period > 5_000_000:
                    raise EscapeError("orbit failed to close; cap reached")
            span = Fraction(smax - smin, 2 * W)
            if span > max_span:
                max_span = span
            orbits.append(OrbitSummary(rep=cyc_min, period=period, size=period,
                                       symmetric=sym, rho_span=span))
    if max_span >= cls.rho_tilde:
        raise EscapeError("an orbit wrapped a whole lattice period")
    kept = None
    if keep_points:
        kept = {(key // KEY, key % KEY) for key in visited}
    return InvariantSet(e=e, v_k=v_k, m=m, lam=lam, anchor=anchor,
                        n_points=n_points, n_band=n_band, g=g, h=h,
                        orbits=orbits, max_rho_span=max_span,
                        rho_tilde=cls.rho_tilde, points=kept)


def universal_R(x: float) -> float:
    """Expected period distribution of a random reversible map."""
    if x <= 0:
        return 0.0
    return 1.0 - math.exp(-x) * (1.0 + x)


@dataclass
class DistributionResult:
    e: int
    m: int
    lam: RotationParameter
    N_bar: int
    g: int
    h: int
    kappa: float
    D: list[tuple[int, Fraction]]     # (period, cumulative fraction), sorted
    distance_to_R: float
    symmetric_fraction: Fraction

    def D_at(self, x: float) -> float:
        """Empirical fraction of points with period at most kappa * x."""
        cut = self.kappa * x
        frac = Fraction(0)
        for t, cum in self.D:
            if t <= cut:
                frac = cum
            else:
                break
        return float(frac)


def period_distribution(inv: InvariantSet) -> DistributionResult:
    """Empirical period distribution of a closed band, scaled by kappa."""
    N = inv.n_points
    if inv.g + inv.h == 0:
        raise EscapeError("no reversor fixed points in the sample")
    kappa = 2.0 * N / (inv.g + inv.h)
    weights: dict[int, int] = {}
    sym_points = 0
    for orb in inv.orbits:
        weights[orb.period] = weights.get(orb.period, 0) + orb.size
        if orb.symmetric:
            sym_points += orb.size
    D = []
    cum = 0
    for t in sorted(weights):
        cum += weights[t]
        D.append((t, Fraction(cum, N)))
    # exact integral of R - D over [0, 16]:
    #   int_0^16 R dx = 14 + 18*exp(-16);  int_0^16 D dx by the step sum
    int_R = 14.0 + 18.0 * math.exp(-16.0)
    int_D = 0.0
    for t, _ in D:
        w = weights[t]
        xl = t / kappa
        if xl < 16.0:
            int_D += w * (16.0 - xl)
    int_D /= N
    return DistributionResult(e=inv.e, m=inv.m, lam=inv.lam, N_bar=N,
                              g=inv.g, h=inv.h, kappa=kappa, D=D,
                              distance_to_R=int_R - int_D,
                              symmetric_fraction=Fraction(sym_points, N))


def gh_ratio(inv: InvariantSet) -> float:
    if inv.g == 0:
        raise EscapeError("no diagonal fixed points in the sample")
    return inv.h / inv.g


def symmetric_census(inv: InvariantSet) -> Fraction:
    sym = sum(o.size for o in inv.orbits if o.symmetric)
    return Fraction(sym, inv.n_points)


# ---------------------------------------------------------------------------
# fast full-orbit periods through the return map
# ---------------------------------------------------------------------------

def orbit_period_fast(z: LatticePoint, lam, rev_cap: int = 10**6
                      ) -> tuple[int, int, bool]:
    """Minimal period of a lattice point, summed over return excursions.

    Walks the point into the return strip, then follows the cycle of the
    return map, adding up the return times; the cycle length is the
    number of revolutions.  Irregular excursions silently take the bare
    iteration route, so the count is exact for every seed.  Returns
    (period, revolutions, truncated).
    """
    lam = as_parameter(lam)
    p, q = lam.p, lam.q
    if z == (0, 0):
        return 1, 0, False
    x, y = z
    pre = 0
    limit = 8 * (abs(p * x // q) + abs(p * y // q) + 4) + 4 * (q // p)
    while not eng.true_in_X(x, y, p, q):
        x, y = p * x // q - y, x
        pre += 1
        if pre > limit:
            raise IrregularOrbit("seed failed to reach the return strip")
    from .return_map import phi_point
    total = 0
    cx, cy = x, y
    for rev in range(1, rev_cap + 1):
        (nx, ny), tau = phi_point((cx, cy), lam)
        total += tau
        if (nx, ny) == (x, y):
            return total, rev, False
        cx, cy = nx, ny
    return total, rev_cap, True
