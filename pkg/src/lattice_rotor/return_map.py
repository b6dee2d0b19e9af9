"""Perturbed return dynamics on the symmetry strip.

For small lam the lattice rotation is a perturbation of the polygonal
flow: every orbit winds around the origin, returning over and over to a
thin strip X along the positive diagonal.  This module computes the
first-return map Phi on X two ways: by bare iteration (the oracle), and
through the strip map Psi, which leaps from one transition point to the
next in O(1) arithmetic per polygon side.

Within a polygon class e the strip has width 2*v1 + 1 lattice diagonals,
and the regular part of the class carries a rigid arithmetic structure:

  * each return orbit visits 2k - 1 transition points per quarter turn,
    whose types reproduce the vertex list of the class;
  * the residues of the transition points modulo 2*v_j + 1 form the orbit
    code, constant exactly on congruence classes of a lattice of index
    q(e) that is independent of lam;
  * symmetric fixed points of Phi are picked out by two congruences on
    the code, giving them density 1/((2*v1+1)(2*vk+1)) when an odd
    coprimality condition on the vertex list holds.

Regularity of a point is decided executably: its return orbit must keep
the class level interval, avoid the corner windows around lattice
points, and keep its endpoints off the transition set.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from . import _engine as eng
from ._engine import EscapeError, GuardViolation, IrregularOrbit
from .core_map import LatticePoint, RotationParameter, as_parameter
from .hamiltonian import BoxIndex, PolygonClass, vertex_list

__all__ = [
    "ReturnOrbit", "ReturnDomainPoint", "DensityReport", "XeDomain",
    "EquivarianceReport", "in_Lambda", "in_Sigma", "strip_map_Psi", "in_X",
    "return_map_Phi", "phi_point", "phi_direct", "is_regular",
    "regular_domain_Xe", "check_equivariance", "symmetric_fixed_point_test",
    "symmetric_fixed_direct", "density_delta", "class_of_point",
    "EscapeError", "GuardViolation", "IrregularOrbit",
]


@lru_cache(maxsize=None)
def _class(e: int) -> PolygonClass:
    return vertex_list(e)


def _default_cap(lam: RotationParameter) -> int:
    return 64 + 8 * (lam.q // lam.p + 1)


def in_Lambda(z: LatticePoint, lam) -> bool:
    lam = as_parameter(lam)
    return eng.in_lambda(z[0], z[1], lam.p, lam.q)


def in_Sigma(z: LatticePoint, lam) -> bool:
    """Corner-window test: transition points too close to a lattice point."""
    lam = as_parameter(lam)
    p, q = lam.p, lam.q
    x, y = z
    if not eng.in_lambda(x, y, p, q):
        return False
    m, n = p * x // q, p * y // q
    for a in (m, m + 1):
        for b in (n, n + 1):
            s = max(abs(2 * b + 1), abs(2 * a + 1))
            if max(abs(p * x - a * q), abs(p * y - b * q)) <= p * (s + 2):
                return True
    return False


def strip_map_Psi(z: LatticePoint, lam, direction: int = 1
                  ) -> tuple[LatticePoint, int]:
    """Transit to the transition set under the (inverse) fourth iterate.

    Returns the landing point and the transit count t >= 1.  The landing
    is bit-identical to stepwise iteration; regions too far out for the
    smallness bound fall back to the stepwise route automatically.
    """
    lam = as_parameter(lam)
    if z == (0, 0):
        raise ValueError("the origin has no transit time")
    p, q = lam.p, lam.q
    try:
        if direction >= 0:
            x, y, t = eng.psi_once(z[0], z[1], p, q)
        else:
            x, y, t = eng.psi_once_backward(z[0], z[1], p, q)
    except GuardViolation:
        x, y, t = eng.psi_stepwise(z[0], z[1], p, q, forward=direction >= 0)
    return (x, y), t


def in_X(z: LatticePoint, lam) -> bool:
    lam = as_parameter(lam)
    return eng.true_in_X(z[0], z[1], lam.p, lam.q)


def class_of_point(z: LatticePoint, lam) -> int:
    """Class index of the level interval containing the rescaled point."""
    from .hamiltonian import class_of
    lam = as_parameter(lam)
    h = Fraction(eng.q_times_H(z[0], z[1], lam.p, lam.q), lam.q)
    return class_of(h)


def phi_point(z: LatticePoint, lam, e: Optional[int] = None,
              cap: Optional[int] = None) -> tuple[LatticePoint, int]:
    """First return (point and return time only), accelerated when regular.

    Seeds whose orbit does not carry the regular class structure (or whose
    region is too far out for the smallness bound) fall back to bare
    iteration, which is the defining route and always valid.
    """
    lam = as_parameter(lam)
    if e is None:
        e = class_of_point(z, lam)
    cls = _class(e)
    p, q = lam.p, lam.q
    qlo, qhi = e * q, cls.e.interval_end * q
    try:
        x, y, tau = eng.phi_fast(z[0], z[1], p, q, cls.v1, cls.k, qlo, qhi)
    except (GuardViolation, IrregularOrbit, EscapeError):
        x, y, tau = eng.phi_direct(z[0], z[1], p, q,
                                   cap if cap else _default_cap(lam))
    return (x, y), tau


def phi_direct(z: LatticePoint, lam, cap: Optional[int] = None,
               d_cap: Optional[int] = None) -> tuple[LatticePoint, int]:
    """First return by bare iteration of the map (reference route)."""
    lam = as_parameter(lam)
    x, y, tau = eng.phi_direct(z[0], z[1], lam.p, lam.q,
                               cap if cap else _default_cap(lam), d_cap)
    return (x, y), tau


# ---------------------------------------------------------------------------
# orbit codes
# ---------------------------------------------------------------------------

def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _code_vertex(vx: int, vy: int, box_before, box_after, p: int, q: int
                 ) -> tuple[int, int, int]:
    """(vertex type, code residue, non-integer coordinate) of a transition point.

    The crossed grid line is read off the box change of the fourth
    iterate; the residue is taken in the coordinate that crosses it.
    """
    (bm, bn), (am, an) = box_before, box_after
    if bm != am and bn != an:
        raise IrregularOrbit(f"critical vertex at ({vx},{vy})")
    if bn != an:                     # horizontal line crossed: y is integer-like
        line = bn if bn > an else an
        c = bm
        vtype = c if c >= 0 else -c - 1
        mod = 2 * vtype + 1
        sigma = (vy - _ceil_div(line * q, p)) % mod
        noninteger = vx
    else:                            # vertical line crossed
        line = bm if bm > am else am
        c = bn
        vtype = c if c >= 0 else -c - 1
        mod = 2 * vtype + 1
        sigma = (vx - _ceil_div(line * q, p)) % mod
        noninteger = vy
    return vtype, sigma, noninteger


@dataclass
class ReturnOrbit:
    """One excursion of the return map, with code and symmetry data."""

    seed: LatticePoint
    e: int
    lam: RotationParameter
    tau: int
    vertices: list[tuple[LatticePoint, BoxIndex]]   # pre-vertex first
    sigma: list[int]                                # sigma_-1, sigma_1..sigma_{2k-1}
    gamma: list[int]
    result: LatticePoint
    is_fixed: bool
    is_symmetric_fixed: bool

    @property
    def sigma_minus(self) -> int:
        return self.sigma[0]

    def sigma_j(self, j: int) -> int:
        if j < 1:
            raise IndexError("vertex indices start at 1; use sigma_minus")
        return self.sigma[j]


def return_map_Phi(z: LatticePoint, lam, e: Optional[int] = None) -> ReturnOrbit:
    """First return with full vertex, code, and symmetry bookkeeping.

    The return point and time come from the strip-map route; the recorded
    vertices are the transition points of the seed's own quarter-turn
    plus the pre-vertex reached backwards, which together carry the
    orbit code.  Irregular seeds raise IrregularOrbit with a diagnostic.
    """
    lam = as_parameter(lam)
    if not in_X(z, lam):
        raise ValueError(f"{z} is not in the return domain")
    if e is None:
        e = class_of_point(z, lam)
    cls = _class(e)
    p, q = lam.p, lam.q
    if eng.in_lambda(z[0], z[1], p, q):
        raise IrregularOrbit("seed lies on the transition set")

    full_types = list(cls.vertex_list) + list(cls.vertex_list[-2::-1])

    bx, by, _t = eng.psi_once_backward(z[0], z[1], p, q)
    x4, y4 = eng.f4(bx, by, p, q)
    pre_code = _code_vertex(bx, by, eng.box_of(bx, by, p, q),
                            eng.box_of(x4, y4, p, q), p, q)
    if pre_code[0] != cls.v1:
        raise IrregularOrbit("pre-vertex type does not match the class")

    verts = eng.quarter_vertices(z[0], z[1], p, q, 2 * cls.k - 1)
    codes = []
    for j, (vx, vy, bbefore, bafter) in enumerate(verts):
        vtype, sigma, noninteger = _code_vertex(vx, vy, bbefore, bafter, p, q)
        if vtype != full_types[j]:
            raise IrregularOrbit(
                f"vertex {j + 1} has type {vtype}, class expects {full_types[j]}")
        codes.append((vtype, sigma, noninteger))

    (rx, ry), tau = phi_point(z, lam, e)
    if eng.in_lambda(rx, ry, p, q):
        raise IrregularOrbit("return point lies on the transition set")

    sigma = [pre_code[1]] + [c[1] for c in codes]
    gamma = [pre_code[2] % (cls.q // (2 * pre_code[0] + 1))] + \
            [c[2] % (cls.q // (2 * c[0] + 1)) for c in codes]
    vertices = [((bx, by), BoxIndex(*eng.box_of(*eng.f4(bx, by, p, q), p, q)))]
    for (vx, vy, bbefore, bafter) in verts:
        vertices.append(((vx, vy), BoxIndex(*bafter)))

    fixed = (rx, ry) == tuple(z)
    v_k = cls.vk
    sym_fixed = fixed and sigma[0] == sigma[1] and \
        (2 * sigma[cls.k] - v_k) % (2 * v_k + 1) == 0
    return ReturnOrbit(seed=tuple(z), e=e, lam=lam, tau=tau,
                       vertices=vertices, sigma=sigma, gamma=gamma,
                       result=(rx, ry), is_fixed=fixed,
                       is_symmetric_fixed=sym_fixed)


def symmetric_fixed_point_test(orbit: ReturnOrbit) -> bool:
    """Code criterion: equal flank residues and the half-turn congruence."""
    cls = _class(orbit.e)
    v_k = cls.vk
    return orbit.is_fixed and orbit.sigma[0] == orbit.sigma[1] and \
        (2 * orbit.sigma[cls.k] - v_k) % (2 * v_k + 1) == 0


def symmetric_fixed_direct(z: LatticePoint, lam, cap: Optional[int] = None
                           ) -> bool:
    """Direct criterion: the return orbit is fixed and meets a symmetry set."""
    lam = as_parameter(lam)
    p, q = lam.p, lam.q
    (rx, ry), tau = phi_point(z, lam)
    if (rx, ry) != tuple(z):
        return False
    x, y = z
    hit = (x == y) or (2 * x == p * y // q)
    for _ in range(tau):
        x, y = p * x // q - y, x
        if x == y or 2 * x == p * y // q:
            hit = True
    return hit


# ---------------------------------------------------------------------------
# regular domains
# ---------------------------------------------------------------------------

@dataclass
class ReturnDomainPoint:
    z: LatticePoint
    e: Optional[int]
    regular: bool
    theta_rho: Optional[tuple] = None


@dataclass
class XeDomain:
    """The surviving regular strip of one class at one parameter value."""

    e: int
    lam: RotationParameter
    cls: PolygonClass
    points: list[ReturnDomainPoint]
    interval: tuple[Fraction, Fraction]
    irregular: list[tuple[LatticePoint, str]]

    @property
    def point_set(self) -> set[LatticePoint]:
        return {pt.z for pt in self.points}


def is_regular(z: LatticePoint, lam, e: int) -> tuple[bool, str]:
    """Executable regularity test over the full return orbit.

    Checks, on all four quadrant strands of the return orbit: the level
    stays inside the open class interval, no transition point is critical
    or enters a corner window, the vertex types match the class, and the
    endpoints avoid the transition set.
    """
    lam = as_parameter(lam)
    p, q = lam.p, lam.q
    cls = _class(e)
    qlo, qhi = e * q, cls.e.interval_end * q
    if eng.in_lambda(z[0], z[1], p, q):
        return False, "seed on transition set"
    full_types = list(cls.vertex_list) + list(cls.vertex_list[-2::-1])
    x, y = z
    try:
        for strand in range(4):
            if not qlo < eng.q_times_H(x, y, p, q) < qhi:
                return False, f"strand {strand} start left the class"
            verts = eng.quarter_vertices(x, y, p, q, 2 * cls.k - 1)
            for j, (vx, vy, bbefore, bafter) in enumerate(verts):
                if bbefore[0] != bafter[0] and bbefore[1] != bafter[1]:
                    return False, "critical vertex"
                vtype, _, _ = _code_vertex(vx, vy, bbefore, bafter, p, q)
                if vtype != full_types[j]:
                    return False, f"vertex type {vtype} != {full_types[j]}"
                if not qlo < eng.q_times_H(vx, vy, p, q) < qhi:
                    return False, "orbit left the class"
                if in_Sigma((vx, vy), lam):
                    return False, "orbit met a corner window"
            x, y = p * x // q - y, x
        (rx, ry), _tau = phi_point(z, lam, e)
        if eng.in_lambda(rx, ry, p, q):
            return False, "return point on transition set"
    except (IrregularOrbit, EscapeError, GuardViolation) as exc:
        return False, str(exc)
    return True, ""


def regular_domain_Xe(e: int, lam) -> XeDomain:
    """Enumerate the strip of class e and trim it to its regular interval.

    The candidate set is the lattice strip |x - y| within the class width
    with level inside the open class interval; the surviving interval is
    the longest run of level values whose whole fibre is regular.
    Results are cached per (class, parameter).
    """
    lam = as_parameter(lam)
    return _regular_domain_cached(e, lam.p, lam.q)


@lru_cache(maxsize=32)
def _regular_domain_cached(e: int, lam_p: int, lam_q: int) -> XeDomain:
    lam = RotationParameter(lam_p, lam_q)
    p, q = lam.p, lam.q
    cls = _class(e)
    W = 2 * cls.v1 + 1
    e_next = cls.e.interval_end
    qlo, qhi = e * q, e_next * q

    from .hamiltonian import eval_P_inverse
    x_lo = math.floor(eval_P_inverse(Fraction(e, 2)) * q / p) - W - 2
    x_hi = math.ceil(eval_P_inverse(Fraction(e_next, 2)) * q / p) + W + 2
    by_level: dict[int, list[tuple[LatticePoint, bool, str]]] = {}
    for x in range(max(x_lo, 0), x_hi + 1):
        for d in range(-W, W):
            y = x - d
            if y < 0:
                continue
            h = eng.q_times_H(x, y, p, q)
            if not qlo < h < qhi:
                continue
            ok, reason = is_regular((x, y), lam, e)
            by_level.setdefault(h, []).append(((x, y), ok, reason))

    levels = sorted(by_level)
    good = [lv for lv in levels
            if all(ok for _, ok, _ in by_level[lv])]
    # longest run of consecutive good levels
    best_run: list[int] = []
    run: list[int] = []
    good_set = set(good)
    for lv in levels:
        if lv in good_set:
            run.append(lv)
            if len(run) > len(best_run):
                best_run = run.copy()
        else:
            run = []
    points = []
    irregular = []
    run_set = set(best_run)
    for lv in levels:
        for z, ok, reason in by_level[lv]:
            if lv in run_set:
                points.append(ReturnDomainPoint(z=z, e=e, regular=True))
            elif not ok:
                irregular.append((z, reason))
    if not best_run:
        interval = (Fraction(0), Fraction(0))
    else:
        interval = (Fraction(best_run[0], q), Fraction(best_run[-1], q))
    return XeDomain(e=e, lam=lam, cls=cls, points=points,
                    interval=interval, irregular=irregular)


# ---------------------------------------------------------------------------
# equivariance and densities
# ---------------------------------------------------------------------------

@dataclass
class EquivarianceReport:
    ok: bool
    pairs_checked: int
    counterexample: Optional[tuple[LatticePoint, tuple[int, int]]]


def _reduced_equal(z1, z2, W: int) -> bool:
    """Equality modulo the step vector (W, -W) of the strip cylinder."""
    dx = z1[0] - z2[0]
    dy = z1[1] - z2[1]
    return dx == -dy and dx % W == 0


def check_equivariance(e: int, lam, sample_count: int = 64, seed: int = 1,
                       q_override: Optional[int] = None) -> EquivarianceReport:
    """Sampled commutation of the return map with the class lattice.

    Draws regular points z and lattice vectors l with z and z + l both in
    the regular strip, and checks the return images differ by exactly l
    up to the cylinder identification.  Passing q_override builds the
    translation from a wrong lattice constant (a negative control).
    """
    lam = as_parameter(lam)
    cls = _class(e)
    W = 2 * cls.v1 + 1
    # overrides round upward so that any non-multiple of the strip width
    # (e.g. q + 1, the negative control) yields a genuinely wrong vector
    A = cls.q // W if q_override is None else _ceil_div(q_override, W)
    B1 = (A, A)
    B2 = ((A - W) // 2, (A + W) // 2)
    dom = regular_domain_Xe(e, lam)
    pts = dom.point_set
    rng = random.Random(seed)
    pool = sorted(pts)
    if not pool:
        raise EscapeError("regular strip is empty at this lam")
    checked = 0
    attempts = 0
    while checked < sample_count and attempts < 200 * sample_count:
        attempts += 1
        z = pool[rng.randrange(len(pool))]
        a = rng.randint(-3, 3)
        b = rng.randint(-2, 2)
        if a == 0 and b == 0:
            continue
        l = (a * B1[0] + b * B2[0], a * B1[1] + b * B2[1])
        z2 = (z[0] + l[0], z[1] + l[1])
        if z2 not in pts:
            continue
        try:
            im1, _ = phi_point(z, lam, e)
            im2, _ = phi_point(z2, lam, e)
        except (IrregularOrbit, EscapeError):
            continue
        shifted = (im1[0] + l[0], im1[1] + l[1])
        if not _reduced_equal(im2, shifted, W):
            return EquivarianceReport(ok=False, pairs_checked=checked + 1,
                                      counterexample=(z, l))
        checked += 1
    if checked == 0:
        raise EscapeError("no congruent pairs fit in the regular strip")
    return EquivarianceReport(ok=True, pairs_checked=checked,
                              counterexample=None)


@dataclass
class DensityReport:
    e: int
    lam: RotationParameter
    delta: Fraction
    eta: Fraction
    formula: Fraction
    matches_formula: bool
    coprimality_ok: bool
    classes: int
    symmetric_fixed: int
    fixed: int
    anchor: LatticePoint


def _fundamental_domain(anchor: LatticePoint, cls: PolygonClass
                        ) -> list[LatticePoint]:
    """The q(e) lattice points of one half-open period parallelogram."""
    W = 2 * cls.v1 + 1
    A = cls.q // W
    pts = []
    for dprime in range(W):
        # x-offsets with 0 <= sx*W - dprime*(A - W)/2 < A*W; A - W is even
        base = dprime * (A - W) // 2
        lo = _ceil_div(base, W)
        for sx in range(lo, lo + A):
            pts.append((anchor[0] + sx, anchor[1] + sx + dprime))
    return pts


def find_density_anchor(e: int, lam, margin: Fraction = Fraction(0)
                        ) -> LatticePoint:
    """Least regular fixed point of the return map on the symmetry line."""
    lam = as_parameter(lam)
    p, q = lam.p, lam.q
    cls = _class(e)
    from .hamiltonian import eval_P_inverse
    lo_level = Fraction(e) + margin
    x = math.floor(eval_P_inverse(lo_level / 2) * q / p)
    qhi = cls.e.interval_end * q
    limit = math.ceil(eval_P_inverse(Fraction(cls.e.interval_end, 2)) * q / p)
    while x <= limit:
        x += 1
        h = eng.q_times_H(x, x, p, q)
        if h <= (Fraction(e) + margin) * q or h >= qhi:
            continue
        ok, _ = is_regular((x, x), lam, e)
        if not ok:
            continue
        try:
            (rx, ry), _tau = phi_point((x, x), lam, e)
        except (IrregularOrbit, EscapeError, GuardViolation):
            continue
        if (rx, ry) == (x, x):
            return (x, x)
    raise EscapeError(f"no regular fixed anchor found for e={e} at lam={lam}")


def density_delta(e: int, lam) -> DensityReport:
    """Fixed-point densities over one fundamental domain of the class lattice.

    Counts return-map fixed points and symmetric fixed points among the
    q(e) congruence classes, anchored at the least regular fixed point on
    the symmetry line.  Any irregular point in the domain means the
    parameter is too large for this class and raises EscapeError.
    """
    lam = as_parameter(lam)
    cls = _class(e)
    anchor = find_density_anchor(e, lam)
    pts = _fundamental_domain(anchor, cls)
    sym = 0
    fixed = 0
    for z in pts:
        orbit = return_map_Phi(z, lam, e)
        if orbit.is_fixed:
            fixed += 1
            if orbit.is_symmetric_fixed:
                sym += 1
    n = len(pts)
    assert n == cls.q
    delta = Fraction(sym, n)
    eta = Fraction(fixed, n)
    return DensityReport(
        e=e, lam=lam, delta=delta, eta=eta, formula=cls.density_formula,
        matches_formula=(delta == cls.density_formula),
        coprimality_ok=cls.coprimality_ok, classes=n,
        symmetric_fixed=sym, fixed=fixed, anchor=anchor)
