"""The integrable piecewise-affine limit of the round-off rotation.

The generating function is built from

    P(x) = floor(x)^2 + (2*floor(x) + 1) * frac(x),

a continuous piecewise-affine interpolation of x^2 through the integers,
with the exact inverse (for x >= 0)

    Pinv(x) = (x + s*(1 + s)) / (2*s + 1),   s = floor(sqrt(x)).

The Hamiltonian H(x, y) = P(x) + P(y) foliates the plane into convex
polygons, invariant under the dihedral group of the square.  A level set
contains lattice points exactly when its value is a sum of two squares
("critical numbers"); critical level sets split the plane into polygon
classes, annuli on which the combinatorics of the flow is constant.

Each class carries a vertex list: the sequence of integer parts of the
first-octant vertex positions, read clockwise from the diagonal.  From
the vertex list come the class lattice constant q(e), the translation
lattice of the return dynamics, the period derivative of the flow, and
the twist coefficient of the conjugate cylinder map.

Everything structural is computed in exact rational arithmetic; only the
large-argument asymptotics of the period function use floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

# direct two-squares enumeration below this, factorisation above
_ENUMERATION_CUTOFF = 10**7

Rational = Fraction
PlanePoint = tuple[Fraction, Fraction]


def floor_sqrt(x) -> int:
    """floor(sqrt(x)) for a nonnegative rational, exact."""
    if x < 0:
        raise ValueError("negative argument")
    return math.isqrt(math.floor(x))


def eval_P(x) -> Fraction:
    """The piecewise-affine square, exact on rationals."""
    x = Fraction(x)
    f = math.floor(x)
    return Fraction(f * f) + (2 * f + 1) * (x - f)


def eval_P_inverse(x) -> Fraction:
    """Inverse of P on the nonnegative axis, exact on rationals."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("P_inverse requires a nonnegative argument")
    s = floor_sqrt(x)
    return (x + s * (s + 1)) / Fraction(2 * s + 1)


def p_inverse_sqrt_form(x: float) -> float:
    """Alternative closed form of the inverse: sqrt(x) minus a defect term."""
    if x < 0:
        raise ValueError("P_inverse requires a nonnegative argument")
    r = math.sqrt(x)
    fr = r - math.floor(r)
    return r - fr * (1.0 - fr) / (2.0 * math.floor(r) + 1.0)


def eval_hamiltonian(x, y) -> Fraction:
    return eval_P(x) + eval_P(y)


def vector_field_w(x, y) -> tuple[int, int]:
    """Hamiltonian field of P(x)+P(y); the floor convention makes it total."""
    return (2 * math.floor(y) + 1, -(2 * math.floor(x) + 1))


def on_delta(x, y) -> bool:
    """True on the discontinuity grid (either coordinate an integer)."""
    return Fraction(x).denominator == 1 or Fraction(y).denominator == 1


@dataclass(frozen=True)
class BoxIndex:
    """Unit square floor(x) = m, floor(y) = n of the plane partition."""

    m: int
    n: int

    @property
    def w_value(self) -> tuple[int, int]:
        return (2 * self.n + 1, -(2 * self.m + 1))


# ---------------------------------------------------------------------------
# critical numbers (sums of two squares)
# ---------------------------------------------------------------------------

def is_critical(n: int) -> bool:
    """Sum-of-two-squares membership test."""
    if n < 0:
        raise ValueError("critical numbers are nonnegative")
    if n <= _ENUMERATION_CUTOFF:
        a = 0
        while 2 * a * a <= n:
            rest = n - a * a
            s = math.isqrt(rest)
            if s * s == rest:
                return True
            a += 1
        return False
    # factorisation route: every prime 3 mod 4 must occur to an even power
    m = n
    for p in (2,):
        while m % p == 0:
            m //= p
    d = 3
    while d * d <= m:
        if m % d == 0:
            exp = 0
            while m % d == 0:
                m //= d
                exp += 1
            if d % 4 == 3 and exp % 2 == 1:
                return False
        d += 2
    if m > 1 and m % 4 == 3:
        return False
    return True


def critical_numbers_up_to(x: int) -> list[int]:
    """All critical numbers <= x, by an additive sieve over a^2 + b^2."""
    if x < 0:
        return []
    hit = bytearray(x + 1)
    a = 0
    while a * a <= x:
        aa = a * a
        b = a
        while aa + b * b <= x:
            hit[aa + b * b] = 1
            b += 1
        a += 1
    return [n for n in range(x + 1) if hit[n]]


def count_E(x: int) -> int:
    """Number of critical numbers <= x (0 included)."""
    if x < 0:
        return 0
    hit = bytearray(x + 1)
    a = 0
    while a * a <= x:
        aa = a * a
        b = a
        while aa + b * b <= x:
            hit[aa + b * b] = 1
            b += 1
        a += 1
    return sum(hit)


def next_critical(e: int) -> int:
    m = e + 1
    while not is_critical(m):
        m += 1
    return m


def class_of(alpha) -> int:
    """Largest critical number <= alpha (the class index of a level value).

    A critical integer argument is returned as-is; it sits on the boundary
    between classes and belongs to no open critical interval.
    """
    alpha = Fraction(alpha)
    if alpha < 0:
        raise ValueError("level values are nonnegative")
    c = math.floor(alpha)
    while not is_critical(c):
        c -= 1
    return c


@dataclass(frozen=True)
class CriticalNumber:
    """A critical number with its representation count and interval end."""

    e: int
    r: int
    interval_end: int

    @classmethod
    def from_int(cls, e: int) -> "CriticalNumber":
        if not is_critical(e):
            raise ValueError(f"{e} is not a sum of two squares")
        return cls(e=e, r=representations_r(e) if e >= 1 else 1,
                   interval_end=next_critical(e))


def representations_r(n: int) -> int:
    """Number of lattice points on the circle x^2 + y^2 = n, via factorisation."""
    if n < 1:
        raise ValueError("representation count defined for n >= 1")
    m = n
    while m % 2 == 0:
        m //= 2
    r = 4
    d = 3
    while d * d <= m:
        if m % d == 0:
            exp = 0
            while m % d == 0:
                m //= d
                exp += 1
            if d % 4 == 3:
                if exp % 2 == 1:
                    return 0
            else:
                r *= exp + 1
        d += 2
    if m > 1:
        if m % 4 == 3:
            return 0
        r *= 2
    return r


# ---------------------------------------------------------------------------
# polygon classes and vertex lists
# ---------------------------------------------------------------------------

@dataclass
class PolygonClass:
    """Arithmetic dossier of one polygon class."""

    e: CriticalNumber
    vertex_list: tuple[int, ...]
    k: int
    v1: int
    vk: int
    iota: tuple[int, ...]          # 0-based first indices of distinct entries
    q: int
    q_j: tuple[int, ...]           # nested lattice constants, j = 1..2k-1
    p_j: tuple[int, ...]
    L: tuple[int, int]             # generator along the symmetry line
    lattice_basis: tuple[tuple[int, int], tuple[int, int]]
    T_prime: Fraction
    twist: Fraction
    rho_bar: Fraction
    rho_tilde: Fraction
    density_formula: Fraction
    coprimality_ok: bool

    @property
    def w(self) -> tuple[int, int]:
        s = 2 * self.v1 + 1
        return (s, -s)


def representative_alpha(e: int) -> Fraction:
    """Interior level value used to probe a class (midpoint rule as fallback)."""
    nxt = next_critical(e)
    half = Fraction(2 * e + 1, 2)
    return half if half < nxt else Fraction(e + nxt, 2)


def _octant_vertex_types(e: int, alpha: Fraction) -> list[int]:
    """First-octant vertex types at level alpha, merged by position.

    Crossings of vertical grid lines x = n sit at abscissa n; crossings of
    horizontal lines y = v sit at abscissa Pinv(alpha - v^2); the axis
    vertex sits at Pinv(alpha).  Sorting by abscissa yields the clockwise
    vertex order.
    """
    v1 = floor_sqrt(Fraction(e, 2))
    vk = math.isqrt(e)
    events: list[tuple[Fraction, int]] = []
    for n in range(v1 + 1, vk + 1):
        events.append((Fraction(n), math.isqrt(e - n * n)))
    for v in range(1, v1 + 1):
        events.append((eval_P_inverse(alpha - v * v), math.isqrt(e - v * v)))
    events.append((eval_P_inverse(alpha), vk))
    events.sort(key=lambda ev: ev[0])
    return [t for _, t in events]


def vertex_list(e) -> PolygonClass:
    """Full arithmetic dossier of the class of a critical number."""
    if isinstance(e, CriticalNumber):
        crit = e
    else:
        crit = CriticalNumber.from_int(int(e))
    e_int = crit.e
    alpha = representative_alpha(e_int)
    V = tuple(_octant_vertex_types(e_int, alpha))
    v1 = floor_sqrt(Fraction(e_int, 2))
    vk = math.isqrt(e_int)
    k = vk + 1
    if len(V) != k or V[0] != v1 or V[-1] != vk:
        raise AssertionError(f"vertex list structure broken for e={e_int}: {V}")

    iota = []
    for i, v in enumerate(V):
        if i == 0 or v != V[i - 1]:
            iota.append(i)

    # extend by reflection: types for the full quarter turn, j = 1..2k-1
    full = list(V) + list(V[-2::-1])
    W = 2 * v1 + 1
    q_list = [W * W]
    for j in range(1, 2 * k - 1):
        if full[j] == full[j - 1]:
            q_list.append(q_list[-1])
        else:
            q_list.append(math.lcm((2 * full[j] + 1) * (2 * full[j - 1] + 1),
                                   q_list[-1]))
    p_list = [qj // (2 * full[j] + 1) for j, qj in enumerate(q_list)]
    q = q_list[-1]

    A = q // W
    L = (A, A)
    basis = (L, ((A - W) // 2, (A + W) // 2))

    tprime = period_T_prime(e_int)
    twist = -Fraction(W * W, 2) * tprime
    rho_bar = 1 / twist if twist != 0 else Fraction(0)
    rho_tilde = Fraction(q, W * W)

    # coprimality of the first or last odd type against all other types
    def coprime_to_rest(v_i):
        return all(math.gcd(2 * v_i + 1, 2 * v + 1) == 1
                   for v in set(V) if v != v_i)
    ok = coprime_to_rest(v1) or coprime_to_rest(vk)

    return PolygonClass(
        e=crit, vertex_list=V, k=k, v1=v1, vk=vk, iota=tuple(iota),
        q=q, q_j=tuple(q_list), p_j=tuple(p_list), L=L, lattice_basis=basis,
        T_prime=tprime, twist=twist, rho_bar=rho_bar, rho_tilde=rho_tilde,
        density_formula=Fraction(1, (2 * vk + 1) * (2 * v1 + 1)),
        coprimality_ok=ok,
    )


# ---------------------------------------------------------------------------
# exact polygon tracing
# ---------------------------------------------------------------------------

@dataclass
class TracedPolygon:
    alpha: Fraction
    vertices: list[PlanePoint]
    side_count: int
    critical: bool


def _corner_box(a: int, b: int) -> tuple[int, int]:
    """Continuation box of the flow through a lattice corner.

    The field of the box must point into it from the corner: the sign of
    each component dictates which wall of the box the corner sits on, and
    exactly one of the four boxes around a nonzero corner is consistent.
    """
    for m in (a - 1, a):
        for n in (b - 1, b):
            wx, wy = 2 * n + 1, -(2 * m + 1)
            if (m == a if wx > 0 else m == a - 1) and \
               (n == b if wy > 0 else n == b - 1):
                return m, n
    raise AssertionError(f"no continuation through the corner ({a},{b})")


def trace_polygon(alpha) -> TracedPolygon:
    """Trace the level set H = alpha exactly, segment by segment.

    The tracer starts on the positive diagonal and follows the piecewise
    constant field clockwise, recording a vertex at every grid-line
    crossing.  A simultaneous crossing of both grid lines (a lattice point
    of a critical level set) is a single merged vertex.  Exact rational
    arithmetic guarantees the polygon closes on itself.
    """
    alpha = Fraction(alpha)
    if alpha < 0:
        raise ValueError("level values are nonnegative")
    if alpha == 0:
        return TracedPolygon(alpha=alpha, vertices=[(Fraction(0), Fraction(0))],
                             side_count=0, critical=True)
    s = eval_P_inverse(alpha / 2)
    x, y = s, s
    if s.denominator == 1:
        m, n = _corner_box(int(s), int(s))
        vertices: list[PlanePoint] = [(x, y)]
        stop = (x, y)
    else:
        m, n = math.floor(s), math.floor(s)
        vertices = []
        stop = None

    max_steps = 8 * (2 * math.isqrt(math.floor(alpha)) + 2) + 16
    for _ in range(max_steps):
        wx, wy = 2 * n + 1, -(2 * m + 1)
        # exit time toward each wall with positive approach speed
        tx = (Fraction(m + 1) - x) / wx if wx > 0 else (Fraction(m) - x) / wx
        ty = (Fraction(n + 1) - y) / wy if wy > 0 else (Fraction(n) - y) / wy
        t = min(tx, ty)
        nxt = (x + t * wx, y + t * wy)
        if t == tx and t == ty:
            # lattice corner: continue in the unique box whose field enters it
            m, n = _corner_box(int(nxt[0]), int(nxt[1]))
        elif t == tx:
            m += 1 if wx > 0 else -1
        else:
            n += 1 if wy > 0 else -1
        if stop is not None and nxt == stop:
            return TracedPolygon(alpha=alpha, vertices=vertices,
                                 side_count=len(vertices),
                                 critical=(alpha.denominator == 1
                                           and is_critical(int(alpha))))
        if stop is None:
            stop = nxt
        vertices.append(nxt)
        x, y = nxt
    raise AssertionError(f"polygon at level {alpha} failed to close")


def traversal_period(alpha) -> Fraction:
    """Flow period measured geometrically: sum of side time over a traced loop."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("positive level required")
    poly = trace_polygon(alpha)
    pts = poly.vertices
    total = Fraction(0)
    for i in range(len(pts)):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % len(pts)]
        # segment lies in one box; speed component from the midpoint box
        mx = math.floor((x0 + x1) / 2)
        wx = 2 * math.floor((y0 + y1) / 2) + 1
        if x1 != x0:
            total += (x1 - x0) / wx
        else:
            total += (y1 - y0) / Fraction(-(2 * mx + 1))
    return total


# ---------------------------------------------------------------------------
# flow period and twist
# ---------------------------------------------------------------------------

def period_T(alpha) -> Fraction:
    """Exact flow period on the level set of value alpha > 0."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("positive level required")
    v1 = floor_sqrt(alpha / 2)
    vk = floor_sqrt(alpha)
    total = eval_P_inverse(alpha / 2) / (2 * v1 + 1)
    for n in range(v1 + 1, vk + 1):
        total -= 2 * eval_P_inverse(alpha - n * n) / (4 * n * n - 1)
    return 8 * total


def period_T_float(alpha: float) -> float:
    """Float version of the period formula, for asymptotic scans."""
    if alpha <= 0:
        raise ValueError("positive level required")
    v1 = math.isqrt(int(alpha / 2))
    vk = math.isqrt(int(alpha))

    def pinv(x):
        s = math.isqrt(int(x))
        return (x + s * (s + 1)) / (2 * s + 1)

    total = pinv(alpha / 2) / (2 * v1 + 1)
    for n in range(v1 + 1, vk + 1):
        total -= 2.0 * pinv(alpha - n * n) / (4 * n * n - 1)
    return 8.0 * total


def period_T_prime(e: int) -> Fraction:
    """Right-limit derivative of the period on the class interval of e."""
    if not is_critical(e):
        raise ValueError(f"{e} is not a critical number")
    v1 = floor_sqrt(Fraction(e, 2))
    vk = math.isqrt(e)
    total = Fraction(1, (2 * v1 + 1) ** 2)
    for n in range(v1 + 1, vk + 1):
        total -= Fraction(4, (4 * n * n - 1) * (2 * math.isqrt(e - n * n) + 1))
    return 4 * total


def twist_K(e: int) -> Fraction:
    """Twist coefficient of the conjugate cylinder map on class e."""
    v1 = floor_sqrt(Fraction(e, 2))
    return -Fraction((2 * v1 + 1) ** 2, 2) * period_T_prime(e)


def rho_bar(e: int) -> Fraction:
    """Translation period of the unperturbed cylinder dynamics."""
    K = twist_K(e)
    if K == 0:
        raise ZeroDivisionError("zero twist on this class")
    return 1 / K


def rho_tilde(e: int) -> Fraction:
    """Translation period of the perturbed return map on the cylinder."""
    cls = vertex_list(e)
    return cls.rho_tilde


# ---------------------------------------------------------------------------
# period asymptotics
# ---------------------------------------------------------------------------

def asymptotic_form(b: float) -> float:
    """Limiting rescaled period deviation, (1/3)(2b+1)^(3/2) - sqrt(2b)."""
    if not 0 <= b < 1:
        raise ValueError("b must lie in [0, 1)")
    return (2 * b + 1) ** 1.5 / 3.0 - math.sqrt(2 * b)


def _sqrt_over_sq_integral(alpha: float, lo: float, hi: float) -> float:
    # antiderivative of sqrt(alpha - x^2) / x^2 is -sqrt(alpha-x^2)/x - asin(x/sqrt(alpha))
    ra = math.sqrt(alpha)

    def anti(x):
        return -math.sqrt(max(alpha - x * x, 0.0)) / x - math.asin(min(x / ra, 1.0))

    return anti(hi) - anti(lo)


def epsilon_b(b: float, v_k: int) -> float:
    """Finite-size sum-minus-integral defect of the period asymptotics.

    Each cell contributes the cell value of sqrt(alpha - x^2)/x^2 minus its
    closed-form integral over the unit cell; no numerical quadrature enters.
    """
    if not 0 <= b < 1:
        raise ValueError("b must lie in [0, 1)")
    if v_k < 2:
        raise ValueError("v_k must be at least 2")
    alpha = (v_k + b) ** 2
    v1 = math.floor((v_k + b) / math.sqrt(2))
    total = 0.0
    for n in range(v1 + 1, v_k):
        cell = math.sqrt(alpha - n * n) / (n * n)
        total += cell - _sqrt_over_sq_integral(alpha, n - 0.5, n + 0.5)
    return v_k ** 1.5 * total


def epsilon_bounds(b: float) -> tuple[float, float]:
    """Proven envelope for the limit of the defect term."""
    lo = 1.0 / (36.0 * math.sqrt(3.0 * (b + 1.0)))
    hi = (1.0 / 12.0) / math.sqrt(b + 1.0) * (2 * b + 3) / (2 * b + 2)
    return lo, hi


@dataclass(frozen=True)
class AsymptoticPoint:
    """Level parametrised by integer part v_k and fractional part b of sqrt."""

    v_k: int
    b: float

    @property
    def alpha(self) -> float:
        return (self.v_k + self.b) ** 2

    @property
    def a(self) -> float:
        r = (self.v_k + self.b) / math.sqrt(2)
        return r - math.floor(r)


def class_at(v_k: int, b: float) -> int:
    """Critical number whose interval contains (v_k + b)^2."""
    alpha = Fraction(v_k + Fraction(b).limit_denominator(10**6)) ** 2
    return class_of(alpha)


# ---------------------------------------------------------------------------
# the two unit-parameter limits
# ---------------------------------------------------------------------------

def alt_hamiltonian(x, y, sign: int) -> Fraction:
    """Piecewise-affine generator for the rotation-number-1/6 and -1/3 limits."""
    if sign == 1:
        return eval_P(x) + eval_P(Fraction(x) - Fraction(y)) + eval_P(y)
    if sign == -1:
        return (eval_P(x) + eval_P(Fraction(x) + Fraction(y)) + eval_P(y)) / 2
    raise ValueError("sign must be +1 or -1")


def alt_vector_field(x, y, sign: int) -> tuple[int, int]:
    fx, fy = math.floor(x), math.floor(y)
    if sign == 1:
        fd = math.floor(Fraction(x) - Fraction(y))
        fdneg = math.floor(Fraction(y) - Fraction(x))
        return (2 * (fy - fd), -2 * (fx - fdneg))
    if sign == -1:
        fs = math.floor(Fraction(x) + Fraction(y))
        return (fy + fs + 1, -(fx + fs + 1))
    raise ValueError("sign must be +1 or -1")
