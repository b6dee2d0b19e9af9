"""Exact round-off rotation on the integer lattice.

The map under study is

    F : Z^2 -> Z^2,   F(x, y) = (floor(lam * x) - y, x),   0 < lam < 2,

with lam an exact rational p/q, so that floor(lam * x) is the floor
division (p * x) // q (toward minus infinity).  F is invertible and
reversible: it factors as H o G with the involutions

    G(x, y) = (y, x)          H(x, y) = (floor(lam * y) - x, y).

All orbits are observed to be periodic; iteration here is exact on
unbounded Python integers, with a configurable step cap so that a
failure to close within the cap is reported, never misread as
aperiodicity.

Every fourth iterate of F is close to the identity: the deviation
F^4(z) - z is an integer vector which, off a sparse transition set,
equals the auxiliary field

    w(lam * z) = (2*floor(lam*y) + 1, -(2*floor(lam*x) + 1)).

`measure_field_agreement` quantifies that agreement exactly over a
square window of the rescaled lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

DEFAULT_STEP_CAP = 10**9

LatticePoint = tuple[int, int]


def _parse_lambda_text(text: str) -> tuple[int, int]:
    """Parse 'p/q' or '1/2^k' into an integer pair (p, q)."""
    s = text.strip()
    if "/" not in s:
        raise ValueError(f"lambda must be an exact fraction 'p/q', got {text!r}")
    num, den = s.split("/", 1)
    num = num.strip()
    den = den.strip()
    if not num.lstrip("+-").isdigit():
        raise ValueError(f"non-integer numerator in {text!r}")
    if "^" in den:
        base, exp = den.split("^", 1)
        if base.strip() != "2" or not exp.strip().isdigit():
            raise ValueError(f"only '1/2^k' power form is accepted, got {text!r}")
        return int(num), 2 ** int(exp)
    if not den.isdigit():
        raise ValueError(f"non-integer denominator in {text!r}")
    return int(num), int(den)


@dataclass(frozen=True)
class RotationParameter:
    """Exact rotation parameter lam = p/q in lowest terms, 0 < lam < 2."""

    p: int
    q: int

    def __post_init__(self):
        if self.q <= 0 or self.p <= 0:
            raise ValueError("lambda must be positive")
        if math.gcd(self.p, self.q) != 1:
            g = math.gcd(self.p, self.q)
            object.__setattr__(self, "p", self.p // g)
            object.__setattr__(self, "q", self.q // g)
        if not self.p < 2 * self.q:
            raise ValueError("lambda must satisfy 0 < lambda < 2")

    @classmethod
    def parse(cls, text: str) -> "RotationParameter":
        return cls(*_parse_lambda_text(text))

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def nu(self) -> float:
        """Rotation number of the unrounded rotation, arccos(lam/2)/2pi."""
        return math.acos(self.p / self.q / 2.0) / (2.0 * math.pi)

    @property
    def t_star(self) -> int:
        """First-order recurrence time (direct-search minimiser)."""
        return recurrence_time(self)

    def floor_mul(self, t: int) -> int:
        """floor(lam * t), exact."""
        return (self.p * t) // self.q

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def as_parameter(lam) -> RotationParameter:
    if isinstance(lam, RotationParameter):
        return lam
    if isinstance(lam, Fraction):
        return RotationParameter(lam.numerator, lam.denominator)
    if isinstance(lam, str):
        return RotationParameter.parse(lam)
    raise TypeError(f"cannot interpret {lam!r} as a rotation parameter")


def apply_F(z: LatticePoint, lam: RotationParameter) -> LatticePoint:
    """One step of the round-off rotation."""
    x, y = z
    return (lam.p * x // lam.q - y, x)


def apply_F_inverse(z: LatticePoint, lam: RotationParameter) -> LatticePoint:
    x, y = z
    return (y, lam.p * y // lam.q - x)


def apply_F4(z: LatticePoint, lam: RotationParameter) -> LatticePoint:
    """Fourth iterate, the near-identity secondary step."""
    p, q = lam.p, lam.q
    x, y = z
    for _ in range(4):
        x, y = p * x // q - y, x
    return (x, y)


def apply_F4_inverse(z: LatticePoint, lam: RotationParameter) -> LatticePoint:
    p, q = lam.p, lam.q
    x, y = z
    for _ in range(4):
        x, y = y, p * y // q - x
    return (x, y)


def reversor_G(z: LatticePoint) -> LatticePoint:
    x, y = z
    return (y, x)


def reversor_H(z: LatticePoint, lam: RotationParameter) -> LatticePoint:
    x, y = z
    return (lam.p * y // lam.q - x, y)


def in_fix_G(z: LatticePoint) -> bool:
    return z[0] == z[1]


def in_fix_H(z: LatticePoint, lam: RotationParameter) -> bool:
    x, y = z
    return 2 * x == lam.p * y // lam.q


@dataclass
class OrbitRecord:
    """Outcome of iterating F from a seed until first return (or cap)."""

    seed: LatticePoint
    period: int
    normalized_period: Fraction  # lam * T; the true T_lam is this over pi
    symmetric: bool
    witnesses: list[LatticePoint]
    truncated: bool

    @property
    def t_lambda(self) -> float:
        return float(self.normalized_period) / math.pi


def orbit_period(z: LatticePoint, lam: RotationParameter,
                 max_steps: int = DEFAULT_STEP_CAP) -> OrbitRecord:
    """Iterate F until first return to the seed, watching the symmetry sets.

    Witnesses are collected on the fly: a symmetric periodic orbit that is
    not a fixed point meets Fix G union Fix H exactly twice, so at most two
    witnesses are recorded.  If the cap is hit the record is marked
    truncated and the period field holds the number of steps taken.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    p, q = lam.p, lam.q
    x0, y0 = z
    witnesses = []
    if x0 == y0:
        witnesses.append((x0, y0))
    elif 2 * x0 == p * y0 // q:
        witnesses.append((x0, y0))
    x, y = p * x0 // q - y0, x0
    steps = 1
    while (x, y) != (x0, y0):
        if len(witnesses) < 2:
            if x == y or 2 * x == p * y // q:
                witnesses.append((x, y))
        if steps >= max_steps:
            return OrbitRecord(seed=z, period=steps,
                               normalized_period=Fraction(p * steps, q),
                               symmetric=bool(witnesses), witnesses=witnesses,
                               truncated=True)
        x, y = p * x // q - y, x
        steps += 1
    return OrbitRecord(seed=z, period=steps,
                       normalized_period=Fraction(p * steps, q),
                       symmetric=bool(witnesses), witnesses=witnesses,
                       truncated=False)


def fourth_iterate_field_v(z: LatticePoint, lam: RotationParameter) -> tuple[int, int]:
    """F^4(z) - z in lattice units (the rescaled discrete field over lam)."""
    x4, y4 = apply_F4(z, lam)
    return (x4 - z[0], y4 - z[1])


def auxiliary_field_w(z: LatticePoint, lam: RotationParameter) -> tuple[int, int]:
    """The auxiliary field at the rescaled point lam*z, in lattice units."""
    x, y = z
    return (2 * (lam.p * y // lam.q) + 1, -(2 * (lam.p * x // lam.q) + 1))


@dataclass
class FieldAgreementReport:
    """Fraction of a square window where F^4 - id matches the auxiliary field."""

    r: Fraction
    lam: RotationParameter
    mu1: Fraction
    sample_count: int


def measure_field_agreement(r, lam: RotationParameter,
                            max_points: int = 10**8) -> FieldAgreementReport:
    """Exhaustively scan the window ||lam*z||_inf < r, excluding the origin.

    The origin is excluded (its fourth-iterate deviation is zero while the
    auxiliary field is not).  mu1 is the exact rational fraction of scanned
    points where the two fields agree.  A numpy path is used when the
    intermediate values provably fit in int64; otherwise pure Python
    integers are used.
    """
    r = Fraction(r)
    if r <= 0:
        raise ValueError("r must be positive")
    lam_f = Fraction(lam.p, lam.q)
    # largest integer x with |x| * lam < r
    bound = (r.numerator * lam.q - 1) // (r.denominator * lam.p)
    if bound < 0:
        return FieldAgreementReport(r=r, lam=lam, mu1=Fraction(0), sample_count=0)
    side = 2 * bound + 1
    total = side * side - 1
    if total > max_points:
        raise MemoryError(
            f"window holds {total} points, above the budget of {max_points}")

    agree = 0
    try:
        import numpy as np
        can_vectorize = (lam.p * (4 * bound + 8) < 2**62)
    except ImportError:  # pragma: no cover
        can_vectorize = False

    if can_vectorize and total > 4096:
        xs = np.arange(-bound, bound + 1, dtype=np.int64)
        p = np.int64(lam.p)
        q = np.int64(lam.q)
        for y0 in range(-bound, bound + 1):
            x, y = xs, np.full_like(xs, y0)
            wx = 2 * ((p * y) // q) + 1
            wy = -(2 * ((p * x) // q) + 1)
            for _ in range(4):
                x, y = (p * x) // q - y, x
            ok = (x - xs == wx) & (y - y0 == wy)
            if y0 == 0:
                ok[bound] = False  # origin excluded
            agree += int(np.count_nonzero(ok))
    else:
        p, q = lam.p, lam.q
        for y0 in range(-bound, bound + 1):
            for x0 in range(-bound, bound + 1):
                if x0 == 0 and y0 == 0:
                    continue
                wx = 2 * (p * y0 // q) + 1
                wy = -(2 * (p * x0 // q) + 1)
                x, y = x0, y0
                for _ in range(4):
                    x, y = p * x // q - y, x
                if x - x0 == wx and y - y0 == wy:
                    agree += 1
    return FieldAgreementReport(r=r, lam=lam, mu1=Fraction(agree, total),
                                sample_count=total)


@lru_cache(maxsize=None)
def _recurrence_time_pq(p: int, q: int) -> int:
    nu = math.acos(p / q / 2.0) / (2.0 * math.pi)
    def dist(x):
        k = round(x)
        if k < 1:
            k = 1
        return abs(x - k)
    target = dist(4 * nu)
    k = 5
    while dist(k * nu) > target:
        k += 1
    return k


def recurrence_time(lam: RotationParameter) -> int:
    """Next time of closest approach to the identity after t = 4.

    Direct search for the least k > 4 whose rotation phase k*nu is at
    least as close to an integer as 4*nu is; asymptotically pi/lam + O(1).
    """
    return _recurrence_time_pq(lam.p, lam.q)
