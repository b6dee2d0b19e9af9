"""Integer kernels for strip-map transit and the accelerated return map.

Everything here works on the unscaled lattice Z^2 with an exact rational
parameter lam = p/q, so floor(lam*x) = (p*x)//q and the rescaled point is
lam*z.  A point's box is (m, n) = ((p*x)//q, (p*y)//q); inside a box the
fourth iterate of the rotation acts as translation by

    w = (2n + 1, -(2m + 1))     (lattice units).

That translation law is only guaranteed while the smallness bound

    (2*max(|m|, |n|) + 3) * p < q

holds, which also makes every box wider than the step w; the kernels
check the bound on every box they touch and refuse to accelerate beyond
it.  Under the bound, straight-line transit arithmetic is bit-identical
to stepping the map, and transition points (where the fourth iterate
changes box) occur only on the downstream side of each box.

Transit kicks across a transition point are never predicted: they are
evaluated by applying the map itself, so results are exact whatever the
local deviation field does.
"""

from __future__ import annotations


class GuardViolation(Exception):
    """lam is not small enough to accelerate through the requested region."""


class IrregularOrbit(Exception):
    """The orbit left the structure expected of its polygon class."""


class EscapeError(Exception):
    """A closure or scan left its class domain; retry with smaller lam."""


def f4(x, y, p, q):
    for _ in range(4):
        x, y = p * x // q - y, x
    return x, y


def f4_inv(x, y, p, q):
    for _ in range(4):
        x, y = y, p * y // q - x
    return x, y


def box_of(x, y, p, q):
    return p * x // q, p * y // q


def in_lambda(x, y, p, q):
    """Transition test: does the fourth iterate change box?"""
    m, n = p * x // q, p * y // q
    x4, y4 = f4(x, y, p, q)
    return (p * x4 // q, p * y4 // q) != (m, n)


def guard_ok(m, n, p, q):
    a = -m if m < 0 else m
    b = -n if n < 0 else n
    big = a if a > b else b
    return (2 * big + 3) * p < q


def _require_guard(m, n, p, q):
    if not guard_ok(m, n, p, q):
        raise GuardViolation(
            f"box ({m},{n}) too far out for lam={p}/{q}: "
            f"need (2*{max(abs(m), abs(n))}+3)*{p} < {q}")


def q_times_P(x, p, q):
    """q * P(lam * x): exact integer form of the generating function."""
    m = p * x // q
    return q * m * m + (2 * m + 1) * (p * x - m * q)


def q_times_H(x, y, p, q):
    """q * (P(lam*x) + P(lam*y)), the level value times q."""
    return q_times_P(x, p, q) + q_times_P(y, p, q)


def psi_once(x, y, p, q):
    """One strip-map application: the next transition point, transit >= 1.

    Applies the true fourth iterate once (the kick, exact by evaluation),
    then accelerates in a straight line to the last point of the box; that
    landing point is a transition point by construction.
    """
    x, y = f4(x, y, p, q)
    t = 1
    if in_lambda(x, y, p, q):
        return x, y, t
    m, n = p * x // q, p * y // q
    _require_guard(m, n, p, q)
    wx = 2 * n + 1
    wy = -(2 * m + 1)
    if wx > 0:
        jx = ((-((-(m + 1) * q) // p) - 1) - x) // wx
    else:
        jx = (x - (-((-m * q) // p))) // -wx
    if wy > 0:
        jy = ((-((-(n + 1) * q) // p) - 1) - y) // wy
    else:
        jy = (y - (-((-n * q) // p))) // -wy
    j = jx if jx < jy else jy
    if j > 0:
        x += j * wx
        y += j * wy
        t += j
    return x, y, t


def psi_once_backward(x, y, p, q):
    """Strip-map transit under the inverse fourth iterate, transit >= 1."""
    x, y = f4_inv(x, y, p, q)
    t = 1
    if in_lambda(x, y, p, q):
        return x, y, t
    m, n = p * x // q, p * y // q
    _require_guard(m, n, p, q)
    wx = 2 * n + 1
    wy = -(2 * m + 1)
    # walking against w: approach the upstream walls
    if wx > 0:
        jx = (x - (-((-m * q) // p))) // wx
    else:
        jx = ((-((-(m + 1) * q) // p) - 1) - x) // -wx
    if wy > 0:
        jy = (y - (-((-n * q) // p))) // wy
    else:
        jy = ((-((-(n + 1) * q) // p) - 1) - y) // -wy
    j = jx if jx < jy else jy
    if j > 0:
        x -= j * wx
        y -= j * wy
        t += j
    # one exact inverse step crosses onto the transition strip upstream
    x, y = f4_inv(x, y, p, q)
    t += 1
    if not in_lambda(x, y, p, q):
        raise IrregularOrbit("backward transit did not land on a transition point")
    return x, y, t


def psi_stepwise(x, y, p, q, forward=True, cap=10**7):
    """Reference strip map by naked stepping (the acceleration oracle)."""
    step = f4 if forward else f4_inv
    t = 0
    while t < cap:
        x, y = step(x, y, p, q)
        t += 1
        if in_lambda(x, y, p, q):
            return x, y, t
    raise IrregularOrbit("stepwise transit exceeded the cap")


def true_in_X(x, y, p, q):
    """Membership in the return domain, by the defining distance comparisons."""
    if x < 0 or y < 0:
        return False
    d = x - y if x >= y else y - x
    x4, y4 = f4(x, y, p, q)
    d4 = x4 - y4 if x4 >= y4 else y4 - x4
    if d > d4:
        return False
    xb, yb = f4_inv(x, y, p, q)
    db = xb - yb if xb >= yb else yb - xb
    return d < db


def phi_fast(x0, y0, p, q, v1, k, qlo, qhi):
    """Accelerated first return to the symmetry strip, minimal bookkeeping.

    The caller pins the polygon class: v1 and k from its vertex list and
    the open level interval (qlo, qhi) in q-scaled integer form.  Returns
    (x, y, tau).  Structure violations raise IrregularOrbit; a final point
    outside the class interval raises EscapeError.
    """
    W = 2 * v1 + 1
    twoW = 2 * W
    x, y = p * x0 // q - y0, x0      # quadrant step
    nf4 = 0
    for _ in range(2 * k - 1):
        # inline psi_once
        for _ in range(4):
            x, y = p * x // q - y, x
        nf4 += 1
        m = p * x // q
        n = p * y // q
        a = -m if m < 0 else m
        b = -n if n < 0 else n
        if (2 * (a if a > b else b) + 3) * p >= q:
            raise GuardViolation(f"box ({m},{n}) too far out for lam={p}/{q}")
        wx = 2 * n + 1
        wy = -(2 * m + 1)
        if wx > 0:
            jx = ((-((-(m + 1) * q) // p) - 1) - x) // wx
        else:
            jx = (x - (-((-m * q) // p))) // -wx
        if wy > 0:
            jy = ((-((-(n + 1) * q) // p) - 1) - y) // wy
        else:
            jy = (y - (-((-n * q) // p))) // -wy
        j = jx if jx < jy else jy
        if j > 0:
            x += j * wx
            y += j * wy
            nf4 += j
    # final kick into the diagonal box, then reduce into the window
    for _ in range(4):
        x, y = p * x // q - y, x
    nf4 += 1
    if p * x // q != v1 or p * y // q != v1:
        raise IrregularOrbit(
            f"return edge missed the diagonal box: seed ({x0},{y0})")
    d = x - y
    j = -((W + d) // twoW)
    if j < 0:
        raise IrregularOrbit(f"return edge overshot the strip: seed ({x0},{y0})")
    if j:
        x += j * W
        y -= j * W
        nf4 += j
    if x < 0 or y < 0:
        raise IrregularOrbit(f"return point left the first quadrant: ({x}, {y})")
    h = q_times_P(x, p, q) + q_times_P(y, p, q)
    if not qlo < h < qhi:
        raise EscapeError(f"return point left the class interval: ({x}, {y})")
    return x, y, 1 + 4 * nf4


def quarter_vertices(x0, y0, p, q, count):
    """Transition points of one quarter-turn starting at a seed (no map step).

    Used for regularity scans: yields (x, y, box_before, box_after) for
    `count` successive strip-map applications of the seed itself.
    """
    x, y = x0, y0
    out = []
    for _ in range(count):
        x, y, _ = psi_once(x, y, p, q)
        bx, by = box_of(x, y, p, q)
        x4, y4 = f4(x, y, p, q)
        out.append((x, y, (bx, by), (p * x4 // q, p * y4 // q)))
    return out


def phi_direct(x0, y0, p, q, cap, d_cap=None):
    """First return by bare iteration of the map (the acceleration oracle).

    d_cap, when given, must exceed half the diagonal-distance change of the
    fourth iterate over every box the orbit can meet (e.g. 4*vmax + 12 for
    an orbit confined to boxes of index at most vmax); membership is then
    only evaluated within that margin of the symmetry line, which keeps
    the oracle usable at very small lam without changing its answer.
    """
    x, y = x0, y0
    if d_cap is None:
        for t in range(1, cap + 1):
            x, y = p * x // q - y, x
            if x >= 0 and y >= 0 and true_in_X(x, y, p, q):
                return x, y, t
    else:
        for t in range(1, cap + 1):
            x, y = p * x // q - y, x
            if x >= 0 and y >= 0:
                d = x - y
                if -d_cap <= d <= d_cap and true_in_X(x, y, p, q):
                    return x, y, t
    raise IrregularOrbit(f"no return within {cap} steps from ({x0},{y0})")
