import math
import random
from fractions import Fraction

import pytest

import lattice_rotor as lr
from lattice_rotor import _engine as eng
from lattice_rotor import (
    IrregularOrbit, RotationParameter, check_equivariance,
    density_delta, in_Lambda, in_Sigma, in_X, phi_direct, phi_point,
    regular_domain_Xe, return_map_Phi, strip_map_Psi, symmetric_fixed_direct,
    symmetric_fixed_point_test, vertex_list,
)
from lattice_rotor.core_map import apply_F4
from lattice_rotor.hamiltonian import eval_hamiltonian, next_critical

LAM10 = RotationParameter(1, 10)


def test_in_lambda_examples():
    assert not in_Lambda((3, 3), LAM10)
    assert in_Lambda((9, 1), LAM10)
    assert apply_F4((9, 1), LAM10) == (10, 0)


def test_in_sigma():
    # a transition point two sites from a lattice corner, window is three
    assert in_Sigma((2, 0), LAM10)
    # transition points far from every corner are not in the window
    lam = RotationParameter(1, 200)
    z = (9 * 200 // 10, 100)          # mid-edge transition region
    # build an actual transition point nearby
    found = None
    for x in range(150, 260):
        for y in range(60, 140):
            if in_Lambda((x, y), lam) and not in_Sigma((x, y), lam):
                found = (x, y)
                break
        if found:
            break
    assert found is not None
    # and a non-transition point is never in the window
    assert not in_Sigma((3, 3), LAM10)


def test_strip_map_against_stepwise():
    lam = RotationParameter(1, 24)
    rng = random.Random(7)
    for _ in range(10**4):
        x = rng.randint(-240, 240)
        y = rng.randint(-240, 240)
        if (x, y) == (0, 0):
            continue
        (vx, vy), t = strip_map_Psi((x, y), lam, 1)
        assert (vx, vy, t) == eng.psi_stepwise(x, y, 1, 24, forward=True)
        (bx, by), tb = strip_map_Psi((x, y), lam, -1)
        assert (bx, by, tb) == eng.psi_stepwise(x, y, 1, 24, forward=False)


def test_strip_map_structure():
    lam = RotationParameter(1, 50)
    rng = random.Random(9)
    for _ in range(400):
        z = (rng.randint(1, 400), rng.randint(1, 400))
        if in_Lambda(z, lam):
            continue
        (vx, vy), t = strip_map_Psi(z, lam, 1)
        assert t >= 1
        m, n = eng.box_of(z[0], z[1], 1, 50)
        w = (2 * n + 1, -(2 * m + 1))
        assert (vx, vy) == (z[0] + t * w[0], z[1] + t * w[1])
        assert in_Lambda((vx, vy), lam)


def test_strip_map_inverse_on_transition_set():
    lam = RotationParameter(1, 50)
    rng = random.Random(13)
    checked = 0
    while checked < 300:
        z = (rng.randint(-500, 500), rng.randint(-500, 500))
        if z == (0, 0) or not in_Lambda(z, lam):
            continue
        fwd, t = strip_map_Psi(z, lam, 1)
        back, tb = strip_map_Psi(fwd, lam, -1)
        assert back == z and tb == t
        checked += 1
    with pytest.raises(ValueError):
        strip_map_Psi((0, 0), lam)


def test_phi_example():
    z, tau = phi_point((3, 3), LAM10)
    assert z == (3, 3) and tau == 25
    zd, taud = phi_direct((3, 3), LAM10)
    assert (zd, taud) == (z, tau)


@pytest.mark.parametrize("e", [1, 2, 4, 5, 9])
def test_phi_accelerated_equals_direct(e):
    lam = RotationParameter(1, 200)
    dom = regular_domain_Xe(e, lam)
    pts = sorted(dom.point_set)
    rng = random.Random(e)
    sample = pts if len(pts) <= 1000 else rng.sample(pts, 1000)
    d_cap = 4 * math.isqrt(next_critical(e)) + 12
    for z in sample:
        fast = phi_point(z, lam, e)
        slow = phi_direct(z, lam, d_cap=d_cap)
        assert fast == slow, f"e={e}, z={z}"


def test_return_orbit_record():
    lam = RotationParameter(1, 500)
    dom = regular_domain_Xe(9, lam)
    cls = dom.cls
    pts = sorted(dom.point_set)
    for z in pts[:: max(1, len(pts) // 40)]:
        orb = return_map_Phi(z, lam, 9)
        assert len(orb.vertices) == 2 * cls.k       # pre-vertex + quarter turn
        assert orb.tau % 4 == 1
        assert in_X(orb.result, lam)
        assert 0 <= orb.sigma[0] < 2 * cls.v1 + 1
        full_types = list(cls.vertex_list) + list(cls.vertex_list[-2::-1])
        for j, s in enumerate(orb.sigma[1:]):
            assert 0 <= s < 2 * full_types[j] + 1
        zz, tau = phi_direct(z, lam)
        assert (zz, tau) == (orb.result, orb.tau)


def test_vertex_kick_structure():
    """At each transition point the step is the source or entered box
    translation or their average: exact in the crossing coordinate, off by
    at most one site in the other, and determined by the code residue."""
    lam = RotationParameter(1, 500)
    for e in (2, 9):
        dom = regular_domain_Xe(e, lam)
        pts = sorted(dom.point_set)
        by_residue = {}
        for z in pts[:: max(1, len(pts) // 20)]:
            verts = eng.quarter_vertices(z[0], z[1], 1, 500, 2 * dom.cls.k - 1)
            for j, (vx, vy, bbefore, bafter) in enumerate(verts):
                x4, y4 = apply_F4((vx, vy), lam)
                v = (x4 - vx, y4 - vy)
                w_src = (2 * bbefore[1] + 1, -(2 * bbefore[0] + 1))
                w_ent = (2 * bafter[1] + 1, -(2 * bafter[0] + 1))
                avg = ((w_src[0] + w_ent[0]) // 2, (w_src[1] + w_ent[1]) // 2)
                assert v in (w_src, w_ent, avg)
                if bbefore[0] != bafter[0]:      # vertical line crossed
                    assert v[0] == w_src[0] == w_ent[0]
                else:
                    assert v[1] == w_src[1] == w_ent[1]
                from lattice_rotor.return_map import _code_vertex
                vtype, sigma, _ = _code_vertex(vx, vy, bbefore, bafter, 1, 500)
                key = (j, vtype, sigma)
                if key in by_residue:
                    assert by_residue[key] == v   # kick is a function of the code
                else:
                    by_residue[key] = v


def brute_force_regular(z, lam, e):
    """Regularity oracle straight from the definitions, by bare iteration."""
    p, q = lam.p, lam.q
    if in_Lambda(z, lam):
        return False
    nxt = next_critical(e)
    try:
        rz, tau = phi_direct(z, lam)
    except IrregularOrbit:
        return False                 # no well-defined return excursion
    if in_Lambda(rz, lam):
        return False
    x, y = z
    for _ in range(tau + 1):
        h = eval_hamiltonian(Fraction(p * x, q), Fraction(p * y, q))
        if not (e < h < nxt):
            return False
        if in_Lambda((x, y), lam) and in_Sigma((x, y), lam):
            return False
        x, y = p * x // q - y, x
    return True


def test_regular_domain_against_oracle():
    lam = RotationParameter(1, 20)
    dom = regular_domain_Xe(0, lam)
    # compare the per-point regularity to the direct-iteration oracle
    candidates = {pt.z for pt in dom.points} | {z for z, _ in dom.irregular}
    for z in sorted(candidates):
        ok, _ = lr.is_regular(z, lam, 0)
        assert ok == brute_force_regular(z, lam, 0), f"z={z}"
    # at this coarse parameter the corner windows trim both class ends
    assert dom.points and dom.irregular
    lo, hi = dom.interval
    assert 0 < lo < hi < 1


def test_regular_interval_growth():
    """The surviving interval fills the class as the parameter shrinks."""
    e = 9
    width = next_critical(e) - e
    ratios = {}
    for q in (100, 200, 400, 800):
        dom = regular_domain_Xe(e, RotationParameter(1, q))
        lo, hi = dom.interval
        ratios[q] = float((hi - lo) / width)
    assert ratios[400] > ratios[100]
    assert ratios[200] < ratios[400] < ratios[800]
    # frozen: the corner windows at this class eat exactly 80*lam per side
    assert ratios[800] == pytest.approx(0.825, abs=1e-12)


def test_irregular_points_near_boundary():
    """Irregular fibres hug the class boundary within a lam-proportional band."""
    e = 9
    width = next_critical(e) - e
    for q in (200, 400, 800):
        lam = RotationParameter(1, q)
        dom = regular_domain_Xe(e, lam)
        worst = Fraction(0)
        for z, _reason in dom.irregular:
            h = eval_hamiltonian(Fraction(z[0], q), Fraction(z[1], q))
            dist = min(h - e, e + width - h)
            worst = max(worst, dist)
        assert worst <= 81 * lam.value     # measured constant is exactly 80


def test_equivariance():
    rep = check_equivariance(1, RotationParameter(1, 500), sample_count=48)
    assert rep.ok and rep.pairs_checked == 48
    rep9 = check_equivariance(9, RotationParameter(1, 2000), sample_count=48)
    assert rep9.ok
    bad = check_equivariance(9, RotationParameter(1, 2000), sample_count=48,
                             q_override=176)
    assert not bad.ok and bad.counterexample is not None


@pytest.mark.parametrize("e", [1, 2, 4, 5, 9])
def test_orbit_codes_are_lattice_classes(e):
    """Exhaustive code/congruence duality over one fundamental domain."""
    lam = RotationParameter(1, 2000)
    from lattice_rotor.return_map import (_class, _fundamental_domain,
                                          find_density_anchor)
    cls = _class(e)
    anchor = find_density_anchor(e, lam)
    pts = _fundamental_domain(anchor, cls)
    codes = {}
    pairs = set()
    for z in pts:
        orb = return_map_Phi(z, lam, e)
        code = tuple(orb.sigma)
        assert code not in codes, "distinct classes shared a code"
        codes[code] = z
        pairs.add((orb.sigma[cls.k], orb.gamma[cls.k]))
    assert len(codes) == cls.q
    assert len(pairs) == cls.q        # one residue pair identifies the class
    # translated points share the full code
    W = 2 * cls.v1 + 1
    A = cls.q // W
    dom = regular_domain_Xe(e, lam).point_set
    shared = 0
    for z in pts[:: max(1, len(pts) // 16)]:
        for l in ((A, A), ((A - W) // 2, (A + W) // 2)):
            z2 = (z[0] + l[0], z[1] + l[1])
            if z2 in dom:
                c1 = tuple(return_map_Phi(z, lam, e).sigma)
                c2 = tuple(return_map_Phi(z2, lam, e).sigma)
                assert c1 == c2
                shared += 1
    assert shared > 0


def test_symmetric_code_criterion_against_direct():
    lam = RotationParameter(1, 1000)
    for e in (1, 2, 4, 5, 9, 10):
        dom = regular_domain_Xe(e, lam)
        for pt in dom.points:
            orb = return_map_Phi(pt.z, lam, e)
            assert symmetric_fixed_point_test(orb) == \
                symmetric_fixed_direct(pt.z, lam), f"e={e}, z={pt.z}"


def test_class_zero_all_symmetric_fixed():
    lam = RotationParameter(1, 50)
    dom = regular_domain_Xe(0, lam)
    assert dom.points
    for pt in dom.points:
        orb = return_map_Phi(pt.z, lam, 0)
        assert orb.is_fixed and orb.is_symmetric_fixed


def test_non_fixed_orbit_fails_test():
    lam = RotationParameter(1, 2000)
    dom = regular_domain_Xe(9, lam)
    non_fixed = None
    for pt in dom.points:
        orb = return_map_Phi(pt.z, lam, 9)
        if not orb.is_fixed:
            non_fixed = orb
            break
    assert non_fixed is not None
    assert not symmetric_fixed_point_test(non_fixed)


def test_densities():
    rep = density_delta(9, RotationParameter(1, 2000))
    assert rep.delta == Fraction(1, 35) == rep.formula
    assert rep.matches_formula and rep.coprimality_ok
    assert rep.delta <= rep.eta <= 1
    rep1 = density_delta(1, RotationParameter(1, 500))
    assert rep1.delta == Fraction(1, 3)
    assert not vertex_list(49).coprimality_ok
    assert vertex_list(52).coprimality_ok


def test_reversibility_of_phi():
    """Phi^-1 = Ge o Phi o Ge on regular points, via the return orbit."""
    lam = RotationParameter(1, 500)
    for e in (0, 1, 2, 4, 5, 8, 9, 10):
        dom = regular_domain_Xe(e, lam)
        cls = dom.cls
        W = 2 * cls.v1 + 1
        pts = dom.point_set

        def ge(z):
            return z if z[0] - z[1] == -W else (z[1], z[0])

        for z in sorted(pts)[:: max(1, len(pts) // 25)]:
            img, _ = phi_point(z, lam, e)
            back = ge(img)
            if back not in pts:
                continue
            out, _ = phi_point(back, lam, e)
            assert ge(out) == z, f"e={e}, z={z}"
