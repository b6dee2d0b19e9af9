import math
from fractions import Fraction

import pytest

from lattice_rotor import (
    RotationParameter, apply_F, apply_F4, apply_F_inverse,
    fourth_iterate_field_v, auxiliary_field_w, in_fix_G, in_fix_H,
    measure_field_agreement, orbit_period, recurrence_time, reversor_G,
    reversor_H,
)

LAM10 = RotationParameter(1, 10)
LAM23 = RotationParameter(2, 3)


def test_parameter_validation():
    with pytest.raises(ValueError):
        RotationParameter(4, 2)          # lambda = 2 not allowed
    with pytest.raises(ValueError):
        RotationParameter(-1, 3)
    lam = RotationParameter(2, 4)        # reduced to 1/2
    assert (lam.p, lam.q) == (1, 2)
    assert RotationParameter.parse("1/2^5").q == 32
    with pytest.raises(ValueError):
        RotationParameter.parse("0.5")


def test_apply_F_examples():
    assert apply_F((4, 1), LAM23) == (1, 4)
    assert apply_F((0, 5), LAM10) == (-5, 0)
    assert apply_F((0, 5), LAM23) == (-5, 0)
    assert apply_F((3, 3), LAM10) == (-3, 3)


def test_inverse_examples():
    z = apply_F((4, 1), LAM23)
    assert apply_F_inverse(z, LAM23) == (4, 1)
    assert apply_F_inverse((-3, 3), LAM10) == (3, 3)
    assert apply_F_inverse((0, 0), LAM10) == (0, 0)


def test_floor_division_is_toward_minus_infinity():
    # floor(lam * x) for negative x must round down, not toward zero
    assert apply_F((-1, 0), LAM10) == (-1, -1)
    assert apply_F((-10, 0), LAM10) == (-1, -10)


def test_reversors_and_fix_sets():
    assert reversor_G(reversor_G((7, -2))) == (7, -2)
    z = (13, -4)
    assert reversor_H(reversor_H(z, LAM10), LAM10) == z
    assert in_fix_H((0, 5), LAM10)
    assert in_fix_G((3, 3)) and not in_fix_G((3, 4))


@pytest.mark.parametrize("lam", [LAM10, LAM23, RotationParameter(1, 24)])
def test_involution_laws_exhaustive(lam):
    """G^2 = id, H^2 = id, F = H o G, F^-1 = G o F o G on a full window."""
    for x in range(-50, 51):
        for y in range(-50, 51):
            z = (x, y)
            assert reversor_G(reversor_G(z)) == z
            assert reversor_H(reversor_H(z, lam), lam) == z
            assert reversor_H(reversor_G(z), lam) == apply_F(z, lam)
            lhs = apply_F_inverse(z, lam)
            rhs = reversor_G(apply_F(reversor_G(z), lam))
            assert lhs == rhs
            assert apply_F_inverse(apply_F(z, lam), lam) == z


def test_period_formula_small_square():
    lam = RotationParameter(1, 50)
    for x in range(0, 12):
        for y in range(0, 12 - x):
            rec = orbit_period((x, y), lam)
            assert rec.period == 4 * (x + y) + 1
            assert rec.symmetric
            assert not rec.truncated


def test_orbit_examples():
    rec = orbit_period((1, 2), LAM10)
    assert rec.period == 13 and rec.symmetric
    assert rec.normalized_period == Fraction(13, 10)
    assert abs(rec.t_lambda - 13 / (10 * math.pi)) < 1e-15
    assert orbit_period((0, 0), LAM10).period == 1


def test_symmetric_orbit_witness_count():
    # symmetric periodic non-fixed orbits meet the symmetry sets exactly twice
    lam = RotationParameter(1, 50)
    for seed in [(1, 2), (3, 0), (5, 5), (9, 2), (14, 3)]:
        rec = orbit_period(seed, lam)
        assert rec.symmetric and len(rec.witnesses) == 2


def test_truncation_flag():
    rec = orbit_period((1, 2), LAM10, max_steps=5)
    assert rec.truncated and rec.period == 5


def abcd_field_oracle(z, lam):
    """Deviation of the fourth iterate via the round-off box labels.

    The four iterates land in boxes labelled by integers a, b, c, d built
    from ceilings and floors of the rescaled coordinates; the deviation is
    (a + c + 1, -(m + b + 1)) with m the seed's own box label.
    """
    x, y = z
    lamf = Fraction(lam.p, lam.q)
    m = math.floor(lamf * x)
    a = math.ceil(lamf * (y - m)) - 1
    b = math.ceil(lamf * (x + a + 1)) - 1
    c = math.floor(lamf * (y - m - b - 1))
    return (a + c + 1, -(m + b + 1))


def test_fourth_iterate_field():
    assert fourth_iterate_field_v((3, 3), LAM10) == (1, -1)
    assert fourth_iterate_field_v((3, 3), LAM10) == auxiliary_field_w((3, 3), LAM10)
    assert fourth_iterate_field_v((10, 5), LAM10) == abcd_field_oracle((10, 5), LAM10)
    for x in range(-25, 26, 3):
        for y in range(-25, 26, 2):
            v = fourth_iterate_field_v((x, y), LAM10)
            assert v == abcd_field_oracle((x, y), LAM10)
            # the deviation field never vanishes away from the origin
            if (x, y) != (0, 0):
                assert v != (0, 0)


def test_field_agreement_report():
    rep = measure_field_agreement(2, RotationParameter(1, 100))
    assert rep.mu1 >= Fraction(9, 10)
    assert rep.sample_count == 399 * 399 - 1
    # frozen from the exhaustive scan
    assert float(rep.mu1) == pytest.approx(0.9726256281407035, abs=1e-12)


def test_field_agreement_monotone_trend():
    mu_coarse = measure_field_agreement(2, RotationParameter(1, 100)).mu1
    mu_fine = measure_field_agreement(2, RotationParameter(1, 1000)).mu1
    assert mu_fine > mu_coarse


def test_field_agreement_numpy_matches_pure_python():
    lam = RotationParameter(1, 30)
    rep_np = measure_field_agreement(1, lam)
    # tiny window forces the pure-python route
    agree = 0
    total = 0
    bound = 29
    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            if (x, y) == (0, 0):
                continue
            total += 1
            if fourth_iterate_field_v((x, y), lam) == auxiliary_field_w((x, y), lam):
                agree += 1
    assert rep_np.mu1 == Fraction(agree, total)
    assert rep_np.sample_count == total


def test_field_agreement_budget_guard():
    with pytest.raises(MemoryError):
        measure_field_agreement(2, RotationParameter(1, 1000), max_points=1000)


def test_recurrence_time():
    assert abs(recurrence_time(LAM10) - 10 * math.pi) <= 5
    assert abs(recurrence_time(RotationParameter(1, 5000)) - 5000 * math.pi) <= 5
    for q in (3, 7, 10, 400):
        assert recurrence_time(RotationParameter(1, q)) > 4
    assert LAM10.t_star == recurrence_time(LAM10)
