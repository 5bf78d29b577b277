import pytest

from qonsager.scalar import ONE, Q, ZERO, LaurentPoly, ModularPoint, Scalar, ScalarZeroDivision, eval_mod, q_bracket


def test_difference_of_squares():
    assert (Q - Q ** -1) * (Q + Q ** -1) == Q ** 2 - Q ** -2


def test_cancellation_to_canonical_form():
    x = (Q ** 2 - Q ** -2) ** 2 / ((Q - Q ** -1) * (Q ** 2 - Q ** -2))
    assert x == Q + Q ** -1
    assert x.render() == (Q + Q ** -1).render()


def test_equal_values_share_representation():
    a = (Q ** 3 - 1) / (Q - 1)
    b = Q ** 2 + Q + 1
    assert a == b and hash(a) == hash(b)


def test_division_by_zero():
    with pytest.raises(ScalarZeroDivision):
        ONE / ZERO
    with pytest.raises(ScalarZeroDivision):
        (Q - Q) ** -1


@pytest.mark.parametrize("n, expected", [(0, ZERO), (1, ONE), (2, Q + Q ** -1), (3, Q ** 2 + 1 + Q ** -2)])
def test_q_bracket(n, expected):
    assert q_bracket(n) == expected


def test_q_bracket_is_quotient():
    for n in range(1, 8):
        assert q_bracket(n) == (Q ** n - Q ** -n) / (Q - Q ** -1)


def test_eval_mod_oracle():
    # 2^2 + 1 + 2^-2 mod 101 with 2^-1 = 51, 2^-2 = 51^2 = 76, so 4 + 1 + 76 = 81
    pt = ModularPoint(101, 2)
    assert pow(2, -2, 101) == 76
    assert eval_mod(Q ** 2 + 1 + Q ** -2, pt) == 81


def test_eval_mod_zero_and_pole():
    assert eval_mod(ZERO, ModularPoint(101, 2)) == 0
    # q = -1 satisfies q = q^-1, so q - q^-1 vanishes there
    pt = ModularPoint(101, 100, order_bound=0)
    assert eval_mod(ONE / (Q - Q ** -1), pt) is None


def test_modular_point_rejects_small_order():
    with pytest.raises(ValueError):
        ModularPoint(101, 100)
    with pytest.raises(ValueError):
        ModularPoint(100, 3)


def test_laurent_coefficients():
    x = Scalar.from_laurent({-2: 1, 0: 1, 2: 1})
    assert x == q_bracket(3)
    assert isinstance(LaurentPoly({1: 2}), LaurentPoly)


def test_rational_constants():
    assert Scalar(3) / Scalar(6) == Scalar(1) / 2
    assert Scalar(0).is_zero()
