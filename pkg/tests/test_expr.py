import pytest

from qonsager.expr import ExprError, parse_ast, parse_expr, parse_scalar, render_ast
from qonsager.freealg import Alphabet, bracket, q_bracket_op
from qonsager.scalar import Q

AB = Alphabet(["A", "B"])
A, B = AB.gens()


def test_precedence():
    assert parse_expr("A + B*A^2", AB) == A + B * A * A
    assert parse_expr("-A^2", AB) == -(A * A)
    assert parse_expr("q^-1*B*A", AB) == Q ** -1 * (B * A)


def test_brackets():
    assert parse_expr("[A, B]", AB) == bracket(A, B)
    assert parse_expr("[A, B]_q", AB) == q_bracket_op(A, B)
    assert parse_expr("[A, B]_q", AB) == Q * (A * B) - Q ** -1 * (B * A)


def test_scalar_division():
    assert parse_expr("(A*B - B*A) / (q - q^-1)", AB) == (A * B - B * A) / (Q - Q ** -1)
    assert parse_scalar("(q^2-q^-2)^2 / (q^2-q^-2)") == Q ** 2 - Q ** -2


def test_division_by_polynomial_rejected():
    with pytest.raises(ExprError):
        parse_expr("A / B", AB)


def test_error_position():
    with pytest.raises(ExprError) as info:
        parse_expr("A +\n  * B", AB)
    assert info.value.line == 2


def test_unknown_name_suggests():
    with pytest.raises(ExprError) as info:
        parse_expr("AA*B", AB)
    assert "AA" in str(info.value)


def test_render_round_trip():
    x = q_bracket_op(A, B) * A - (B * B) / (Q ** 2 - Q ** -2) + 3
    assert parse_expr(x.render(), AB) == x


def test_ast_round_trip():
    src = "[A, B]_q * A - 2*q^-1*(B + A)"
    assert parse_expr(render_ast(parse_ast(src)), AB) == parse_expr(src, AB)
