import pytest

from qonsager.freealg import ANTIHOM, HOM, Alphabet, AlphabetMismatch, Morphism, NcPoly, bracket, compose, q_bracket_op
from qonsager.scalar import Q

AB = Alphabet(["A", "B"])
A, B = AB.gens()


def test_distribute_and_identity():
    one = NcPoly(AB, {(): 1})
    assert (A + B) * A == A * A + B * A
    assert A * one == A
    assert (A * B - A * B).is_zero()


def test_order_is_deglex_with_a_highest():
    assert AB.code("A") > AB.code("B")
    assert AB.order_description() == "deglex: A > B"


def test_brackets():
    assert bracket(A, A).is_zero()
    assert q_bracket_op(A, B) == Q * (A * B) - Q ** -1 * (B * A)
    assert (bracket(A, B) + bracket(B, A)).is_zero()


def test_alphabet_mismatch():
    other = Alphabet(["A", "C"])
    with pytest.raises(AlphabetMismatch):
        A * other.gen("A")


def test_antihom_reverses():
    rev = Morphism.identity(AB, ANTIHOM)
    assert rev.apply(A * A * B) == B * A * A


def test_variance_law():
    rev = Morphism.identity(AB, ANTIHOM)
    assert compose(rev, rev).variance == HOM
    swap = Morphism.from_images(AB, [B, A], HOM)
    assert compose(swap, rev).variance == ANTIHOM


def test_compose_applies_inner_first():
    f = Morphism.from_images(AB, [A * A, B], HOM)
    g = Morphism.from_images(AB, [B, A], HOM)
    assert compose(f, g).apply(A) == f.apply(g.apply(A)) == B


def test_apply_with_reduction_hook():
    f = Morphism.from_images(AB, [A * B, B], HOM)
    seen = []
    f.apply(A * A, reduce=lambda x: seen.append(x) or x)
    assert seen
