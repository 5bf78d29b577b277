import random

import pytest

from qonsager import onsager
from qonsager.engine import PROVED, Presentation, Prover, ReplayError, complete, normal_form_basis, replay_json
from qonsager.engine.rewrite import RewriteSystem
from qonsager.freealg import HOM, Morphism, NcPoly
from qonsager.scalar import Q, q_bracket

AB = onsager.ALPHABET
A, B = AB.gens()
W = AB.word


@pytest.fixture(scope="module")
def rs4():
    return complete(onsager.onsager_presentation(), 4)


def _tail(rs: RewriteSystem, lead) -> NcPoly:
    rule = rs.lead_index[lead]
    return NcPoly(AB, dict(rule.tail))


def test_bound4_leading_words(rs4):
    # brute force: the largest of the degree-4 words of each relation under deglex
    expected = set()
    for rel in onsager.onsager_presentation().relations:
        expected.add(max((w for w in rel.terms if len(w) == 4), key=lambda w: (len(w), w)))
    assert expected == {W("A", "A", "A", "B"), W("A", "B", "B", "B")}
    assert {r.lead for r in rs4.rules} == expected


def test_empty_presentation():
    assert complete(Presentation.build(AB, []), 6).rules == []


def test_bound6_resolves_overlap(rs4):
    # AAAB.BB and AA.ABBB overlap in AAABBB; subtracting the two one-step reductions
    left = _tail(rs4, W("A", "A", "A", "B")) * B * B
    right = A * A * _tail(rs4, W("A", "B", "B", "B"))
    diff = rs4.reduce(left - right)
    assert not diff.is_zero()
    rs6 = complete(onsager.onsager_presentation(), 6)
    assert len(rs6.rules) > 2
    assert rs6.reduce(diff).is_zero()
    assert diff.leading_word() in rs6.lead_index


def test_reduce_first_relation(rs4):
    expected = (q_bracket(3) * (A * A * B * A) - q_bracket(3) * (A * B * A * A) + B * A * A * A
                + (Q ** 2 - Q ** -2) ** 2 * (B * A - A * B))
    assert rs4.reduce(A * A * A * B) == expected


def test_reduce_trivial(rs4):
    assert rs4.reduce(NcPoly(AB)).is_zero()
    assert rs4.reduce(B * A) == B * A


def test_basis_low_degrees(oq):
    rs = oq.rewrite_system
    assert normal_form_basis(rs, 0) == [()]
    assert [AB.render_word(w) for w in normal_form_basis(rs, 1)] == ["A", "B"]


def test_basis_degree4_by_subword_scan(oq):
    rs = oq.rewrite_system
    leads = [r.lead for r in rs.rules]
    words = [tuple(random_word) for random_word in _all_words(4)]
    expected = [w for w in words if not any(_contains(w, l) for l in leads)]
    got = normal_form_basis(rs, 4)
    assert sorted(got) == sorted(expected)
    assert len(got) == 14


def _all_words(n):
    if n == 0:
        yield ()
        return
    for w in _all_words(n - 1):
        for c in range(2):
            yield w + (c,)


def _contains(w, sub):
    return any(w[i:i + len(sub)] == sub for i in range(len(w) - len(sub) + 1))


def test_basis_beyond_bound(rs4):
    with pytest.raises(ValueError):
        normal_form_basis(rs4, 6)


def test_literal_equality_has_empty_witness(oq):
    v = oq.prover.prove_equal(A * B, A * B)
    assert v.status == PROVED and v.witness_kind == "empty"
    assert v.replay()


def test_lemma_qcom_certificate():
    d = (Q - Q ** -1) * (Q ** 2 - Q ** -2)
    T0 = onsager.onsager_morphisms()["T0"]
    p = onsager.onsager_presentation()
    x = T0.apply(Q * (B * A) - Q ** -1 * (A * B))
    y = Q * (A * B) - Q ** -1 * (B * A)
    # one-term certificate on the first relation
    assert x - y == (-1 / d) * p.relations[0]
    assert x - y != (1 / d) * p.relations[0]


@pytest.mark.parametrize("engine", ["rewrite", "certificate", "both"])
def test_engines_prove_lemma_qcom(oq, engine):
    prover = Prover(oq.presentation, oq.rewrite_system, 8, engine)
    T0 = oq.morphisms["T0"]
    v = prover.prove_equal(T0.apply(Q * (B * A) - Q ** -1 * (A * B)), Q * (A * B) - Q ** -1 * (B * A))
    assert v.status == PROVED
    assert v.replay(relations=[r.render() for r in oq.presentation.relations])


def test_well_defined_S_and_T0(oq):
    for name in ("S", "T0"):
        verdicts = oq.prover.well_defined(oq.morphisms[name])
        assert [label for label, _ in verdicts] == ["dg1", "dg2"]
        assert all(v.status == PROVED and v.replay() for _, v in verdicts)


def test_collapsing_hom_is_well_defined(oq):
    m = Morphism.from_images(AB, [A, A], HOM)
    assert m.apply(oq.presentation.relations[0]).is_zero()
    assert all(v.status == PROVED for _, v in oq.prover.well_defined(m))


def test_tampered_witness_fails_replay(oq):
    T0 = oq.morphisms["T0"]
    v = oq.prover.prove_equal(T0.apply(Q * (B * A) - Q ** -1 * (A * B)), Q * (A * B) - Q ** -1 * (B * A))
    text = v.witness_json()
    wrong_target = (v.target + A).render()
    assert replay_json(text, v.target.render())
    assert not replay_json(text, wrong_target)


def test_pinned_relations_must_match(oq):
    v = oq.prover.prove_zero(onsager.qdg(A, B))
    assert v.replay(relations=[r.render() for r in oq.presentation.relations])
    bogus = [(r + A * B).render() for r in oq.presentation.relations]
    with pytest.raises(ReplayError):
        v.replay(relations=bogus)


def test_random_reduction_matches(oq):
    rng = random.Random(7)
    x = onsager.qdg(A, B) * B + A * A * A * B * B * B
    rs = oq.rewrite_system
    assert rs.reduce_random(x, rng) == rs.reduce(x)
