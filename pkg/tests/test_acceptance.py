"""Acceptance criteria, one test per criterion.

Each test is tagged with ``criterion(n)``; the terminal summary prints one
line per criterion.  Criteria 2 and 4 are stated literally and are expected
to fail (strict xfail): the literal statements are false for the algebra as
presented.  Their companion tests check what does hold.
"""

import time
from collections import Counter

import pytest

from qonsager import current as cur
from qonsager import onsager as ons
from qonsager.engine import INCONCLUSIVE, PROVED
from qonsager.groups import check_translations
from qonsager.report import EVIDENCE, PASS, run_checks

import engine_laws as laws


@pytest.fixture(scope="module")
def oq_timed():
    start = time.perf_counter()
    ctx = ons.build_onsager(8, 8)
    return ctx, time.perf_counter() - start


@pytest.fixture(scope="module")
def s2(oq_timed):
    ctx, build = oq_timed
    start = time.perf_counter()
    report = ons.verify_section2(ctx)
    return report, build + time.perf_counter() - start


@pytest.fixture(scope="module")
def aq3():
    return cur.build_current(3, 4, 6)


@pytest.fixture(scope="module")
def s3(aq3):
    start = time.perf_counter()
    report = run_checks(cur.section3_checks(aq3, ("Omega", "S")))
    return report, time.perf_counter() - start


@pytest.fixture(scope="module")
def t0_verdicts(aq3):
    return aq3.well_definedness("T0")


@pytest.fixture(scope="module")
def elim(aq3):
    return run_checks(cur.elimination_checks(aq3, recursion_bound=6, quotient_bound=2))


@pytest.fixture(scope="module")
def s4(aq3):
    return run_checks(cur.section4_checks(aq3))


def _fail_lines(report):
    return [f"{r.id}: {r.status}" for r in report.failures()]


@pytest.mark.criterion(1)
def test_c1_onsager_suite(s2):
    report, seconds = s2
    required = ["O_q.lemma-qcom.T0", "O_q.lemma-qcom.T1", "O_q.lemma-STS.T0.on-A", "O_q.lemma-STS.T1.on-B",
                "O_q.thm-z3.actA-on-C", "O_q.thm-z3.actC-on-C", "O_q.thm-z3.part1.a-alt.on-A",
                "O_q.involution.c.on-B", "O_q.inverse.T0-T0inv.on-B", "O_q.inverse.T1-T1inv.on-A"]
    for cid in required:
        assert report[cid].status == PROVED, cid
    assert all(r.status == PROVED for r in report), _fail_lines(report)
    assert sum(1 for r in report if r.id.startswith("O_q.thm-z3.act")) == 9
    assert seconds < 60


@pytest.mark.criterion(2)
@pytest.mark.xfail(strict=True, reason="qdg(B, C) lies in the ideal; the obstruction is qdg(C, B)")
def test_c2_note_counterexample_literal(oq):
    v = ons.check_note_counterexample(oq)
    assert v.status == INCONCLUSIVE
    assert v.remainder is not None and not v.remainder.is_zero()


@pytest.mark.criterion(2)
def test_c2_note_pair_fails_relations(oq):
    bc, cb = ons.check_note_pair(oq)
    assert bc.status == PROVED and bc.replay(relations=[r.render() for r in oq.presentation.relations])
    assert cb.status == INCONCLUSIVE
    assert cb.remainder is not None and not cb.remainder.is_zero()


@pytest.mark.criterion(3)
def test_c3_group_translations():
    start = time.perf_counter()
    ok, stats = check_translations(6)
    seconds = time.perf_counter() - start
    assert ok, stats
    assert stats["words"] == 190
    assert seconds < 1.0


@pytest.mark.criterion(4)
@pytest.mark.xfail(strict=True, reason="b and c fix A, so images of A alone collide")
def test_c4_faithfulness_literal(oq):
    distinct, sig = ons.faithfulness_evidence(oq, 3, ("A",))
    assert len(sig) == 22
    assert distinct


@pytest.mark.criterion(4)
def test_c4_faithfulness_evidence(oq):
    result = ons.faithfulness_check(oq, 3)
    assert result.status == EVIDENCE
    assert result.data["words"] == 22 and result.data["distinct"] == 22


@pytest.mark.criterion(5)
def test_c5_current_suite(s3):
    report, seconds = s3
    assert len(report) > 300
    bad = [r for r in report if r.status not in (PROVED, PASS)]
    assert not bad, [f"{r.id}: {r.status}" for r in bad]
    for prefix in ("A_q.lemma-elim.elim1.", "A_q.lemma-elim.elim4.", "A_q.lemma-elim.double-W1.",
                   "A_q.lemma-T0.G-to-Gt.", "A_q.lemma-T1.inv-G-to-Gt.", "A_q.well-defined.S.",
                   "A_q.well-defined.Omega.", "A_q.lemma-STS.T0.", "A_q.helpful.h3.", "A_q.thm-z3.c.Wm."):
        assert any(r.id.startswith(prefix) for r in report), prefix
    assert sum(1 for r in report if r.id.startswith("A_q.lemma-STS.T0.")) == 16
    assert seconds < 600


@pytest.mark.criterion(6)
def test_c6_T0_well_defined(aq3, t0_verdicts):
    assert len(t0_verdicts) == cur.expected_relation_count(3)
    bad = [label for label, v in t0_verdicts if v.status != PROVED]
    assert not bad
    # degree used per relation; images that vanish identically have an empty witness (degree 0)
    degrees = {label: v.degree for label, v in t0_verdicts}
    assert all(isinstance(d, int) and d >= 0 for d in degrees.values())
    for label, v in t0_verdicts:
        assert (v.degree == 0) == (v.witness_kind == "empty"), label
    print("T0 witness degrees:", dict(sorted(Counter(degrees.values()).items())))


@pytest.mark.criterion(7)
def test_c7_eliminations(elim):
    recursion = [r for r in elim if ".recursion." in r.id]
    quotient = [r for r in elim if ".quotient." in r.id]
    assert len(recursion) == 14 and all(r.status == PASS for r in recursion)
    assert len(quotient) == 9 and all(r.status == PROVED for r in quotient)


@pytest.mark.criterion(8)
def test_c8_new_relations(s4):
    assert all(r.status == PROVED for r in s4), _fail_lines(s4)
    for cid in ("A_q.conj-pres.qdg.W0", "A_q.conj-pres.qdg.W1"):
        v = s4[cid].verdict
        assert v.witness is not None and len(v.witness.terms) > 0
        assert v.replay(independent=True)


@pytest.mark.criterion(9)
def test_c9_witness_replay(oq_timed, s2, aq3, s3, t0_verdicts, elim, s4):
    oq = oq_timed[0]
    o_rels = [r.render() for r in oq.presentation.relations]
    a_rels = [r.render() for r in aq3.presentation.relations]
    verdicts = [(r.verdict, o_rels) for r in s2[0] if r.verdict is not None]
    bc, _ = ons.check_note_pair(oq)
    verdicts.append((bc, o_rels))
    for report in (s3[0], elim, s4):
        verdicts += [(r.verdict, a_rels) for r in report if r.verdict is not None]
    verdicts += [(v, a_rels) for _, v in t0_verdicts]
    proved = [(v, rels) for v, rels in verdicts if v.status == PROVED]
    assert len(proved) > 400
    failed = [v.target.render()[:60] for v, rels in proved if not v.replay(independent=True, relations=rels)]
    assert not failed


@pytest.mark.criterion(10)
def test_c10_engine_properties(oq):
    laws.prop_confluence_at_bound(oq)
    laws.prop_reduce_idempotent(oq)
    for law in (laws.prop_add_mul_commute, laws.prop_associative, laws.prop_distributive,
                laws.prop_identities_and_additive_inverse, laws.prop_multiplicative_inverse,
                laws.prop_equality_is_canonical, laws.prop_points_are_valid,
                laws.prop_eval_mod_is_a_ring_map, laws.prop_equal_scalars_agree_mod_p):
        law()
