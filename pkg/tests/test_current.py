import pytest

from qonsager import current as cur
from qonsager.engine import PROVED
from qonsager.freealg import Morphism, bracket, compose, q_bracket_op
from qonsager.scalar import Q

K = 3
AL = cur.current_alphabet(K)
QQ, C2 = Q + Q ** -1, Q ** 2 - Q ** -2
DEN = (Q - Q ** -1) * C2


def g(name):
    return AL.gen(name)


@pytest.fixture(scope="module")
def morphisms():
    return cur.current_morphisms(AL, K)


def test_relation_count():
    p = cur.current_relations(K)
    assert len(p.relations) == cur.expected_relation_count(K) == 79
    # the two bracket families coincide at k = 0
    assert any("W0Wp.k0" in e.label or "WmW1.k0" in e.label for e in p.dropped)


def test_order_and_display():
    assert AL.names[0] == "Gt0" and AL.names[-1] == "Wm3"
    table = dict(cur.display_table(AL))
    assert table["Wm2"] == "W_{-2}" and table["Wp0"] == "W_{1}" and table["Gt1"] == "Gt_{2}"


def test_omega(morphisms):
    assert morphisms["Omega"].apply(g("Wm2")) == g("Wp2")
    assert morphisms["Omega"].apply(g("G1")) == g("Gt1")


def test_T0_on_W1(morphisms):
    W0, W1 = g("Wm0"), g("Wp0")
    expected = W1 + (Q * (W0 * W0 * W1) - QQ * (W0 * W1 * W0) + Q ** -1 * (W1 * W0 * W0)) / DEN
    assert morphisms["T0"].apply(W1) == expected


def test_S_squared(morphisms):
    S = morphisms["S"]
    assert compose(S, S).apply(g("G1")) == g("G1")
    assert compose(S, S).same_images(Morphism.identity(AL))


def test_T1_matches_displayed_form(morphisms):
    assert morphisms["T1"].same_images(cur.displayed_T1(AL, K))
    assert morphisms["T1inv"].same_images(cur.displayed_T1(AL, K, inverse=True))


def test_build_errors():
    with pytest.raises(ValueError):
        cur.build_current(0)
    with pytest.raises(ValueError):
        cur.build_current(3, degree_bound=3)


@pytest.mark.parametrize("k, which, text", [
    (1, "Wminus", "Wp0 - [Gt0, Wm0]_q / (q^2-q^-2)^2"),
    (1, "Wplus", "Wm0 - [Wp0, Gt0]_q / (q^2-q^-2)^2"),
    (0, "G", "Gt0 + (q+q^-1)*[Wp0, Wm0]"),
])
def test_closed_form_text(k, which, text):
    from qonsager.expr import parse_expr

    assert cur.closed_form_text(k, which) == text
    assert parse_expr(text, AL) == cur.eliminate_closed_form(AL, k, which)


def test_closed_form_minus3():
    text = cur.closed_form_text(3, "Wminus")
    assert text.count("_q") == 3
    assert text.endswith("[Gt2, Wm0]_q / (q^2-q^-2)^2")
    W0, W1 = g("Wm0"), g("Wp0")
    expected = W1 - (q_bracket_op(g("Gt0"), W0) + q_bracket_op(W1, g("Gt1")) + q_bracket_op(g("Gt2"), W0)) / C2 ** 2
    assert cur.eliminate_closed_form(AL, 3, "Wminus") == expected


def test_recursion_matches_closed_form():
    al = cur.current_alphabet(6)
    for k in range(7):
        for which in ("Wminus", "Wplus"):
            assert cur.eliminate_recursive(al, k, which) == cur.eliminate_closed_form(al, k, which)


def test_eliminate_range():
    with pytest.raises(ValueError):
        cur.eliminate_closed_form(AL, 4, "Wminus")
    with pytest.raises(ValueError):
        cur.eliminate_closed_form(AL, 1, "W")


def test_quotient_Wm1_single_relation():
    # the relation [Gt_1, W_0]_q = rho (W_{-1} - W_1), rearranged
    W0, W1 = g("Wm0"), g("Wp0")
    rel = q_bracket_op(g("Gt0"), W0) - cur.RHO * (g("Wm1") - W1)
    diff = g("Wm1") - cur.eliminate_closed_form(AL, 1, "Wminus")
    assert diff == (-1 / cur.RHO) * rel


def test_quotient_G0_single_relation():
    rel = bracket(g("Wm0"), g("Wp0")) - (g("Gt0") - g("G0")) / QQ
    diff = g("G0") - cur.eliminate_closed_form(AL, 0, "G")
    assert diff == QQ * rel


def test_first_lemma_instance(aq):
    W0 = g("Wm0")
    v = aq.equal(bracket(q_bracket_op(g("Wp0"), W0), W0), bracket(g("G0"), W0))
    assert v.status == PROVED and v.replay()


def test_helpful_third_k1(aq):
    P = aq.primed
    v = aq.equal(bracket(P.Wdprime(1), g("Wm0")), bracket(P.Wdprime(0), g("Wm1")))
    assert v.status == PROVED and v.replay()


def test_c_action_on_Wdprime(aq):
    P = aq.primed
    c = aq.realize("c")
    v = aq.equal(c.apply(P.Wdprime(1)), P.Wdprime(1) + bracket(g("Wm1"), P.Wprime(0)) / (Q - Q ** -1))
    assert v.status == PROVED and v.replay()


def test_quotient_checks_proved(aq):
    report = cur.verify_elimination(aq, "A_q.elim.quotient.*")
    assert len(report) == 3 * (K + 1) and report.ok
