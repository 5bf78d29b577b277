"""The current algebra A_q, truncated to generator indices 0..K.

Symbols: ``Wm{k}`` is W_{-k}, ``Wp{k}`` is W_{k+1}, ``G{k}`` is G_{k+1} and
``Gt{k}`` is the tilde G_{k+1}.  A relation instance is kept only when all
its symbols are in range, so every identity PROVED here also holds in the
untruncated algebra.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .engine.presentation import Presentation
from .engine.prove import PROVED, Prover, Verdict
from .engine.search import LazyRewriteSystem
from .freealg import ANTIHOM, HOM, Alphabet, Morphism, NcPoly, bracket, compose, q_bracket_op
from .groups import FreeProductWord, GroupActionBinding, realize
from .report import PASS, Check, VerificationReport, run_checks
from .scalar import Q, Scalar

log = logging.getLogger(__name__)

__all__ = [
    "DEFAULT_INDEX_BOUND",
    "DEFAULT_DEGREE",
    "DEFAULT_CERT_DEGREE",
    "RHO",
    "FAMILIES",
    "current_alphabet",
    "display_table",
    "current_relations",
    "expected_relation_count",
    "current_morphisms",
    "PrimedView",
    "CurrentContext",
    "build_current",
    "section3_checks",
    "verify_section3",
    "eliminate_closed_form",
    "closed_form_text",
    "eliminate_recursive",
    "elimination_checks",
    "verify_elimination",
    "section4_checks",
    "verify_section4",
]

DEFAULT_INDEX_BOUND = 3
DEFAULT_DEGREE = 4
DEFAULT_CERT_DEGREE = 6

QQ = Q + Q ** -1
C2 = Q ** 2 - Q ** -2
RHO = -(C2 ** 2)
DEN = (Q - Q ** -1) * C2
FAMILIES = ("Wminus", "Wplus", "G")


def current_alphabet(K: int) -> Alphabet:
    """Symbols from highest to lowest: Gt, G, Wp, Wm, each by index."""
    if K < 0:
        raise ValueError("index bound must be nonnegative")
    names = ([f"Gt{k}" for k in range(K + 1)] + [f"G{k}" for k in range(K + 1)]
             + [f"Wp{k}" for k in range(K + 1)] + [f"Wm{k}" for k in range(K + 1)])
    display = {}
    for k in range(K + 1):
        display[f"Wm{k}"] = f"W_{{-{k}}}"
        display[f"Wp{k}"] = f"W_{{{k + 1}}}"
        display[f"G{k}"] = f"G_{{{k + 1}}}"
        display[f"Gt{k}"] = f"Gt_{{{k + 1}}}"
    return Alphabet(names, display)


def display_table(alphabet: Alphabet) -> List[Tuple[str, str]]:
    return [(n, alphabet.display.get(n, n)) for n in alphabet.names]


class _Gens:
    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet

    def Wm(self, k: int) -> NcPoly:
        return self.alphabet.gen(f"Wm{k}")

    def Wp(self, k: int) -> NcPoly:
        return self.alphabet.gen(f"Wp{k}")

    def G(self, k: int) -> NcPoly:
        return self.alphabet.gen(f"G{k}")

    def Gt(self, k: int) -> NcPoly:
        return self.alphabet.gen(f"Gt{k}")


def current_relations(K: int) -> Presentation:
    """Every defining relation whose symbols have index <= K."""
    al = current_alphabet(K)
    g = _Gens(al)
    Wm, Wp, G, Gt = g.Wm, g.Wp, g.G, g.Gt
    br, qb = bracket, q_bracket_op
    rels: List[NcPoly] = []
    labels: List[str] = []

    def add(label: str, r: NcPoly):
        rels.append(r)
        labels.append(label)

    for k in range(K + 1):
        add(f"W0Wp.k{k}", br(Wm(0), Wp(k)) - (Gt(k) - G(k)) / QQ)
        add(f"WmW1.k{k}", br(Wm(k), Wp(0)) - (Gt(k) - G(k)) / QQ)
    # these mention index k+1
    for k in range(K):
        add(f"W0G.k{k}", qb(Wm(0), G(k)) - RHO * (Wm(k + 1) - Wp(k)))
        add(f"GtW0.k{k}", qb(Gt(k), Wm(0)) - RHO * (Wm(k + 1) - Wp(k)))
        add(f"GW1.k{k}", qb(G(k), Wp(0)) - RHO * (Wp(k + 1) - Wm(k)))
        add(f"W1Gt.k{k}", qb(Wp(0), Gt(k)) - RHO * (Wp(k + 1) - Wm(k)))
    commuting = (("WmWm", Wm), ("WpWp", Wp), ("GG", G), ("GtGt", Gt))
    symmetric = (("WmWp", Wm, Wp), ("WmG", Wm, G), ("WmGt", Wm, Gt),
                 ("WpG", Wp, G), ("WpGt", Wp, Gt), ("GtG", Gt, G))
    for k in range(K + 1):
        for l in range(K + 1):
            for name, X in commuting:
                add(f"{name}.k{k}.l{l}", br(X(k), X(l)))
            for name, X, Y in symmetric:
                add(f"{name}.k{k}.l{l}", br(X(k), Y(l)) + br(Y(k), X(l)))
    return Presentation.build(al, rels, labels)


def expected_relation_count(K: int) -> int:
    """Distinct nonzero instances: the two bracket families share their k=0 member,
    and each two-index family contributes one relation per unordered pair k != l."""
    n = K + 1
    return (2 * K + 1) + 4 * K + 10 * (n * (n - 1) // 2)


def _corrected(x: NcPoly, pivot: NcPoly, s: Scalar) -> NcPoly:
    # x + (s P^2 x - (q+q^-1) P x P + s^-1 x P^2) / den
    return x + (s * (pivot * pivot * x) - QQ * (pivot * x * pivot) + s.inverse() * (x * pivot * pivot)) / DEN


def current_morphisms(alphabet: Alphabet, K: int) -> Dict[str, Morphism]:
    g = _Gens(alphabet)
    W0 = g.Wm(0)
    omega, s_map, t0, t0inv = {}, {}, {}, {}
    for k in range(K + 1):
        omega.update({f"Wm{k}": g.Wp(k), f"Wp{k}": g.Wm(k), f"G{k}": g.Gt(k), f"Gt{k}": g.G(k)})
        s_map.update({f"Wm{k}": g.Wm(k), f"Wp{k}": g.Wp(k), f"G{k}": g.Gt(k), f"Gt{k}": g.G(k)})
        t0[f"Wm{k}"] = t0inv[f"Wm{k}"] = g.Wm(k)
        for fam in ("Wp", "G", "Gt"):
            x = alphabet.gen(f"{fam}{k}")
            t0[f"{fam}{k}"] = _corrected(x, W0, Q)
            t0inv[f"{fam}{k}"] = _corrected(x, W0, Q ** -1)
    Omega = Morphism(alphabet, omega, HOM, "Omega")
    T0 = Morphism(alphabet, t0, HOM, "T0")
    T0inv = Morphism(alphabet, t0inv, HOM, "T0inv")
    T1 = compose(Omega, compose(T0, Omega), "T1")
    T1inv = compose(Omega, compose(T0inv, Omega), "T1inv")
    S = Morphism(alphabet, s_map, ANTIHOM, "S")
    return {"Omega": Omega, "S": S, "T0": T0, "T0inv": T0inv, "T1": T1, "T1inv": T1inv}


def displayed_T1(alphabet: Alphabet, K: int, inverse: bool = False) -> Morphism:
    """T1 (or its inverse) written out directly: W_{k+1} fixed, the rest corrected in W_1."""
    g = _Gens(alphabet)
    W1 = g.Wp(0)
    s = Q ** -1 if inverse else Q
    images = {}
    for k in range(K + 1):
        images[f"Wp{k}"] = g.Wp(k)
        for fam in ("Wm", "G", "Gt"):
            images[f"{fam}{k}"] = _corrected(alphabet.gen(f"{fam}{k}"), W1, s)
    return Morphism(alphabet, images, HOM, "T1inv" if inverse else "T1")


@dataclass(frozen=True)
class PrimedView:
    """W'_{-k} = W_{k+1} and W''_{-k} = -Gt_{k+1}/(q^2 - q^-2)."""

    alphabet: Alphabet

    def Wprime(self, k: int) -> NcPoly:
        return self.alphabet.gen(f"Wp{k}")

    def Wdprime(self, k: int) -> NcPoly:
        return -self.alphabet.gen(f"Gt{k}") / C2


@dataclass
class CurrentContext:
    K: int
    presentation: Presentation
    rewrite_system: LazyRewriteSystem
    degree_bound: int
    certificate_degree: int
    prover: Prover
    morphisms: Dict[str, Morphism]
    binding: GroupActionBinding
    primed: PrimedView
    rho: Scalar = RHO
    _well_defined: Dict[str, List[Tuple[str, Verdict]]] = field(default_factory=dict, repr=False)

    @property
    def alphabet(self) -> Alphabet:
        return self.presentation.alphabet

    @property
    def gens(self) -> _Gens:
        return _Gens(self.alphabet)

    def equal(self, x: NcPoly, y: NcPoly) -> Verdict:
        return self.prover.prove_equal(x, y)

    def realize(self, word: str) -> Morphism:
        return realize(self.binding, FreeProductWord.parse(word))

    def well_definedness(self, name: str) -> List[Tuple[str, Verdict]]:
        """Per-relation verdicts for one named morphism, computed once."""
        if name not in self._well_defined:
            self._well_defined[name] = self.prover.well_defined(self.morphisms[name])
        return self._well_defined[name]


def build_current(
    K: int = DEFAULT_INDEX_BOUND,
    degree_bound: int = DEFAULT_DEGREE,
    certificate_degree: int = DEFAULT_CERT_DEGREE,
    engine: str = "both",
    seed: int = 0,
    check_morphisms: bool = False,
) -> CurrentContext:
    """Truncated presentation, lazily lifted completion at ``degree_bound``, and morphisms.

    Well-definedness verdicts are computed on first request (or here, with
    ``check_morphisms``) and kept on the context; INCONCLUSIVE entries are
    retained for the report, not raised.
    """
    if K < 1:
        raise ValueError("index bound K must be at least 1")
    if degree_bound < 4:
        raise ValueError(f"degree bound {degree_bound} is below 4")
    p = current_relations(K)
    if len(p.relations) != expected_relation_count(K):
        raise AssertionError(f"{len(p.relations)} relations, expected {expected_relation_count(K)}")
    rs = LazyRewriteSystem(p, degree_bound, seed=seed)
    prover = Prover(p, rs, certificate_degree, engine, seed=seed)
    morphisms = current_morphisms(p.alphabet, K)
    binding = GroupActionBinding("A_q", {n: morphisms[n] for n in ("S", "T0", "T0inv", "T1", "T1inv")})
    ctx = CurrentContext(K, p, rs, degree_bound, certificate_degree, prover, morphisms, binding,
                         PrimedView(p.alphabet))
    if check_morphisms:
        for name in morphisms:
            ctx.well_definedness(name)
    return ctx


# section 3


def section3_checks(ctx: CurrentContext, morphisms: Sequence[str] = ("Omega", "S")) -> List[Check]:
    """Catalog of the A_q identities.  ``morphisms`` selects whose well-definedness is listed."""
    al, K = ctx.alphabet, ctx.K
    g = ctx.gens
    Wm, Wp, G, Gt = g.Wm, g.Wp, g.G, g.Gt
    W0, W1 = Wm(0), Wp(0)
    P = ctx.primed
    m = ctx.morphisms
    br, qb = bracket, q_bracket_op
    d = Q - Q ** -1
    checks: List[Check] = []

    def add(cid: str, f: Callable[[], Verdict]):
        checks.append(Check(cid, PROVED, f))

    def add_equal(cid: str, x: Callable[[], NcPoly], y: Callable[[], NcPoly]):
        add(cid, lambda: ctx.equal(x(), y()))

    for name in morphisms:
        for j, label in enumerate(ctx.presentation.labels):
            add(f"A_q.well-defined.{name}.{label}",
                lambda name=name, j=j: ctx.well_definedness(name)[j][1])

    ident = Morphism.identity(al)
    S, Om = m["S"], m["Omega"]
    checks.append(Check("A_q.exact.S-squared", PASS, lambda: compose(S, S).same_images(ident)))
    checks.append(Check("A_q.exact.Omega-squared", PASS, lambda: compose(Om, Om).same_images(ident)))
    checks.append(Check("A_q.exact.Omega-S-commute", PASS, lambda: compose(Om, S).same_images(compose(S, Om))))
    checks.append(Check("A_q.exact.T1-images", PASS, lambda: m["T1"].same_images(displayed_T1(al, K))))
    checks.append(Check("A_q.exact.T1inv-images", PASS,
                        lambda: m["T1inv"].same_images(displayed_T1(al, K, inverse=True))))

    for k in range(K):
        add_equal(f"A_q.lemma-elim.elim1.k{k}", lambda k=k: br(qb(Wp(k), W0), W0), lambda k=k: br(G(k), W0))
        add_equal(f"A_q.lemma-elim.elim2.k{k}", lambda k=k: br(W1, qb(W1, Wm(k))), lambda k=k: br(W1, G(k)))
        add_equal(f"A_q.lemma-elim.elim3.k{k}", lambda k=k: br(W0, qb(W0, Wp(k))), lambda k=k: br(W0, Gt(k)))
        add_equal(f"A_q.lemma-elim.elim4.k{k}", lambda k=k: br(qb(Wm(k), W1), W1), lambda k=k: br(Gt(k), W1))
    for k in range(K):
        for l in range(k + 1, K):
            add(f"A_q.lemma-elim.double-W0.k{k}.l{l}",
                lambda k=k, l=l: ctx.prover.prove_zero(br(br(W0, Wp(k)), br(W0, Wp(l)))))
            add(f"A_q.lemma-elim.double-W1.k{k}.l{l}",
                lambda k=k, l=l: ctx.prover.prove_zero(br(br(W1, Wm(k)), br(W1, Wm(l)))))

    T0, T0inv, T1, T1inv = m["T0"], m["T0inv"], m["T1"], m["T1inv"]
    for k in range(K):
        add_equal(f"A_q.lemma-T0.G-to-Gt.k{k}", lambda k=k: T0.apply(G(k)), lambda k=k: Gt(k))
        add_equal(f"A_q.lemma-T0.inv-Gt-to-G.k{k}", lambda k=k: T0inv.apply(Gt(k)), lambda k=k: G(k))
        add_equal(f"A_q.lemma-T1.Gt-to-G.k{k}", lambda k=k: T1.apply(Gt(k)), lambda k=k: G(k))
        add_equal(f"A_q.lemma-T1.inv-G-to-Gt.k{k}", lambda k=k: T1inv.apply(G(k)), lambda k=k: Gt(k))

    sts0 = compose(S, compose(T0, S))
    sts1 = compose(S, compose(T1, S))
    for fam in ("Wm", "Wp", "G", "Gt"):
        for k in range(K + 1):
            n = f"{fam}{k}"
            add_equal(f"A_q.lemma-STS.T0.{fam}.k{k}", lambda n=n: sts0.image(n), lambda n=n: T0inv.image(n))
            add_equal(f"A_q.lemma-STS.T1.{fam}.k{k}", lambda n=n: sts1.image(n), lambda n=n: T1inv.image(n))

    for k in range(K + 1):
        add_equal(f"A_q.helpful.h1.k{k}", lambda k=k: br(Wm(k), P.Wprime(0)), lambda k=k: br(W0, P.Wprime(k)))
        add_equal(f"A_q.helpful.h2.k{k}", lambda k=k: br(P.Wprime(k), P.Wdprime(0)),
                  lambda k=k: br(P.Wprime(0), P.Wdprime(k)))
        add_equal(f"A_q.helpful.h3.k{k}", lambda k=k: br(P.Wdprime(k), W0), lambda k=k: br(P.Wdprime(0), Wm(k)))

    a, b, c = ctx.realize("a"), ctx.realize("b"), ctx.realize("c")
    for k in range(K):
        Wk, W1k, W2k = (lambda k=k: Wm(k)), (lambda k=k: P.Wprime(k)), (lambda k=k: P.Wdprime(k))
        # (i)
        add_equal(f"A_q.thm-z3.a.Wm.k{k}", lambda k=k: a.apply(Wm(k)),
                  lambda k=k: Wm(k) + br(P.Wprime(k), P.Wdprime(0)) / d)
        add_equal(f"A_q.thm-z3.a.Wprime.k{k}", lambda W1k=W1k: a.apply(W1k()), W1k)
        add_equal(f"A_q.thm-z3.a.Wdprime.k{k}", lambda W2k=W2k: a.apply(W2k()), W2k)
        # (ii)
        add_equal(f"A_q.thm-z3.b.Wprime.k{k}", lambda k=k: b.apply(P.Wprime(k)),
                  lambda k=k: P.Wprime(k) + br(P.Wdprime(k), W0) / d)
        add_equal(f"A_q.thm-z3.b.Wdprime.k{k}", lambda W2k=W2k: b.apply(W2k()), W2k)
        add_equal(f"A_q.thm-z3.b.Wm.k{k}", lambda Wk=Wk: b.apply(Wk()), Wk)
        # (iii)
        add_equal(f"A_q.thm-z3.c.Wdprime.k{k}", lambda k=k: c.apply(P.Wdprime(k)),
                  lambda k=k: P.Wdprime(k) + br(Wm(k), P.Wprime(0)) / d)
        add_equal(f"A_q.thm-z3.c.Wm.k{k}", lambda Wk=Wk: c.apply(Wk()), Wk)
        add_equal(f"A_q.thm-z3.c.Wprime.k{k}", lambda W1k=W1k: c.apply(W1k()), W1k)

    factorizations = [
        ("part1.a-alt", a, compose(T1inv, S)),
        ("part1.b-alt", b, compose(S, T0inv)),
        ("part2.bc", ctx.realize("bc"), T0),
        ("part2.cb", ctx.realize("cb"), T0inv),
        ("part2.ca", ctx.realize("ca"), T1),
        ("part2.ac", ctx.realize("ac"), T1inv),
    ]
    for tag, lhs, rhs in factorizations:
        for fam in ("Wm", "Wp", "G", "Gt"):
            for k in range(K + 1):
                n = f"{fam}{k}"
                add_equal(f"A_q.thm-z3.{tag}.{fam}.k{k}",
                          lambda lhs=lhs, n=n: lhs.image(n), lambda rhs=rhs, n=n: rhs.image(n))
    return checks


def verify_section3(ctx: CurrentContext, pattern: Optional[str] = None) -> VerificationReport:
    return run_checks(section3_checks(ctx), pattern)


# eliminations


def _qsum(terms: List[NcPoly], alphabet: Alphabet) -> NcPoly:
    out = NcPoly.zero(alphabet)
    for t in terms:
        out = out + t
    return out / (C2 ** 2)


def eliminate_closed_form(ctx, k: int, which: str) -> NcPoly:
    """Closed form of W_{-k} (``Wminus``), W_{k+1} (``Wplus``) or G_{k+1} (``G``).

    ``ctx`` is a :class:`CurrentContext` or an alphabet from
    :func:`current_alphabet`.  The W cases use only W_0, W_1 and
    Gt_1..Gt_k; the G case is Gt_{k+1} + (q + q^-1)[W_1, W_{-k}].
    """
    alphabet = ctx if isinstance(ctx, Alphabet) else ctx.alphabet
    if which not in FAMILIES:
        raise ValueError(f"unknown family {which!r}; expected one of {FAMILIES}")
    g = _Gens(alphabet)
    if k < 0 or f"Wm{k}" not in alphabet:
        raise ValueError(f"index {k} is out of range for this alphabet")
    W0, W1 = g.Wm(0), g.Wp(0)
    qb = q_bracket_op

    def Gt(j: int) -> NcPoly:  # Gt_j in one-based indexing
        return g.Gt(j - 1)

    if which == "G":
        return g.Gt(k) + QQ * bracket(W1, g.Wm(k))
    if k == 0:
        return W0 if which == "Wminus" else W1
    left = lambda j: qb(Gt(j), W0)   # [Gt_j, W0]_q
    right = lambda j: qb(W1, Gt(j))  # [W1, Gt_j]_q
    if k % 2:
        r = (k - 1) // 2
        if which == "Wminus":
            return W1 - _qsum([left(2 * l + 1) for l in range(r + 1)] + [right(2 * l) for l in range(1, r + 1)],
                              alphabet)
        return W0 - _qsum([right(2 * l + 1) for l in range(r + 1)] + [left(2 * l) for l in range(1, r + 1)],
                          alphabet)
    r = k // 2
    if which == "Wminus":
        return W0 - _qsum([right(2 * l + 1) for l in range(r)] + [left(2 * l) for l in range(1, r + 1)], alphabet)
    return W1 - _qsum([left(2 * l + 1) for l in range(r)] + [right(2 * l) for l in range(1, r + 1)], alphabet)


def closed_form_text(k: int, which: str) -> str:
    """The closed form as parseable text, term by term as displayed."""
    if which not in FAMILIES:
        raise ValueError(f"unknown family {which!r}; expected one of {FAMILIES}")
    if k < 0:
        raise ValueError("index must be nonnegative")
    if which == "G":
        return f"Gt{k} + (q+q^-1)*[Wp0, Wm{k}]"
    if k == 0:
        return "Wm0" if which == "Wminus" else "Wp0"
    den = "(q^2-q^-2)^2"
    left = lambda j: f"[Gt{j - 1}, Wm0]_q / {den}"
    right = lambda j: f"[Wp0, Gt{j - 1}]_q / {den}"
    r = k // 2
    odd = k % 2 == 1
    if odd == (which == "Wminus"):
        head, first, second = "Wp0", left, right
    else:
        head, first, second = "Wm0", right, left
    top = r + 1 if odd else r
    terms = [(2 * l + 1, first) for l in range(top)] + [(2 * l, second) for l in range(1, r + 1)]
    return " - ".join([head] + [f(j) for j, f in sorted(terms, key=lambda t: t[0])])


def eliminate_recursive(alphabet: Alphabet, k: int, which: str) -> NcPoly:
    """Unroll W_{-j-1} = W_{j+1} + [Gt_{j+1}, W_0]_q / rho and W_{j+2} = W_{-j} + [W_1, Gt_{j+1}]_q / rho."""
    g = _Gens(alphabet)
    W0, W1 = g.Wm(0), g.Wp(0)
    minus, plus = [W0], [W1]
    for j in range(k):
        minus.append(plus[j] + q_bracket_op(g.Gt(j), W0) / RHO)
        plus.append(minus[j] + q_bracket_op(W1, g.Gt(j)) / RHO)
    if which == "Wminus":
        return minus[k]
    if which == "Wplus":
        return plus[k]
    raise ValueError("recursion covers the W families only")


def elimination_checks(ctx: CurrentContext, recursion_bound: int = 6,
                       quotient_bound: Optional[int] = None) -> List[Check]:
    big = current_alphabet(max(recursion_bound, ctx.K))
    checks: List[Check] = []
    for which in ("Wminus", "Wplus"):
        for k in range(recursion_bound + 1):
            checks.append(Check(f"A_q.elim.recursion.{which}.k{k}", PASS,
                                lambda k=k, which=which: eliminate_recursive(big, k, which)
                                == eliminate_closed_form(big, k, which)))
    qb = ctx.K if quotient_bound is None else min(quotient_bound, ctx.K)
    g = ctx.gens
    for which, gen in (("Wminus", g.Wm), ("Wplus", g.Wp), ("G", g.G)):
        for k in range(qb + 1):
            checks.append(Check(f"A_q.elim.quotient.{which}.k{k}", PROVED,
                                lambda k=k, which=which, gen=gen: ctx.equal(
                                    gen(k), eliminate_closed_form(ctx.alphabet, k, which))))
    return checks


def verify_elimination(ctx: CurrentContext, pattern: Optional[str] = None) -> VerificationReport:
    return run_checks(elimination_checks(ctx), pattern)


# section 4


def section4_checks(ctx: CurrentContext) -> List[Check]:
    g = ctx.gens
    Gt = g.Gt
    W0, W1 = g.Wm(0), g.Wp(0)
    br, qb = bracket, q_bracket_op
    K = ctx.K
    checks: List[Check] = []

    def add_equal(cid: str, x: Callable[[], NcPoly], y: Callable[[], NcPoly]):
        checks.append(Check(cid, PROVED, lambda: ctx.equal(x(), y())))

    def first_pair(prefix: str):
        add_equal(f"{prefix}.W0-Gt.k0", lambda: br(W0, Gt(0)), lambda: br(W0, qb(W0, W1)))
        add_equal(f"{prefix}.Gt-W1.k0", lambda: br(Gt(0), W1), lambda: br(qb(W0, W1), W1))

    def higher(prefix: str):
        # k >= 1: Gt_{k+1} against W0 and W1, through Gt_k
        for k in range(1, K):
            add_equal(f"{prefix}.Gt-W0.k{k}", lambda k=k: br(Gt(k), W0),
                      lambda k=k: br(W0, qb(W0, qb(W1, Gt(k - 1)))) / (C2 ** 2))
            add_equal(f"{prefix}.W1-Gt.k{k}", lambda k=k: br(W1, Gt(k)),
                      lambda k=k: br(qb(qb(Gt(k - 1), W0), W1), W1) / (C2 ** 2))

    first_pair("A_q.lemma-newrels")
    higher("A_q.lemma-newrels")

    qinv = Q ** -1
    add_equal("A_q.conj-pres.qdg.W0", lambda: br(W0, qb(W0, qb(W0, W1), qinv)), lambda: (C2 ** 2) * br(W1, W0))
    add_equal("A_q.conj-pres.qdg.W1", lambda: br(W1, qb(W1, qb(W1, W0), qinv)), lambda: (C2 ** 2) * br(W0, W1))
    first_pair("A_q.conj-pres")
    higher("A_q.conj-pres")
    for k in range(K + 1):
        for l in range(k + 1, K + 1):
            checks.append(Check(f"A_q.conj-pres.GtGt.k{k}.l{l}", PROVED,
                                lambda k=k, l=l: ctx.prover.prove_zero(br(Gt(k), Gt(l)))))
    return checks


def verify_section4(ctx: CurrentContext, pattern: Optional[str] = None) -> VerificationReport:
    return run_checks(section4_checks(ctx), pattern)
