"""Degree-bounded completion and reduction to normal form.

Completion follows the diamond lemma: every overlap or inclusion ambiguity
between rule leading words whose overlap word has degree at most ``D`` is
reduced, and a nonzero remainder becomes a new rule.  Ambiguities are
processed in increasing order of their overlap word, and rules are never
discarded, so the rule list at bound ``D`` is a prefix of the list at any
larger bound.
"""

from __future__ import annotations

import heapq
import random
from typing import Dict, List, Optional, Tuple

from ..freealg import Alphabet, NcPoly, Word
from ..scalar import ONE, Scalar
from .certificate import Certificate, IdealBasis, Term, merge_terms
from .presentation import Presentation

__all__ = [
    "Rule",
    "RewriteSystem",
    "complete",
    "normal_form_basis",
    "s_polynomial",
    "BOUND_EXHAUSTED",
    "COMPLETE",
]

COMPLETE = "complete"
BOUND_EXHAUSTED = "bound exhausted"


class Rule:
    """``lead -> sum(c * w for w, c in tail)``, backed by basis element ``index``.

    ``excess`` is the rule's sugar minus its lead length (0 when untracked).
    """

    __slots__ = ("lead", "tail", "index", "excess")

    def __init__(self, lead: Word, tail: List[Tuple[Word, Scalar]], index: int, excess: int = 0):
        self.lead = lead
        self.tail = tail
        self.index = index
        self.excess = excess

    @classmethod
    def from_monic(cls, poly: NcPoly, index: int, sugar: Optional[int] = None) -> "Rule":
        lead = poly.leading_word()
        tail = [(w, -c) for w, c in poly.items() if w != lead]
        return cls(lead, tail, index, 0 if sugar is None else sugar - len(lead))


def _heap_key(w: Word):
    return (-len(w), tuple(-x for x in w))


class RewriteSystem:
    """Rules oriented by the degree-lex order, with a derivation basis."""

    def __init__(self, presentation: Presentation, basis: Optional[IdealBasis] = None):
        self.presentation = presentation
        self.alphabet: Alphabet = presentation.alphabet
        if basis is None:
            basis = IdealBasis(self.alphabet, presentation.relations, presentation.labels)
        self.basis = basis
        self.rules: List[Rule] = []
        self.lead_index: Dict[Word, Rule] = {}
        self._lengths: List[int] = []
        self.completed_through = 0
        self.status = COMPLETE
        self.log: List[str] = []

    # -- rule bookkeeping --------------------------------------------------

    def _activate(self, index: int, sugar: Optional[int] = None) -> Rule:
        rule = Rule.from_monic(self.basis.element(index), index, sugar)
        self.rules.append(rule)
        self.lead_index[rule.lead] = rule
        if len(rule.lead) not in self._lengths:
            self._lengths.append(len(rule.lead))
            self._lengths.sort()
        return rule

    def leading_words(self) -> List[Word]:
        return [r.lead for r in self.rules]

    def max_lead_degree(self) -> int:
        return max((len(r.lead) for r in self.rules), default=0)

    # -- reduction ---------------------------------------------------------

    def find(self, w: Word, budget: Optional[int] = None) -> Optional[Tuple[int, Rule]]:
        """Leftmost, then shortest, occurrence of a leading word in ``w``.

        With a ``budget`` only rules with ``excess <= budget`` count.
        """
        n = len(w)
        index = self.lead_index
        for start in range(n):
            for length in self._lengths:
                end = start + length
                if end > n:
                    break
                rule = index.get(w[start:end])
                if rule is not None and (budget is None or rule.excess <= budget):
                    return start, rule
        return None

    def matches(self, w: Word) -> List[Tuple[int, Rule]]:
        out = []
        for start in range(len(w)):
            for length in self._lengths:
                rule = self.lead_index.get(w[start:start + length])
                if rule is not None and start + length <= len(w):
                    out.append((start, rule))
        return out

    def is_reducible(self, w: Word) -> bool:
        return self.find(w) is not None

    def reduce(self, x: NcPoly) -> NcPoly:
        return self.reduce_traced(x)[0]

    def reduce_traced(self, x: NcPoly, want_trace: bool = True,
                      sugar: Optional[int] = None) -> Tuple[NcPoly, List[Term]]:
        """Normal form ``nf`` and terms with ``x - nf = sum c * u * e_k * v``.

        With ``sugar`` a rule rewrites a word ``w`` only if
        ``len(w) + rule.excess <= sugar``, which keeps every placed product of
        the expansion over defining relations within degree ``sugar``.
        """
        terms: Dict[Word, Scalar] = dict(x.terms)
        heap = [(_heap_key(w), w) for w in terms]
        heapq.heapify(heap)
        result: Dict[Word, Scalar] = {}
        trace: List[Term] = []
        find = self.find
        while heap:
            _, w = heapq.heappop(heap)
            c = terms.pop(w, None)
            if c is None:
                continue
            hit = find(w) if sugar is None else find(w, sugar - len(w))
            if hit is None:
                result[w] = c
                continue
            start, rule = hit
            u = w[:start]
            v = w[start + len(rule.lead):]
            if want_trace:
                trace.append((c, u, rule.index, v))
            for t, d in rule.tail:
                nw = u + t + v
                old = terms.get(nw)
                if old is None:
                    terms[nw] = c * d
                    heapq.heappush(heap, (_heap_key(nw), nw))
                else:
                    s = old + c * d
                    if s:
                        terms[nw] = s
                    else:
                        del terms[nw]
        return NcPoly._raw(self.alphabet, result), merge_terms(trace) if want_trace else []

    def reduce_random(self, x: NcPoly, rng: random.Random) -> NcPoly:
        """Reduction with randomly chosen terms and rule occurrences."""
        terms: Dict[Word, Scalar] = dict(x.terms)
        result: Dict[Word, Scalar] = {}
        while terms:
            w = rng.choice(list(terms))
            c = terms.pop(w)
            hits = self.matches(w)
            if not hits:
                result[w] = result.get(w, 0) + c
                continue
            start, rule = rng.choice(hits)
            u = w[:start]
            v = w[start + len(rule.lead):]
            for t, d in rule.tail:
                nw = u + t + v
                s = terms.get(nw, 0) + c * d
                if s:
                    terms[nw] = s
                else:
                    terms.pop(nw, None)
        return NcPoly(self.alphabet, result)

    def certificate(self, x: NcPoly) -> Tuple[NcPoly, Certificate]:
        """Normal form of ``x`` plus a witness for ``x - nf``."""
        nf, trace = self.reduce_traced(x)
        return nf, Certificate(self.basis, trace, kind="trace")

    def adopt_element(self, k: int, sugar: Optional[int] = None) -> Rule:
        """Use basis element ``k`` (monic) as a rule as-is."""
        return self._activate(k, sugar)

    def adopt_derived(self, poly: NcPoly, terms: List[Term], sugar: Optional[int] = None) -> Rule:
        """Record ``poly`` (an ideal element with derivation ``terms``) as a monic rule."""
        inv = poly.leading_coeff().inverse()
        index = self.basis.add_derived(poly.scale(inv), merge_terms((c * inv, u, k, v) for c, u, k, v in terms))
        return self._activate(index, sugar)

    # -- completion --------------------------------------------------------

    def _insert(self, poly: NcPoly, terms: List[Term], degree_bound: int, pairs: list):
        """Add a nonzero irreducible remainder as a new rule and queue its ambiguities."""
        lc = poly.leading_coeff()
        inv = lc.inverse()
        monic = poly.scale(inv)
        index = self.basis.add_derived(monic, merge_terms((c * inv, u, k, v) for c, u, k, v in terms))
        rule = self._activate(index)
        self._queue_pairs(rule, degree_bound, pairs)
        return rule

    def _queue_pairs(self, new: Rule, degree_bound: int, pairs: list):
        for old in self.rules:
            for a, b in ((new, old), (old, new)) if old is not new else ((new, new),):
                la, lb = a.lead, b.lead
                # overlaps: suffix of la equals prefix of lb
                for s in range(1, min(len(la), len(lb))):
                    if la[-s:] == lb[:s]:
                        w = la + lb[s:]
                        if len(w) <= degree_bound:
                            heapq.heappush(pairs, (len(w), w, a.index, b.index, 0, s))
                # inclusions: lb inside la
                if a is not b and len(lb) <= len(la):
                    for pos in range(len(la) - len(lb) + 1):
                        if la[pos:pos + len(lb)] == lb:
                            heapq.heappush(pairs, (len(la), la, a.index, b.index, 1, pos))

    def _ambiguity(self, item) -> Tuple[NcPoly, List[Term]]:
        _, _, ia, ib, kind, k = item
        return s_polynomial(self.basis.element(ia), self.basis.element(ib), ia, ib, kind, k)


def s_polynomial(fa: NcPoly, fb: NcPoly, ia: int, ib: int, kind: int, k: int) -> Tuple[NcPoly, List[Term]]:
    """Difference of the two one-step reductions of an ambiguity.

    ``kind`` 0 is an overlap (suffix of length ``k`` of lead(fa) equals a
    prefix of lead(fb)); ``kind`` 1 is an inclusion of lead(fb) at position
    ``k`` of lead(fa).  Also returns the expression as basis terms.
    """
    al = fa.alphabet
    la = fa.leading_word()
    lb = fb.leading_word()
    if kind == 0:
        u = la[:-k]
        v = lb[k:]
        s = NcPoly._raw(al, fa.sandwich((), v)) - NcPoly._raw(al, fb.sandwich(u, ()))
        return s, [(ONE, (), ia, v), (-ONE, u, ib, ())]
    u = la[:k]
    v = la[k + len(lb):]
    s = fa - NcPoly._raw(al, fb.sandwich(u, v))
    return s, [(ONE, (), ia, ()), (-ONE, u, ib, v)]


def complete(
    presentation: Presentation,
    degree_bound: int,
    max_rules: Optional[int] = None,
) -> RewriteSystem:
    """Close the relations under all ambiguities of degree <= ``degree_bound``."""
    if degree_bound < presentation.max_degree():
        raise ValueError(
            f"degree bound {degree_bound} is below the relation degree {presentation.max_degree()}"
        )
    rs = RewriteSystem(presentation)
    pairs: list = []
    for j, rel in enumerate(presentation.relations):
        nf, trace = rs.reduce_traced(rel)
        if nf.is_zero():
            rs.log.append(f"relation {presentation.labels[j]} reduces to zero against earlier rules")
            continue
        if not trace:
            rule = rs._activate(j)
            rs._queue_pairs(rule, degree_bound, pairs)
        else:
            rs.log.append(f"relation {presentation.labels[j]} inter-reduced before use")
            rs._insert(nf, [(ONE, (), j, ())] + [(-c, u, k, v) for c, u, k, v in trace], degree_bound, pairs)
    seen = set()
    while pairs:
        item = heapq.heappop(pairs)
        key = item[1:]
        if key in seen:
            continue
        seen.add(key)
        if max_rules is not None and len(rs.rules) >= max_rules:
            rs.status = BOUND_EXHAUSTED
            rs.completed_through = item[0] - 1
            rs.log.append(f"rule limit {max_rules} reached at an ambiguity of degree {item[0]}")
            return rs
        s, base = rs._ambiguity(item)
        nf, trace = rs.reduce_traced(s)
        if nf.is_zero():
            continue
        rs._insert(nf, base + [(-c, u, k, v) for c, u, k, v in trace], degree_bound, pairs)
    rs.completed_through = degree_bound
    return rs


def normal_form_basis(rs, degree: int) -> List[Word]:
    """Irreducible words of exactly ``degree``, in decreasing monomial order.

    ``rs`` is anything with ``leading_words()``, ``completed_through`` and
    ``alphabet``.
    """
    leads = set(rs.leading_words())
    if degree > rs.completed_through:
        raise ValueError(f"degree {degree} exceeds the completed bound {rs.completed_through}")
    lengths = sorted({len(w) for w in leads})
    n = len(rs.alphabet)
    words: List[Word] = [()]
    for _ in range(degree):
        # extending an irreducible word only needs a check of new suffixes
        nxt = []
        for w in words:
            for x in range(n):
                cand = w + (x,)
                if not any(cand[len(cand) - L:] in leads for L in lengths if L <= len(cand)):
                    nxt.append(cand)
        words = nxt
    return sorted(words, key=lambda w: (len(w), w), reverse=True)
