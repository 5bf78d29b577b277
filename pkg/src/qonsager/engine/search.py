"""Degree-bounded certificate search with a modular filter.

The question "is ``target`` a combination of products ``u * r * v`` of
degree at most ``D``" is a sparse linear system.  It is eliminated in
monomial order (ambiguity resolution plus reduction), first over GF(p) with
q replaced by a random residue and with words restricted to a growing set
of symbols.  When the target vanishes modulo p, only the elimination steps
it depends on are replayed over Q(q), and the resulting certificate is
verified exactly.  A wrong guess in the modular phase can only make the
search fail; it never produces an unverified proof.

Every derived element carries a sugar degree: the degree of the
homogenized computation it came from, an upper bound on the degree of its
expansion over defining relations.  A rule of sugar ``s`` may rewrite a word
of length ``n`` inside a computation of sugar ``S`` only when
``n - len(lead) + s <= S``.  Completion truncated at sugar ``D`` therefore
decides membership in the span of all ``u * r * v`` of degree at most ``D``
(restricted to the chosen symbols), which is the certificate space.

Inside the modular engine a word is packed into one integer: a leading 1
bit followed by ``bits`` bits per letter, first letter most significant.
Integer order on packed words is then exactly the degree-lex order.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from ..freealg import NcPoly, Word
from ..scalar import ONE, ModularPoint, eval_mod, random_point
from .certificate import Certificate, IdealBasis
from .presentation import Presentation
from .rewrite import BOUND_EXHAUSTED, COMPLETE, RewriteSystem, s_polynomial

__all__ = [
    "CertificateSearch",
    "LazyRewriteSystem",
    "LiftFailure",
    "ModularCompletion",
    "ModularContext",
    "SearchResult",
    "WordPacker",
    "symbol_levels",
]

ModPoly = Dict[int, int]


class WordPacker:
    """Packs words over an alphabet of ``n`` symbols into integers."""

    def __init__(self, n: int):
        self.bits = max(1, (n - 1).bit_length())

    def pack(self, w: Word) -> int:
        b = self.bits
        c = 1
        for x in w:
            c = (c << b) | x
        return c

    def unpack(self, c: int) -> Word:
        b = self.bits
        mask = (1 << b) - 1
        out = []
        while c > 1:
            out.append(c & mask)
            c >>= b
        return tuple(reversed(out))

    def length(self, c: int) -> int:
        return (c.bit_length() - 1) // self.bits


def mod_image(x: NcPoly, pt: ModularPoint, packer: WordPacker) -> Optional[ModPoly]:
    """Coefficientwise image of ``x`` at ``pt``; None if some coefficient is undefined."""
    out: ModPoly = {}
    for w, c in x.terms.items():
        v = eval_mod(c, pt)
        if v is None:
            return None
        if v:
            out[packer.pack(w)] = v
    return out


@dataclass
class _Origin:
    """How a modular basis element arose; ``item`` is None for defining relations."""

    relation: Optional[int] = None
    item: Optional[tuple] = None
    used: Tuple[int, ...] = ()
    active: bool = False
    sugar: int = 0


class ModularCompletion:
    """Ambiguity resolution over GF(p), resumable degree by degree.

    Ambiguities are processed in order of sugar, so the rules of sugar at
    most ``d`` are exactly a completion truncated at ``d``, and a run that
    went further can still answer questions at ``d``.  With ``bounded``
    false the sugar of every rule is its lead length and no reduction is
    restricted: this is ordinary completion by overlap-word degree.
    """

    def __init__(self, relations: Sequence[ModPoly], relation_ids: Sequence[int], prime: int, packer: WordPacker,
                 max_rules: int = 20000, bounded: bool = True):
        self.p = prime
        self.bounded = bounded
        self.packer = packer
        self.bits = packer.bits
        self.max_rules = max_rules
        self.elems: List[ModPoly] = []
        self.origins: List[_Origin] = []
        # lead -> (index, tail as [(value, length, coeff)], sugar - len(lead))
        self.lead_index: Dict[int, Tuple[int, list, int]] = {}
        self.leads: List[Tuple[int, int]] = []
        self._lengths: List[int] = []
        self._prefix: Dict[int, List[Tuple[int, int]]] = {}
        self._suffix: Dict[int, List[Tuple[int, int]]] = {}
        self._windows: Dict[int, List[Tuple[int, int, int]]] = {}
        self.pairs: list = []
        self.seen: Set[tuple] = set()
        self.reached = 0
        self.exhausted = False
        for rel, rid in zip(relations, relation_ids):
            self._add_relation(rel, rid)

    # -- word helpers ------------------------------------------------------

    def _len(self, c: int) -> int:
        return (c.bit_length() - 1) // self.bits

    def _sub(self, c: int, n: int, start: int, length: int) -> int:
        """Packed subword of ``c`` (length ``n``) at ``start``."""
        b = self.bits
        return (1 << b * length) | ((c >> b * (n - start - length)) & ((1 << b * length) - 1))

    # -- rules -------------------------------------------------------------

    def _monic(self, poly: ModPoly) -> ModPoly:
        lead = max(poly)
        inv = pow(poly[lead], -1, self.p)
        return {w: c * inv % self.p for w, c in poly.items()}

    def _activate(self, index: int):
        poly = self.elems[index]
        lead = max(poly)
        p = self.p
        b = self.bits
        tail = []
        for w, c in poly.items():
            if w != lead:
                n = self._len(w)
                tail.append((w ^ (1 << b * n), n, (-c) % p))
        origin = self.origins[index]
        origin.active = True
        n = self._len(lead)
        if lead in self.lead_index:
            raise AssertionError("duplicate leading word")
        self.lead_index[lead] = (index, tail, origin.sugar - n)
        if n not in self._lengths:
            self._lengths.append(n)
            self._lengths.sort()
        self._queue(lead, n, index)
        self.leads.append((lead, index))
        for s in range(1, n):
            self._prefix.setdefault(self._sub(lead, n, 0, s), []).append((lead, index))
            self._suffix.setdefault(self._sub(lead, n, n - s, s), []).append((lead, index))
        for start in range(n):
            for length in range(1, n - start + 1):
                if length < n:
                    key = self._sub(lead, n, start, length)
                    self._windows.setdefault(key, []).append((lead, index, start))

    def _find(self, c: int, n: int, budget: int):
        b = self.bits
        index = self.lead_index
        for start in range(n):
            for length in self._lengths:
                rest = n - start - length
                if rest < 0:
                    break
                key = (1 << b * length) | ((c >> b * rest) & ((1 << b * length) - 1))
                hit = index.get(key)
                if hit is not None and hit[2] <= budget:
                    return start, length, hit
        return None

    def reduce(self, poly: ModPoly, sugar: Optional[int]) -> Tuple[ModPoly, Tuple[int, ...]]:
        """Normal form mod p within sugar ``sugar`` (None: unrestricted) and the basis indices used."""
        p = self.p
        b = self.bits
        terms = dict(poly)
        heap = [-w for w in terms]
        heapq.heapify(heap)
        result: ModPoly = {}
        used: Set[int] = set()
        find = self._find
        while heap:
            w = -heapq.heappop(heap)
            c = terms.pop(w, None)
            if c is None:
                continue
            n = (w.bit_length() - 1) // b
            hit = find(w, n, 0 if sugar is None else sugar - n)
            if hit is None:
                result[w] = c
                continue
            start, length, (index, tail, _) = hit
            used.add(index)
            rest = n - start - length
            u = w >> b * (n - start)
            v = w & ((1 << b * rest) - 1)
            for tv, tl, d in tail:
                nw = (((u << b * tl) | tv) << b * rest) | v
                old = terms.get(nw)
                if old is None:
                    terms[nw] = c * d % p
                    heapq.heappush(heap, -nw)
                else:
                    s = (old + c * d) % p
                    if s:
                        terms[nw] = s
                    else:
                        del terms[nw]
        return result, tuple(sorted(used))

    def _add_relation(self, rel: ModPoly, rid: int):
        index = len(self.elems)
        monic = self._monic(rel)
        self.elems.append(monic)
        degree = self._len(max(monic))
        self.origins.append(_Origin(relation=rid, sugar=degree))
        nf, used = self.reduce(monic, degree if self.bounded else None)
        if not nf:
            return
        if not used:
            self._activate(index)
            return
        # inter-reduced copy of the relation
        self._add_derived(nf, ("relation", index), used, degree)

    def _add_derived(self, nf: ModPoly, item: tuple, used: Tuple[int, ...], sugar: int):
        index = len(self.elems)
        monic = self._monic(nf)
        self.elems.append(monic)
        if not self.bounded:
            sugar = self._len(max(monic))
        self.origins.append(_Origin(item=item, used=used, sugar=sugar))
        self._activate(index)

    def _push(self, w: int, ia: int, ib: int, kind: int, k: int):
        # sugar of the ambiguity: both sides lifted to the word w
        n = self._len(w)
        sa = self.origins[ia].sugar - self._len(max(self.elems[ia]))
        sb = self.origins[ib].sugar - self._len(max(self.elems[ib]))
        heapq.heappush(self.pairs, (n + max(sa, sb), w, ia, ib, kind, k))

    def _queue(self, lead: int, n: int, index: int):
        b = self.bits
        push = self._push
        for s in range(1, n):
            # lead on the left, an older lead starting with its suffix
            for other, j in self._prefix.get(self._sub(lead, n, n - s, s), ()):
                m = self._len(other)
                push((lead << b * (m - s)) | (other & ((1 << b * (m - s)) - 1)), index, j, 0, s)
            # lead on the right
            for other, j in self._suffix.get(self._sub(lead, n, 0, s), ()):
                push((other << b * (n - s)) | (lead & ((1 << b * (n - s)) - 1)), j, index, 0, s)
            # self-overlap (the new lead is not indexed yet)
            if self._sub(lead, n, n - s, s) == self._sub(lead, n, 0, s):
                push((lead << b * (n - s)) | (lead & ((1 << b * (n - s)) - 1)), index, index, 0, s)
        # this lead inside an older one
        for other, j, start in self._windows.get(lead, ()):
            push(other, j, index, 1, start)
        # an older lead inside this one
        for start in range(n):
            for length in self._lengths:
                if length >= n or start + length > n:
                    continue
                hit = self.lead_index.get(self._sub(lead, n, start, length))
                if hit is not None and hit[0] != index:
                    push(lead, index, hit[0], 1, start)

    def _spoly(self, item) -> ModPoly:
        _, _, ia, ib, kind, k = item
        p = self.p
        b = self.bits
        fa, fb = self.elems[ia], self.elems[ib]
        la, lb = max(fa), max(fb)
        na, nb = self._len(la), self._len(lb)
        out: ModPoly = {}
        if kind == 0:
            # fa * v - u * fb where lead(fa) = u o, lead(fb) = o v and |o| = k
            vl = nb - k
            v = lb & ((1 << b * vl) - 1)
            u = la >> b * k
            for w, c in fa.items():
                out[(w << b * vl) | v] = c
            for w, c in fb.items():
                wl = self._len(w)
                key = (u << b * wl) | (w ^ (1 << b * wl))
                out[key] = (out.get(key, 0) - c) % p
        else:
            # fa - u * fb * v with lead(fb) at position k of lead(fa)
            vl = na - k - nb
            u = la >> b * (na - k)
            v = la & ((1 << b * vl) - 1)
            out.update(fa)
            for w, c in fb.items():
                wl = self._len(w)
                key = (((u << b * wl) | (w ^ (1 << b * wl))) << b * vl) | v
                out[key] = (out.get(key, 0) - c) % p
        return {w: c for w, c in out.items() if c}

    def advance(self, degree: int) -> bool:
        """Resolve all queued ambiguities of sugar <= ``degree``; False if the rule cap is hit."""
        if degree <= self.reached:
            return not self.exhausted
        pairs = self.pairs
        while pairs and pairs[0][0] <= degree:
            item = heapq.heappop(pairs)
            if item in self.seen:
                continue
            self.seen.add(item)
            if len(self.leads) >= self.max_rules:
                self.exhausted = True
                heapq.heappush(pairs, item)
                self.seen.discard(item)
                return False
            nf, used = self.reduce(self._spoly(item), item[0] if self.bounded else None)
            if nf:
                self._add_derived(nf, item, used, item[0])
        self.reached = degree
        return True

    def cone(self, used: Sequence[int]) -> List[int]:
        """Basis indices the given indices depend on, in increasing order."""
        need: Set[int] = set()
        stack = list(used)
        while stack:
            i = stack.pop()
            if i in need:
                continue
            need.add(i)
            o = self.origins[i]
            if o.item is not None:
                if o.item[0] == "relation":
                    stack.append(o.item[1])
                else:
                    stack.extend(o.item[2:4])
                stack.extend(o.used)
        return sorted(need)


def symbol_levels(presentation: Presentation, start: FrozenSet[int], max_levels: int = 4) -> List[FrozenSet[int]]:
    """Growing symbol sets: add the symbols of every relation with a word inside the current set."""
    levels = [frozenset(start)]
    current = frozenset(start)
    for _ in range(max_levels):
        grown = set(current)
        for r in presentation.relations:
            if any(w and set(w) <= current for w in r.terms):
                grown |= r.symbols()
        grown = frozenset(grown)
        if grown == current:
            break
        levels.append(grown)
        current = grown
    return levels


@dataclass
class SearchResult:
    certificate: Optional[Certificate]
    degree: Optional[int] = None
    symbols: FrozenSet[int] = frozenset()
    attempts: List[str] = field(default_factory=list)


class LiftFailure(Exception):
    """The exact replay of a modular computation did not follow the modular one."""


class ModularContext:
    """A modular point for a presentation and an exact basis shared by all lifts.

    The point is chosen so that every relation keeps its leading word.
    """

    def __init__(self, presentation: Presentation, seed: int = 0):
        self.presentation = presentation
        self.packer = WordPacker(len(presentation.alphabet))
        self.basis = IdealBasis(presentation.alphabet, presentation.relations, presentation.labels)
        self._rng = random.Random(seed)
        self.point, self._images = self._choose_point()
        self._exact: Dict[Tuple[int, int], int] = {}
        self._serial = 0

    def _choose_point(self):
        pk = self.packer
        rels = self.presentation.relations
        for _ in range(50):
            pt = random_point(self._rng)
            images = [mod_image(r, pt, pk) for r in rels]
            if all(m and max(m) == pk.pack(r.leading_word()) for m, r in zip(images, rels)):
                return pt, images
        raise RuntimeError("no modular point keeps every relation's leading word")

    def image(self, x: NcPoly) -> Optional[ModPoly]:
        return mod_image(x, self.point, self.packer)

    def completion(self, relation_ids: Sequence[int], bounded: bool, max_rules: int) -> ModularCompletion:
        mc = ModularCompletion([self._images[i] for i in relation_ids], relation_ids, self.point.prime,
                               self.packer, max_rules, bounded)
        mc.tag = self._serial
        self._serial += 1
        return mc

    def lift(self, mc: ModularCompletion, used: Sequence[int]) -> RewriteSystem:
        """Exact rewrite system made of the cone of ``used``, lifted in index order."""
        rs = RewriteSystem(self.presentation, basis=self.basis)
        exact = self._exact
        for i in mc.cone(used):
            o = mc.origins[i]
            key = (mc.tag, i)
            if key not in exact:
                if o.item is None:
                    exact[key] = o.relation
                else:
                    self._lift_element(mc, i, rs)
                    continue
            if o.active:
                rs.adopt_element(exact[key], o.sugar if mc.bounded else None)
        return rs

    def _lift_element(self, mc: ModularCompletion, i: int, rs: RewriteSystem):
        o = mc.origins[i]
        exact = self._exact
        element = self.basis.element
        if o.item[0] == "relation":
            j = exact[(mc.tag, o.item[1])]
            s, base = element(j), [(ONE, (), j, ())]
        else:
            _, _, ia, ib, kind, k = o.item
            ja, jb = exact[(mc.tag, ia)], exact[(mc.tag, ib)]
            s, base = s_polynomial(element(ja), element(jb), ja, jb, kind, k)
        sugar = o.sugar if mc.bounded else None
        nf, trace = rs.reduce_traced(s, sugar=sugar)
        if nf.is_zero() or self.packer.pack(nf.leading_word()) != max(mc.elems[i]):
            raise LiftFailure("exact elimination diverged from the modular image")
        rule = rs.adopt_derived(nf, base + [(-c, u, k2, v) for c, u, k2, v in trace], sugar)
        exact[(mc.tag, i)] = rule.index


class CertificateSearch:
    """Sugar-bounded certificate search for one presentation, reusing work across targets."""

    def __init__(self, presentation: Presentation, seed: int = 0, max_levels: int = 4, max_rules: int = 20000,
                 context: Optional[ModularContext] = None):
        self.presentation = presentation
        self.max_levels = max_levels
        self.max_rules = max_rules
        self.context = context or ModularContext(presentation, seed)
        self._levels: Dict[FrozenSet[int], ModularCompletion] = {}

    @property
    def basis(self) -> IdealBasis:
        return self.context.basis

    def _completion(self, sigma: FrozenSet[int]) -> Optional[ModularCompletion]:
        mc = self._levels.get(sigma)
        if mc is None:
            ids = [i for i, r in enumerate(self.presentation.relations) if r.symbols() <= sigma]
            if not ids:
                return None
            mc = self.context.completion(ids, True, self.max_rules)
            self._levels[sigma] = mc
        return mc

    def search(self, target: NcPoly, certificate_degree: int,
               symbols: Optional[FrozenSet[int]] = None) -> SearchResult:
        """Look for an exactly verified certificate of ``target`` of degree <= ``certificate_degree``."""
        result = SearchResult(None)
        if target.is_zero():
            result.certificate = Certificate(self.basis, [])
            result.degree = 0
            return result
        if target.degree() > certificate_degree:
            result.attempts.append(f"target degree {target.degree()} exceeds the certificate bound")
            return result
        tgt = self.context.image(target)
        if tgt is None:
            result.attempts.append("target undefined at the modular point")
            return result
        start = symbols if symbols is not None else target.symbols()
        for sigma in symbol_levels(self.presentation, frozenset(start), self.max_levels):
            if self._search_level(sigma, target, tgt, certificate_degree, result):
                break
        return result

    def _search_level(self, sigma, target, tgt, high, result) -> bool:
        tag = f"|symbols|={len(sigma)}"
        mc = self._completion(sigma)
        if mc is None:
            result.attempts.append(f"{tag}: no relations")
            return False
        for d in range(max(1, target.degree()), high + 1):
            ok = mc.advance(d)
            nf, used = mc.reduce(tgt, d)
            if not nf:
                try:
                    rs = self.context.lift(mc, used)
                except LiftFailure as exc:
                    result.attempts.append(f"{tag} degree {d}: {exc}")
                    return False
                exact_nf, trace = rs.reduce_traced(target, sugar=d)
                cert = Certificate(self.basis, trace, kind="certificate")
                if not exact_nf.is_zero() or cert.flat_degree() > d or not cert.replay(target):
                    result.attempts.append(f"{tag} degree {d}: exact replay failed")
                    return False
                result.certificate = cert
                result.degree = max(cert.flat_degree(), target.degree())
                result.symbols = sigma
                result.attempts.append(f"{tag} degree {result.degree}: found")
                return True
            if not ok:
                result.attempts.append(f"{tag} degree {d}: rule cap {self.max_rules} reached")
                return False
        result.attempts.append(f"{tag}: nonzero remainder through degree {high}")
        return False


class LazyRewriteSystem:
    """Degree-bounded completion over GF(p), lifted to Q(q) only where used.

    Behaves like the exact completion at ``degree_bound`` for reduction: the
    rules a reduction touches (and everything they were derived from) are
    recomputed exactly, and the exact trace is returned.
    """

    def __init__(self, presentation: Presentation, degree_bound: int, seed: int = 0, max_rules: int = 50000,
                 context: Optional[ModularContext] = None):
        if degree_bound < presentation.max_degree():
            raise ValueError(
                f"degree bound {degree_bound} is below the relation degree {presentation.max_degree()}"
            )
        self.presentation = presentation
        self.alphabet = presentation.alphabet
        self.degree_bound = degree_bound
        self.max_rules = max_rules
        self.context = context or ModularContext(presentation, seed)
        self._mc: Optional[ModularCompletion] = None
        self.status = COMPLETE
        self.completed_through = 0

    @property
    def basis(self) -> IdealBasis:
        return self.context.basis

    def _completion(self) -> ModularCompletion:
        if self._mc is None:
            mc = self.context.completion(list(range(len(self.presentation.relations))), False, self.max_rules)
            for d in range(1, self.degree_bound + 1):
                if not mc.advance(d):
                    self.status = BOUND_EXHAUSTED
                    break
                self.completed_through = d
            self._mc = mc
        return self._mc

    def rule_count(self) -> int:
        return len(self._completion().leads)

    def leading_words(self) -> List[Word]:
        """Leading words of the modular completion (equal to the exact ones wherever lifted)."""
        mc = self._completion()
        return [self.context.packer.unpack(c) for c in mc.lead_index]

    def reduce_traced(self, x: NcPoly) -> Tuple[NcPoly, List]:
        mc = self._completion()
        image = self.context.image(x)
        if image is None:
            raise LiftFailure("a coefficient is undefined at the modular point")
        nf, used = mc.reduce(image, None)
        rs = self.context.lift(mc, used)
        exact_nf, trace = rs.reduce_traced(x)
        if self.context.image(exact_nf) != nf:
            raise LiftFailure("exact normal form differs from the modular one")
        return exact_nf, trace

    def reduce(self, x: NcPoly) -> NcPoly:
        return self.reduce_traced(x)[0]

    def certificate(self, x: NcPoly) -> Tuple[NcPoly, Certificate]:
        nf, trace = self.reduce_traced(x)
        return nf, Certificate(self.basis, trace, kind="trace")
