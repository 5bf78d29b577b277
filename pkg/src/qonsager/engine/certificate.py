"""Ideal-membership witnesses and their replay.

An :class:`IdealBasis` holds the defining relations (indices ``0..n-1``)
followed by derived elements, each carrying the combination of earlier
elements it was computed from.  A :class:`Certificate` expresses a target
as ``sum c * u * e_k * v`` over basis elements ``e_k``.  Replaying a
certificate re-checks every derived element it depends on, in index order,
down to the defining relations, using nothing but free-algebra arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from ..freealg import Alphabet, NcPoly, Word
from ..scalar import Scalar

__all__ = [
    "Term",
    "IdealBasis",
    "Certificate",
    "combine",
    "merge_terms",
    "replay_json",
    "ReplayError",
]

Term = Tuple[Scalar, Word, int, Word]


class ReplayError(ValueError):
    """A serialized witness failed to replay."""


def merge_terms(terms: Iterable[Term]) -> List[Term]:
    """Sum coefficients of identical (left, index, right) placements."""
    acc: Dict[Tuple[Word, int, Word], Scalar] = {}
    order: List[Tuple[Word, int, Word]] = []
    for c, u, k, v in terms:
        key = (u, k, v)
        old = acc.get(key)
        if old is None:
            acc[key] = c
            order.append(key)
        else:
            acc[key] = old + c
    return [(acc[key], key[0], key[1], key[2]) for key in order if acc[key]]


def combine(alphabet: Alphabet, terms: Iterable[Term], element) -> NcPoly:
    """Evaluate ``sum c * u * element(k) * v`` in the free algebra."""
    out: Dict[Word, Scalar] = {}
    for c, u, k, v in terms:
        for w, d in element(k).terms.items():
            key = u + w + v
            old = out.get(key)
            out[key] = c * d if old is None else old + c * d
    return NcPoly._raw(alphabet, {w: c for w, c in out.items() if c})


@dataclass
class _Derived:
    poly: NcPoly
    terms: List[Term]


class IdealBasis:
    """Defining relations plus derived ideal elements with derivation logs."""

    def __init__(self, alphabet: Alphabet, relations: Sequence[NcPoly], labels: Optional[Sequence[str]] = None):
        self.alphabet = alphabet
        self.relations: List[NcPoly] = list(relations)
        self.labels = list(labels) if labels is not None else [f"r{i}" for i in range(len(self.relations))]
        self.derived: List[_Derived] = []
        self._verified = 0
        self._flat_degree: Dict[int, int] = {}

    def __len__(self):
        return len(self.relations) + len(self.derived)

    @property
    def n_relations(self) -> int:
        return len(self.relations)

    def element(self, k: int) -> NcPoly:
        n = len(self.relations)
        return self.relations[k] if k < n else self.derived[k - n].poly

    def is_derived(self, k: int) -> bool:
        return k >= len(self.relations)

    def log(self, k: int) -> List[Term]:
        return self.derived[k - len(self.relations)].terms

    def add_derived(self, poly: NcPoly, terms: List[Term]) -> int:
        index = len(self)
        for _, _, k, _ in terms:
            if not 0 <= k < index:
                raise ValueError("derived element may only reference earlier elements")
        self.derived.append(_Derived(poly, terms))
        return index

    def verify(self, upto: Optional[int] = None) -> bool:
        """Re-check derived elements with index < ``upto``; results are cached."""
        if upto is None:
            upto = len(self)
        n = len(self.relations)
        for index in range(max(self._verified, n), upto):
            d = self.derived[index - n]
            if combine(self.alphabet, d.terms, self.element) != d.poly:
                return False
            self._verified = index + 1
        return True

    def dependencies(self, indices: Iterable[int]) -> Set[int]:
        """All derived element indices reachable from ``indices``."""
        seen: Set[int] = set()
        stack = [k for k in indices if self.is_derived(k)]
        while stack:
            k = stack.pop()
            if k in seen:
                continue
            seen.add(k)
            for _, _, j, _ in self.log(k):
                if self.is_derived(j) and j not in seen:
                    stack.append(j)
        return seen

    def flat_degree(self, k: int) -> int:
        """Largest degree of a placed relation once element ``k`` is expanded over relations."""
        if not self.is_derived(k):
            return self.relations[k].degree()
        memo = self._flat_degree
        if k not in memo:
            # iterative post-order: derivation chains can be long
            stack = [k]
            while stack:
                top = stack[-1]
                pending = [j for _, _, j, _ in self.log(top) if self.is_derived(j) and j not in memo]
                if pending:
                    stack.extend(pending)
                    continue
                stack.pop()
                memo[top] = max(
                    (len(u) + self.flat_degree(j) + len(v) for _, u, j, v in self.log(top)), default=-1
                )
        return memo[k]

    def flat_terms(self, k: int, _memo: Optional[Dict[int, List[Term]]] = None) -> List[Term]:
        """Element ``k`` written over defining relations only."""
        if not self.is_derived(k):
            return [(Scalar(1), (), k, ())]
        memo = _memo if _memo is not None else {}
        if k in memo:
            return memo[k]
        out: List[Term] = []
        for c, u, j, v in self.log(k):
            for c2, u2, i, v2 in self.flat_terms(j, memo):
                out.append((c * c2, u + u2, i, v2 + v))
        memo[k] = merge_terms(out)
        return memo[k]


class Certificate:
    """``target = sum c * u * e_k * v`` over the elements of an :class:`IdealBasis`."""

    __slots__ = ("basis", "terms", "kind")

    def __init__(self, basis: IdealBasis, terms: Iterable[Term], kind: str = "certificate"):
        self.basis = basis
        self.terms: List[Term] = merge_terms(terms)
        self.kind = kind

    def __len__(self):
        return len(self.terms)

    def evaluate(self) -> NcPoly:
        return combine(self.basis.alphabet, self.terms, self.basis.element)

    def replay(self, target: NcPoly) -> bool:
        """Exact re-verification of the whole derivation chain and the final sum."""
        used = [k for _, _, k, _ in self.terms]
        if used and not self.basis.verify(max(used) + 1):
            return False
        return self.evaluate() == target

    def degree(self) -> int:
        """Largest degree of a placed product u * e_k * v."""
        return max(
            (len(u) + self.basis.element(k).degree() + len(v) for _, u, k, v in self.terms),
            default=-1,
        )

    def flat_degree(self) -> int:
        """Degree of the certificate written over defining relations only."""
        return max(
            (len(u) + self.basis.flat_degree(k) + len(v) for _, u, k, v in self.terms),
            default=-1,
        )

    def relations_used(self) -> List[int]:
        return sorted({k for _, _, k, _ in self.flatten().terms})

    def flatten(self) -> "Certificate":
        memo: Dict[int, List[Term]] = {}
        out: List[Term] = []
        for c, u, k, v in self.terms:
            for c2, u2, i, v2 in self.basis.flat_terms(k, memo):
                out.append((c * c2, u + u2, i, v2 + v))
        return Certificate(self.basis, out, self.kind)

    def scaled(self, c: Scalar, left: Word = (), right: Word = ()) -> List[Term]:
        return [(c * d, left + u, k, v + right) for d, u, k, v in self.terms]

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        al = self.basis.alphabet
        word = al.render_word

        def enc(terms: List[Term]) -> list:
            return [[c.render(), word(u), k, word(v)] for c, u, k, v in terms]

        deps = sorted(self.basis.dependencies(k for _, _, k, _ in self.terms))
        return {
            "kind": self.kind,
            "generators": list(al.names),
            "relations": [r.render() for r in self.basis.relations],
            "derived": [
                {"index": k, "poly": self.basis.element(k).render(), "terms": enc(self.basis.log(k))}
                for k in deps
            ],
            "terms": enc(self.terms),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def replay_json(text: str, target_text: str, relations: Optional[Sequence[str]] = None) -> bool:
    """Independent replay of a serialized witness.

    Everything is re-parsed from text.  ``relations`` (rendered defining
    relations) may be supplied to pin the witness to a known presentation;
    otherwise the embedded list is used.
    """
    from ..expr import parse_expr
    from ..scalar import Scalar as _S

    data = json.loads(text)
    al = Alphabet(data["generators"])
    rels_text = data["relations"]
    if relations is not None:
        if len(relations) != len(rels_text):
            raise ReplayError("relation count mismatch")
        for mine, theirs in zip(relations, rels_text):
            if parse_expr(mine, al) != parse_expr(theirs, al):
                raise ReplayError("embedded relations differ from the presentation")
    elements: Dict[int, NcPoly] = {i: parse_expr(r, al) for i, r in enumerate(rels_text)}

    def dec(rows) -> List[Term]:
        return [(_S.parse(c), al.parse_word(u), int(k), al.parse_word(v)) for c, u, k, v in rows]

    for entry in sorted(data["derived"], key=lambda e: e["index"]):
        index = entry["index"]
        terms = dec(entry["terms"])
        if any(k not in elements or k >= index for _, _, k, _ in terms):
            raise ReplayError(f"derived element {index} references an unknown element")
        poly = parse_expr(entry["poly"], al)
        if combine(al, terms, elements.__getitem__) != poly:
            raise ReplayError(f"derived element {index} does not replay")
        elements[index] = poly
    terms = dec(data["terms"])
    if any(k not in elements for _, _, k, _ in terms):
        raise ReplayError("certificate references an unknown element")
    return combine(al, terms, elements.__getitem__) == parse_expr(target_text, al)
