"""Finitely presented algebras: an alphabet plus monic relation polynomials."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from ..freealg import Alphabet, NcPoly
from ..scalar import ONE

__all__ = ["Presentation", "RelationLogEntry"]


@dataclass(frozen=True)
class RelationLogEntry:
    label: str
    reason: str


@dataclass
class Presentation:
    """Generators and relations ``r = 0`` under the degree-lex order of ``alphabet``.

    Relations are stored monic (leading coefficient 1).  Zero relations and
    scalar duplicates of earlier relations are dropped and logged.
    """

    alphabet: Alphabet
    relations: List[NcPoly] = field(default_factory=list)
    labels: List[str] = field(default_factory=list)
    dropped: List[RelationLogEntry] = field(default_factory=list)

    @classmethod
    def build(
        cls,
        alphabet: Alphabet,
        relations: Iterable[NcPoly],
        labels: Optional[Sequence[str]] = None,
    ) -> "Presentation":
        rels = list(relations)
        if labels is None:
            labels = [f"r{i}" for i in range(len(rels))]
        if len(labels) != len(rels):
            raise ValueError("one label per relation")
        self = cls(alphabet)
        for label, r in zip(labels, rels):
            self.add(r, label)
        return self

    def add(self, relation: NcPoly, label: str) -> bool:
        if relation.alphabet != self.alphabet:
            raise ValueError("relation over a foreign alphabet")
        if relation.is_zero():
            self.dropped.append(RelationLogEntry(label, "relation is identically zero"))
            return False
        monic = relation.scale(relation.leading_coeff().inverse())
        for other_label, other in zip(self.labels, self.relations):
            if other == monic:
                self.dropped.append(RelationLogEntry(label, f"duplicate of {other_label}"))
                return False
        self.relations.append(monic)
        self.labels.append(label)
        return True

    def __len__(self):
        return len(self.relations)

    def max_degree(self) -> int:
        return max((r.degree() for r in self.relations), default=0)

    def label_index(self, label: str) -> int:
        return self.labels.index(label)

    def restrict(self, symbols: Iterable[int]) -> Tuple["Presentation", List[int]]:
        """Sub-presentation of relations whose words use only ``symbols``.

        Returns the sub-presentation and, for each of its relations, the index
        of the same relation here.
        """
        allowed = frozenset(symbols)
        sub = Presentation(self.alphabet)
        origin = []
        for i, r in enumerate(self.relations):
            if r.symbols() <= allowed:
                sub.relations.append(r)
                sub.labels.append(self.labels[i])
                origin.append(i)
        return sub, origin

    def is_monic(self) -> bool:
        return all(r.leading_coeff() == ONE for r in self.relations)
