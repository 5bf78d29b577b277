"""Three-valued equality in a quotient: PROVED (with a replayable witness) or INCONCLUSIVE.

A nonzero normal form is never read as a disproof: completion past the
configured bound could still produce new low-degree rules, because the
relations are inhomogeneous.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from ..freealg import Morphism, NcPoly
from .certificate import Certificate, replay_json
from .presentation import Presentation
from .search import CertificateSearch, LiftFailure

__all__ = [
    "PROVED",
    "INCONCLUSIVE",
    "ENGINES",
    "Verdict",
    "Prover",
    "prove_equal",
    "check_morphism_well_defined",
]

PROVED = "PROVED"
INCONCLUSIVE = "INCONCLUSIVE"
ENGINES = ("rewrite", "certificate", "both")


@dataclass
class Verdict:
    """Outcome of one equality check.

    ``target`` is the difference that was shown to lie in the ideal (or not).
    A PROVED verdict carries a certificate or a reduction trace; an
    INCONCLUSIVE one carries the nonzero normal form reached, if any.
    """

    status: str
    target: NcPoly
    witness: Optional[Certificate] = None
    remainder: Optional[NcPoly] = None
    engine: str = ""
    degree: Optional[int] = None
    notes: List[str] = field(default_factory=list)
    millis: float = 0.0

    @property
    def proved(self) -> bool:
        return self.status == PROVED

    @property
    def witness_kind(self) -> str:
        if self.status == PROVED:
            if self.witness is None or not self.witness.terms:
                return "empty"
            return self.witness.kind
        return "normal form" if self.remainder is not None else "none"

    def witness_json(self) -> str:
        if self.status == PROVED and self.witness is not None:
            return self.witness.to_json()
        if self.remainder is not None:
            return json.dumps({"kind": "normal form", "poly": self.remainder.render()}, separators=(",", ":"))
        return json.dumps({"kind": self.witness_kind}, separators=(",", ":"))

    @property
    def witness_bytes(self) -> int:
        return len(self.witness_json())

    def replay(self, independent: bool = True, relations: Optional[List[str]] = None) -> bool:
        """Re-verify a PROVED witness exactly; INCONCLUSIVE verdicts have nothing to replay.

        With ``independent`` the serialized witness is also re-parsed and
        replayed from text, optionally pinned to rendered ``relations``.
        """
        if self.status != PROVED:
            return False
        if self.witness is None or not self.witness.terms:
            return self.target.is_zero()
        if not self.witness.replay(self.target):
            return False
        if independent:
            return replay_json(self.witness_json(), self.target.render(), relations)
        return True


class Prover:
    """Equality checks in one presentation with a rewrite system and a certificate search.

    ``rewrite_system`` is anything with ``certificate(x) -> (nf, Certificate)``
    (an exact :class:`RewriteSystem` or a :class:`LazyRewriteSystem`).
    """

    def __init__(
        self,
        presentation: Presentation,
        rewrite_system=None,
        certificate_degree: int = 8,
        engine: str = "both",
        search: Optional[CertificateSearch] = None,
        seed: int = 0,
    ):
        if engine not in ENGINES:
            raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")
        self.presentation = presentation
        self.rewrite_system = rewrite_system
        self.certificate_degree = certificate_degree
        self.engine = engine
        self._search = search
        self.seed = seed

    @property
    def search(self) -> CertificateSearch:
        if self._search is None:
            context = getattr(self.rewrite_system, "context", None)
            self._search = CertificateSearch(self.presentation, seed=self.seed, context=context)
        return self._search

    def prove_zero(self, target: NcPoly) -> Verdict:
        start = time.perf_counter()
        verdict = self._prove_zero(target)
        verdict.millis = (time.perf_counter() - start) * 1000.0
        return verdict

    def prove_equal(self, x: NcPoly, y: NcPoly) -> Verdict:
        return self.prove_zero(x - y)

    def _prove_zero(self, target: NcPoly) -> Verdict:
        if target.is_zero():
            return Verdict(PROVED, target, None, engine="trivial", degree=0)
        notes: List[str] = []
        reduced = None
        if self.engine in ("rewrite", "both"):
            reduced = self._reduce(target, notes)
            if reduced is not None and reduced[0].is_zero():
                cert = reduced[1]
                return Verdict(PROVED, target, cert, engine="rewrite",
                               degree=max(cert.flat_degree(), target.degree()), notes=notes)
        if self.engine in ("certificate", "both"):
            result = self.search.search(target, self.certificate_degree)
            notes.extend(f"certificate: {a}" for a in result.attempts)
            if result.certificate is not None:
                return Verdict(PROVED, target, result.certificate, engine="certificate", degree=result.degree,
                               notes=notes)
        if reduced is None:
            # normal form as evidence only
            reduced = self._reduce(target, notes)
        remainder = reduced[0] if reduced is not None else None
        return Verdict(INCONCLUSIVE, target, None, remainder=remainder, notes=notes)

    def _reduce(self, target: NcPoly, notes: List[str]):
        if self.rewrite_system is None:
            notes.append("rewrite: no rewrite system")
            return None
        try:
            nf, cert = self.rewrite_system.certificate(target)
        except LiftFailure as exc:
            notes.append(f"rewrite: {exc}")
            return None
        if not nf.is_zero():
            notes.append(f"rewrite: nonzero normal form with {len(nf)} terms")
        return nf, cert

    def well_defined(self, m: Morphism) -> List[Tuple[str, Verdict]]:
        """Per relation ``r``: is ``m(r)`` zero in the quotient?"""
        if m.alphabet != self.presentation.alphabet:
            raise ValueError("morphism over a different alphabet")
        return [(label, self.prove_zero(m.apply(r)))
                for label, r in zip(self.presentation.labels, self.presentation.relations)]


def prove_equal(rs, presentation: Presentation, x: NcPoly, y: NcPoly, certificate_degree: int,
                engine: str = "both", search: Optional[CertificateSearch] = None) -> Verdict:
    """PROVED iff ``x - y`` reduces to zero or has a certificate within ``certificate_degree``."""
    return Prover(presentation, rs, certificate_degree, engine, search).prove_equal(x, y)


def check_morphism_well_defined(rs, presentation: Presentation, m: Morphism, certificate_degree: int,
                                engine: str = "both",
                                search: Optional[CertificateSearch] = None) -> List[Tuple[str, Verdict]]:
    """Verdict for ``m(r) = 0`` in the quotient, for every relation ``r``."""
    return Prover(presentation, rs, certificate_degree, engine, search).well_defined(m)
