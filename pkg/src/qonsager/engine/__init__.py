"""Quotient-algebra reasoning: presentations, completion, certificates and verdicts."""

from .certificate import Certificate, IdealBasis, ReplayError, replay_json
from .presentation import Presentation, RelationLogEntry
from .prove import (
    ENGINES,
    INCONCLUSIVE,
    PROVED,
    Prover,
    Verdict,
    check_morphism_well_defined,
    prove_equal,
)
from .rewrite import BOUND_EXHAUSTED, COMPLETE, RewriteSystem, Rule, complete, normal_form_basis
from .search import CertificateSearch, LazyRewriteSystem, LiftFailure, ModularContext

__all__ = [
    "BOUND_EXHAUSTED",
    "COMPLETE",
    "Certificate",
    "CertificateSearch",
    "ENGINES",
    "INCONCLUSIVE",
    "IdealBasis",
    "LazyRewriteSystem",
    "LiftFailure",
    "ModularContext",
    "PROVED",
    "Presentation",
    "Prover",
    "RelationLogEntry",
    "ReplayError",
    "RewriteSystem",
    "Rule",
    "Verdict",
    "check_morphism_well_defined",
    "complete",
    "normal_form_basis",
    "prove_equal",
    "replay_json",
]
