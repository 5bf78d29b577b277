"""Exact symbolic computation in finitely presented algebras over Q(q).

The q-Onsager algebra and its current algebra are built in :mod:`.onsager`
and :mod:`.current`; both carry an action of Z2*Z2*Z2 from :mod:`.groups`
and a catalog of identities checked with certificate-backed verdicts.
"""

from .engine import INCONCLUSIVE, PROVED, Presentation, Prover, Verdict, complete, replay_json
from .expr import ExprError, parse_expr, parse_scalar
from .freealg import ANTIHOM, HOM, Alphabet, Morphism, NcPoly, bracket, compose, q_bracket_op
from .groups import FreeProductWord, GroupActionBinding, SemidirectWord, realize
from .scalar import ONE, Q, ZERO, Scalar, eval_mod, q_bracket

__version__ = "0.1.0"

__all__ = [
    "ANTIHOM",
    "Alphabet",
    "ExprError",
    "FreeProductWord",
    "GroupActionBinding",
    "HOM",
    "INCONCLUSIVE",
    "Morphism",
    "NcPoly",
    "ONE",
    "PROVED",
    "Presentation",
    "Prover",
    "Q",
    "Scalar",
    "SemidirectWord",
    "Verdict",
    "ZERO",
    "bracket",
    "complete",
    "compose",
    "eval_mod",
    "parse_expr",
    "parse_scalar",
    "q_bracket",
    "q_bracket_op",
    "realize",
    "replay_json",
]
