"""Command-line interface: ``verify``, ``reduce``, ``apply``, ``eliminate`` and ``basis``.

Exit status: 0 when every selected check has its expected status, 1 when
some check does not, 2 on configuration or input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import List, Optional, Sequence, TextIO

from . import current as cur
from . import onsager as ons
from .engine.prove import ENGINES
from .engine.rewrite import normal_form_basis
from .expr import ExprError, parse_expr
from .freealg import Alphabet
from .groups import FreeProductWord, GroupError, check_translations
from .report import EVIDENCE, PASS, Check, CheckResult, select

log = logging.getLogger("qonsager")

__all__ = [
    "TARGETS",
    "RunConfig",
    "ConfigError",
    "Catalog",
    "REPORT_SCHEMA",
    "cmd_verify",
    "cmd_reduce",
    "cmd_apply",
    "cmd_eliminate",
    "cmd_basis",
    "main",
]

TARGETS = ("onsager", "current", "groups", "all")
EXIT_OK, EXIT_UNEXPECTED, EXIT_CONFIG = 0, 1, 2

COMPOSITION = "compose(f, g) applies g first; the word x1...xn acts as x1 o ... o xn"
BINDING = "a = S o T1, b = T0 o S, c = S"
# T1 = Omega T0 Omega exactly, so its well-definedness (and T1inv's) follows from these;
# the direct checks are slow at the default bounds and opt-in (--all-morphisms).
CURRENT_WELL_DEFINED = ("Omega", "S", "T0", "T0inv")
CURRENT_ALL_MORPHISMS = ("Omega", "S", "T0", "T0inv", "T1", "T1inv")

REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["config", "convention", "checks"],
    "properties": {
        "config": {
            "type": "object",
            "required": ["target", "engine", "seed"],
            "properties": {
                "target": {"enum": list(TARGETS)},
                "engine": {"enum": list(ENGINES)},
                "seed": {"type": "integer"},
            },
        },
        "convention": {
            "type": "object",
            "required": ["composition", "binding", "monomial_order"],
        },
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "status", "expected", "witness_kind", "witness_bytes", "millis"],
                "properties": {
                    "id": {"type": "string"},
                    "status": {"type": "string"},
                    "expected": {"type": "string"},
                    "witness_kind": {"type": "string"},
                    "witness_bytes": {"type": "integer", "minimum": 0},
                    "millis": {"type": "number", "minimum": 0},
                    "degree": {"type": "integer"},
                    "detail": {"type": "string"},
                },
            },
        },
        "summary": {"type": "object"},
    },
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    target: str = "all"
    degree_bound: Optional[int] = None
    certificate_degree: Optional[int] = None
    index_bound: int = cur.DEFAULT_INDEX_BOUND
    engine: str = "both"
    check: Optional[str] = None
    output: str = "text"
    jobs: int = 1
    seed: int = 0
    all_morphisms: bool = False

    def validate(self) -> "RunConfig":
        if self.target not in TARGETS:
            raise ConfigError(f"unknown target {self.target!r}; expected one of {', '.join(TARGETS)}")
        if self.engine not in ENGINES:
            raise ConfigError(f"unknown engine {self.engine!r}; expected one of {', '.join(ENGINES)}")
        if self.degree_bound is not None and self.degree_bound < 4:
            raise ConfigError(f"degree bound {self.degree_bound} is below the relation degree 4")
        if self.certificate_degree is not None and self.certificate_degree < 1:
            raise ConfigError("certificate degree must be positive")
        if self.index_bound < 1:
            raise ConfigError("index bound must be at least 1")
        if self.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        if self.output not in ("text", "json"):
            raise ConfigError(f"unknown output format {self.output!r}")
        return self

    def onsager_bounds(self):
        return (self.degree_bound or ons.DEFAULT_DEGREE, self.certificate_degree or ons.DEFAULT_CERT_DEGREE)

    def current_bounds(self):
        return (self.degree_bound or cur.DEFAULT_DEGREE, self.certificate_degree or cur.DEFAULT_CERT_DEGREE)

    def to_dict(self) -> dict:
        out = asdict(self)
        if self.target in ("onsager", "groups", "all"):
            out["onsager"] = dict(zip(("degree_bound", "certificate_degree"), self.onsager_bounds()))
        if self.target in ("current", "all"):
            out["current"] = dict(zip(("degree_bound", "certificate_degree"), self.current_bounds()),
                                  index_bound=self.index_bound)
        return out


class Catalog:
    """Builds contexts on demand and lists the checks of a target in report order."""

    def __init__(self, config: RunConfig):
        self.config = config
        self._onsager: Optional[ons.OnsagerContext] = None
        self._current: Optional[cur.CurrentContext] = None

    def onsager(self) -> ons.OnsagerContext:
        if self._onsager is None:
            d, c = self.config.onsager_bounds()
            # well-definedness is resolved per check, so a failure shows up in the report
            self._onsager = ons.build_onsager(d, c, self.config.engine, self.config.seed, check_morphisms=False)
        return self._onsager

    def current(self) -> cur.CurrentContext:
        if self._current is None:
            d, c = self.config.current_bounds()
            self._current = cur.build_current(self.config.index_bound, d, c, self.config.engine, self.config.seed)
        return self._current

    def targets(self) -> List[str]:
        t = self.config.target
        return ["onsager", "current", "groups"] if t == "all" else [t]

    def checks(self) -> List[Check]:
        out: List[Check] = []
        for t in self.targets():
            out += getattr(self, f"_{t}_checks")()
        return out

    def _onsager_checks(self) -> List[Check]:
        ctx = self.onsager()
        return ons.section2_checks(ctx) + ons.note_checks(ctx) + ons.flipping_checks(ctx)

    def _current_checks(self) -> List[Check]:
        ctx = self.current()
        names = CURRENT_ALL_MORPHISMS if self.config.all_morphisms else CURRENT_WELL_DEFINED
        return (cur.section3_checks(ctx, names) + cur.elimination_checks(ctx)
                + cur.section4_checks(ctx))

    def _groups_checks(self) -> List[Check]:
        def translations():
            ok, stats = check_translations(6)
            detail = ", ".join(f"{k}={v}" for k, v in stats.items())
            return CheckResult("", PASS if ok else "FAIL", "", detail=detail)

        return [
            Check("groups.translate.len6", PASS, translations),
            Check("groups.faithful.O_q.len3", EVIDENCE, lambda: ons.faithfulness_check(self.onsager(), 3)),
        ]


# verify


def _convention(catalog: Catalog) -> dict:
    orders = {}
    display = {}
    for t in catalog.targets():
        if t in ("onsager", "groups"):
            orders["O_q"] = ons.ALPHABET.order_description()
        if t == "current":
            al = cur.current_alphabet(catalog.config.index_bound)
            orders["A_q"] = al.order_description()
            display = dict(cur.display_table(al))
    out = {"composition": COMPOSITION, "binding": BINDING, "monomial_order": orders}
    if display:
        out["display"] = display
    return out


def _run_chunk(config: RunConfig, ids: Sequence[str]) -> List[dict]:
    catalog = Catalog(config)
    wanted = set(ids)
    return [c.run().to_dict() for c in catalog.checks() if c.id in wanted]


def run_verify(config: RunConfig) -> dict:
    """Run the selected checks and assemble the report dictionary."""
    config.validate()
    catalog = Catalog(config)
    checks = select(catalog.checks(), config.check)
    if not checks:
        raise ConfigError(f"no check matches {config.check!r}")
    if config.jobs == 1 or len(checks) == 1:
        rows = [c.run().to_dict() for c in checks]
    else:
        # contiguous chunks keep each worker's context builds to a minimum
        ids = [c.id for c in checks]
        n = min(config.jobs, len(ids))
        size = -(-len(ids) // n)
        chunks = [ids[i:i + size] for i in range(0, len(ids), size)]
        with ProcessPoolExecutor(max_workers=n) as pool:
            parts = list(pool.map(_run_chunk, [config] * len(chunks), chunks))
        by_id = {row["id"]: row for part in parts for row in part}
        rows = [by_id[i] for i in ids]
    unexpected = [r["id"] for r in rows if r["status"] != r["expected"]]
    return {
        "config": config.to_dict(),
        "convention": _convention(catalog),
        "checks": rows,
        "summary": {"total": len(rows), "unexpected": len(unexpected), "unexpected_ids": unexpected},
    }


def _display_status(row: dict) -> str:
    if row["status"] == row["expected"] and row["status"] == "INCONCLUSIVE":
        return "INCONCLUSIVE-EXPECTED"
    return row["status"]


def render_text(report: dict) -> str:
    cfg = report["config"]
    lines = [f"# qonsager verify target={cfg['target']} engine={cfg['engine']} seed={cfg['seed']}"]
    for key in ("onsager", "current"):
        if key in cfg:
            lines.append(f"# {key}: " + " ".join(f"{k}={v}" for k, v in cfg[key].items()))
    conv = report["convention"]
    lines.append(f"# composition: {conv['composition']}; {conv['binding']}")
    for name, order in conv["monomial_order"].items():
        lines.append(f"# order {name}: {order}")
    if "display" in conv:
        lines.append("# display: " + ", ".join(f"{k} = {v}" for k, v in conv["display"].items()))
    width = max(len(r["id"]) for r in report["checks"])
    for r in report["checks"]:
        mark = " " if r["status"] == r["expected"] else "!"
        witness = f"{r['witness_kind']}:{r['witness_bytes']}B"
        extra = f"  degree={r['degree']}" if "degree" in r else ""
        tail = f"  {r['detail']}" if r.get("detail") else ""
        lines.append(f"{mark} {_display_status(r):<22} {r['id']:<{width}}  {witness:<20} {r['millis']:>10.1f} ms"
                     f"{extra}{tail}")
    s = report["summary"]
    lines.append(f"# {s['total']} checks, {s['unexpected']} with an unexpected status")
    return "\n".join(lines)


def cmd_verify(config: RunConfig, out: TextIO = sys.stdout) -> int:
    report = run_verify(config)
    if config.output == "json":
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        out.write(render_text(report) + "\n")
    return EXIT_OK if report["summary"]["unexpected"] == 0 else EXIT_UNEXPECTED


# expression utilities


def _algebra(config: RunConfig) -> str:
    return "current" if config.target == "current" else "onsager"


def _context(config: RunConfig):
    catalog = Catalog(config)
    return catalog.current() if _algebra(config) == "current" else catalog.onsager()


def cmd_reduce(config: RunConfig, expr: str, out: TextIO = sys.stdout) -> int:
    config.validate()
    ctx = _context(config)
    x = parse_expr(expr, ctx.alphabet)
    out.write(ctx.rewrite_system.reduce(x).render() + "\n")
    return EXIT_OK


def cmd_apply(config: RunConfig, expr: str, word: Optional[str] = None, morphism: Optional[str] = None,
              reduce: bool = False, out: TextIO = sys.stdout) -> int:
    config.validate()
    if (word is None) == (morphism is None):
        raise ConfigError("give exactly one of --word and --morphism")
    ctx = _context(config)
    x = parse_expr(expr, ctx.alphabet)
    if word is not None:
        m = ctx.realize(FreeProductWord.parse(word).letters)
    else:
        if morphism not in ctx.morphisms:
            raise ConfigError(f"unknown morphism {morphism!r}; known: {', '.join(ctx.morphisms)}")
        m = ctx.morphisms[morphism]
    y = m.apply(x)
    if reduce:
        y = ctx.rewrite_system.reduce(y)
    out.write(y.render() + "\n")
    return EXIT_OK


def cmd_eliminate(config: RunConfig, which: str, k: int, expand: bool = False, out: TextIO = sys.stdout) -> int:
    config.validate()
    if which not in cur.FAMILIES:
        raise ConfigError(f"unknown family {which!r}; expected one of {', '.join(cur.FAMILIES)}")
    if not 0 <= k <= config.index_bound:
        raise ConfigError(f"index {k} is out of range at K={config.index_bound}")
    al = cur.current_alphabet(config.index_bound)
    text = cur.closed_form_text(k, which)
    poly = cur.eliminate_closed_form(al, k, which)
    if parse_expr(text, al) != poly:
        raise AssertionError("closed form text does not round-trip")
    out.write((poly.render() if expand else text) + "\n")
    return EXIT_OK


def cmd_basis(config: RunConfig, degree: int, out: TextIO = sys.stdout) -> int:
    config.validate()
    ctx = _context(config)
    rs = ctx.rewrite_system
    if hasattr(rs, "_completion"):
        rs._completion()
    try:
        words = normal_form_basis(rs, degree)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    al: Alphabet = ctx.alphabet
    out.write(f"# {len(words)} irreducible words of degree {degree} (evidence only)\n")
    for w in words:
        out.write(al.render_word(w) + "\n")
    return EXIT_OK


# argument parsing


def _add_common(p: argparse.ArgumentParser, target_default: str):
    p.add_argument("--target", choices=TARGETS, default=target_default)
    p.add_argument("--degree-bound", type=int, default=None, help="completion degree D")
    p.add_argument("--cert-degree", type=int, default=None, help="certificate degree bound")
    p.add_argument("--index-bound", type=int, default=cur.DEFAULT_INDEX_BOUND, help="A_q index bound K")
    p.add_argument("--engine", choices=ENGINES, default="both")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qonsager", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the identity catalog")
    _add_common(p, "all")
    p.add_argument("--check", default=None, help="comma-separated id globs, e.g. 'O_q.note.*'")
    p.add_argument("--output", choices=("text", "json"), default="text")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--all-morphisms", action="store_true",
                   help="also check T1, T1inv well-definedness on A_q directly (slow)")

    p = sub.add_parser("reduce", help="print the normal form of an expression")
    _add_common(p, "onsager")
    p.add_argument("expr")

    p = sub.add_parser("apply", help="apply a group word or named morphism to an expression")
    _add_common(p, "onsager")
    p.add_argument("--to", required=True, dest="expr")
    p.add_argument("--word")
    p.add_argument("--morphism")
    p.add_argument("--reduce", action="store_true", help="print the normal form of the image")

    p = sub.add_parser("eliminate", help="closed form of W_{-k}, W_{k+1} or G_{k+1}")
    _add_common(p, "current")
    p.add_argument("--which", required=True, choices=cur.FAMILIES)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--expand", action="store_true")

    p = sub.add_parser("basis", help="irreducible words of one degree")
    _add_common(p, "onsager")
    p.add_argument("--degree", type=int, required=True)
    return parser


def main(argv: Optional[Sequence[str]] = None, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=err,
                        format="%(levelname)s %(name)s: %(message)s")
    config = RunConfig(
        target=args.target,
        degree_bound=args.degree_bound,
        certificate_degree=args.cert_degree,
        index_bound=args.index_bound,
        engine=args.engine,
        seed=args.seed,
    )
    try:
        if args.command == "verify":
            config = replace(config, check=args.check, output=args.output, jobs=args.jobs,
                             all_morphisms=args.all_morphisms)
            return cmd_verify(config, out)
        if args.command == "reduce":
            return cmd_reduce(config, args.expr, out)
        if args.command == "apply":
            return cmd_apply(config, args.expr, args.word, args.morphism, args.reduce, out)
        if args.command == "eliminate":
            return cmd_eliminate(config, args.which, args.k, args.expand, out)
        return cmd_basis(config, args.degree, out)
    except (ConfigError, ExprError, GroupError, ValueError) as exc:
        err.write(f"qonsager: error: {exc}\n")
        return EXIT_CONFIG
    except ons.OnsagerBuildError as exc:
        err.write(f"qonsager: {exc}\n")
        return EXIT_UNEXPECTED
