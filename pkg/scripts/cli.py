"""Command-line front end: python -m scripts.cli <command> ...

Reports go to stdout (text or JSON with "schema": 1), logs to stderr.
Exit codes: 0 ok, 1 other domain error, 2 bad input, 3 not Lie nilpotent,
4 Table 1 mismatch or missing catalog entries, 5 group order above --cap
or the algebra cap.
"""

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Callable

import numpy as np

_REPO_ROOT = Path(__file__).resolve().parents[1]
if str(_REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(_REPO_ROOT))

from scripts.algebra_oracle import oracle_report
from scripts.catalog import AmbiguitySet, Catalog, identify, load_group_file
from scripts.classifier import load_case_tables, verify_biconditional
from scripts.dseq_solver import DSeq, DSeqProblem, feasible_set, prune, scan_report
from scripts.errors import (
    CapExceeded,
    ClosureExceedsCap,
    DegreeMismatch,
    GroupAlgebraError,
    MissingEntries,
    NotABijection,
    NotLieNilpotent,
    OrderMismatch,
    ParseError,
    TargetNotRepresentable,
)
from scripts.fpgroup import derived_subgroup, exponent
from scripts.lie_dimension import jennings_data, require_prime
from scripts.table1 import compare_table1, read_golden, table1_report
from scripts.utils_config import Settings, load_settings
from scripts.validate_report import validate_report


SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_NOT_LIE_NILPOTENT = 3
EXIT_TABLE1 = 4
EXIT_CAP = 5

_USAGE_ERRORS = (ParseError, OrderMismatch, DegreeMismatch, NotABijection, ClosureExceedsCap, TargetNotRepresentable)


class CommandFailed(Exception):
    """A finished run whose verdict is negative; the report is still printed."""

    def __init__(self, code: int, payload: dict[str, Any]) -> None:
        super().__init__(f"exit {code}")
        self.code = code
        self.payload = payload


# ── Argument helpers ──────────────────────────────────────────────────────────

def int_list(text: str) -> list[int]:
    """'2,3,5' or '6-10' or a mix of both."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        lo, sep, hi = part.partition("-")
        try:
            if sep:
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer list: {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError(f"empty integer list: {text!r}")
    return out


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _single(values: list[int], flag: str) -> int:
    if len(values) != 1:
        raise ValueError(f"{flag} takes a single value without --scan, got {values}")
    return values[0]


def _json_default(o: Any) -> Any:
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


# ── Rendering ─────────────────────────────────────────────────────────────────

def _fmt(value: Any) -> str:
    if isinstance(value, dict) and all(str(k).isdigit() for k in value):
        return "{" + ", ".join(f"{k}:{v}" for k, v in value.items()) + "}"
    if isinstance(value, (dict, list)):
        return json.dumps(value, ensure_ascii=False, default=_json_default)
    return str(value)


def render_text(payload: dict[str, Any]) -> str:
    lines = []
    headline = payload.get("headline")
    if headline:
        lines.append(headline)
    for key, value in payload.items():
        if key in ("schema", "headline", "table"):
            continue
        lines.append(f"{key}: {_fmt(value)}")
    if payload.get("table"):
        lines.append(payload["table"])
    return "\n".join(lines) + "\n"


def emit(payload: dict[str, Any], fmt: str) -> None:
    if fmt == "json":
        body = {k: v for k, v in payload.items() if k not in ("headline", "table")}
        body = json.loads(json.dumps(body, default=_json_default))
        validate_report(body, name=body.get("command", "report"))
        sys.stdout.write(json.dumps(body, ensure_ascii=False, indent=2) + "\n")
    else:
        sys.stdout.write(render_text(payload))


def _report(command: str, **fields: Any) -> dict[str, Any]:
    return {"schema": SCHEMA_VERSION, "command": command, **fields}


# ── Commands ──────────────────────────────────────────────────────────────────

def _load_group(args: argparse.Namespace, settings: Settings):
    """Group from the file argument; --cap bounds its order for every command."""
    entry = load_group_file(Path(args.group_file), cap=settings.group_cap)
    if args.cap is not None and entry.group.order > args.cap:
        raise CapExceeded(entry.group.order, args.cap)
    return entry.group


def cmd_jennings(args: argparse.Namespace, settings: Settings) -> dict[str, Any]:
    G = _load_group(args, settings)
    data = jennings_data(G, require_prime(args.p))
    d = data.d_seq()
    headline = f"t^L = {data.t_upper}, d = {_fmt(d)}"
    if data.commutative:
        headline += " (KG commutative)"
    D = derived_subgroup(G)
    if not data.commutative and exponent(D) == D.order:
        headline += f" (G' cyclic: t^L = |G'| + 1 = {D.order + 1})"
    return _report("jennings", headline=headline, group=G.label, order=G.order, **data.to_dict())


def cmd_dseq(args: argparse.Namespace, settings: Settings) -> dict[str, Any]:
    if args.scan:
        threads = args.threads or settings.threads
        df = scan_report(args.p, args.n, args.k, threads=threads)
        rows = df.to_dict(orient="records")
        return _report("dseq-scan", headline=f"{len(rows)} (p, n, k) triples", rows=rows, table=df.to_string(index=False))

    p, n, k = _single(args.p, "-p"), _single(args.n, "-n"), _single(args.k, "-k")
    assume = None if args.assume_noncyclic is None else args.assume_noncyclic == "yes"
    prob = DSeqProblem(p, n, k, assume_noncyclic=assume)
    seqs = feasible_set(prob)
    fields: dict[str, Any] = {
        "p": p,
        "n": n,
        "k": k,
        "target": prob.target,
        "count": len(seqs),
        "sequences": [
            {"d_seq": {str(m): v for m, v in s.items}, "e": s.e, "t_upper": s.t_upper(p)} for s in seqs
        ],
    }
    if args.check:
        seq = DSeq.parse(args.check)
        verdict = prune(seq, prob)
        fields["check"] = {
            "d_seq": {str(m): v for m, v in seq.items},
            "feasible": verdict.feasible,
            "witnesses": list(verdict.witnesses),
            "violations": [{"rule": v.rule, "m": v.m, "s": v.s, "e": v.e} for v in verdict.violations],
        }
    headline = f"{len(seqs)} feasible: " + ", ".join(s.render() for s in seqs) if seqs else "0 feasible"
    return _report("dseq", headline=headline, **fields)


def cmd_table1(args: argparse.Namespace, settings: Settings) -> dict[str, Any]:
    catalog = Catalog.load(Path(args.catalog or settings.path("catalog_order32")), cap=settings.group_cap)
    golden = read_golden(Path(args.golden or settings.path("golden_table1")))
    report = table1_report(catalog)
    diff = compare_table1(report, golden, settings.known_discrepancies)
    payload = _report(
        "table1",
        headline=f"{len(report)} rows, {len(diff.diffs)} differing cells, {len(diff.unflagged)} unflagged",
        **diff.to_dict(),
        table=report.to_string(index=False),
    )
    if not diff.clean:
        raise CommandFailed(EXIT_TABLE1, payload)
    return payload


def cmd_oracle(args: argparse.Namespace, settings: Settings) -> dict[str, Any]:
    G = _load_group(args, settings)
    rep = oracle_report(G, require_prime(args.p), args.m_max, cap=settings.algebra_cap, max_rounds=settings.max_rounds)
    headline = f"t_L = {rep.t_lower}, t^L(direct) = {rep.t_upper_direct}, t^L(Jennings) = {rep.t_upper_jennings}"
    D = derived_subgroup(G)
    if not rep.commutative and exponent(D) == D.order:
        headline += f" (G' cyclic: |G'| + 1 = {D.order + 1})"
    payload = _report("oracle", headline=headline, **rep.to_dict())
    if not rep.agrees:
        logging.error("%s: oracle and Jennings values disagree", G.label)
        raise CommandFailed(EXIT_ERROR, payload)
    return payload


def cmd_classify(args: argparse.Namespace, settings: Settings) -> dict[str, Any]:
    G = _load_group(args, settings)
    p = require_prime(args.p)
    catalog = Catalog.load(Path(args.catalog or settings.path("catalog_order32")), cap=settings.group_cap)
    tables = load_case_tables(settings.path("cases_k14"), settings.path("cases_k15"))
    rep = verify_biconditional(G, p, args.k, catalog, tables=tables, augmented=args.augmented)
    case = rep.matched_case.case if rep.matched_case else "none"
    headline = f"t^L = {rep.t_upper}, target = {rep.target}, case = {case}, consistent = {rep.consistent}"
    payload = _report("classify", headline=headline, **rep.to_dict())
    if not rep.consistent or rep.dseq_consistent is False:
        raise CommandFailed(EXIT_ERROR, payload)
    return payload


def cmd_identify(args: argparse.Namespace, settings: Settings) -> dict[str, Any]:
    G = _load_group(args, settings)
    paths = [Path(c) for c in args.catalog] if args.catalog else [
        settings.path("catalog_small"),
        settings.path("catalog_order32"),
    ]
    catalog = Catalog.load(*paths, cap=settings.group_cap)
    found = identify(G, catalog)
    matches = list(found.ids) if isinstance(found, AmbiguitySet) else [found]
    return _report("identify", headline=" | ".join(matches), group=G.label, order=G.order, matches=matches)


# ── Parser ────────────────────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--settings", default=None, help="settings YAML (default config/settings.yml)")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    group_opts = argparse.ArgumentParser(add_help=False)
    group_opts.add_argument(
        "--cap",
        type=positive_int,
        default=None,
        help="largest |G| accepted from the group file; for oracle also the algebra cap",
    )

    parser = argparse.ArgumentParser(prog="liedim", description="Lie nilpotency indices of modular group algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jennings", parents=[common, group_opts], help="dimension subgroups, d-sequence, t^L")
    p.add_argument("group_file")
    p.add_argument("-p", type=int, required=True)
    p.set_defaults(func=cmd_jennings)

    p = sub.add_parser("dseq", parents=[common], help="feasible d-sequences for t^L = p^n - k(p-1) + 1")
    p.add_argument("-p", type=int_list, required=True)
    p.add_argument("-n", type=int_list, required=True)
    p.add_argument("-k", type=int_list, required=True)
    p.add_argument("--scan", action="store_true", help="treat -p/-n/-k as ranges and count survivors")
    p.add_argument("--check", default=None, help='run the pruning rules on one sequence, e.g. "{2:1, 3:1}"')
    p.add_argument("--assume-noncyclic", choices=["yes", "no"], default=None)
    p.set_defaults(func=cmd_dseq)

    p = sub.add_parser("table1", parents=[common], help="regenerate Table 1 and diff it against the golden file")
    p.add_argument("--catalog", default=None)
    p.add_argument("--golden", default=None)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("oracle", parents=[common, group_opts], help="brute-force Lie powers of F_pG")
    p.add_argument("group_file")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--m-max", type=int, default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("classify", parents=[common, group_opts], help="match the k = 14 / 15 case tables")
    p.add_argument("group_file")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-k", type=int, choices=[14, 15], required=True)
    p.add_argument("--catalog", default=None, help="order-32 catalog used to name nonabelian G'")
    p.add_argument("--augmented", action="store_true", help="add the gamma_4 clause to case v of the k = 15 list")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("identify", parents=[common, group_opts], help="find a group file in the catalogs")
    p.add_argument("group_file")
    p.add_argument("--catalog", action="append", default=None)
    p.set_defaults(func=cmd_identify)
    return parser


def _exit_code(err: Exception) -> int:
    if isinstance(err, NotLieNilpotent):
        return EXIT_NOT_LIE_NILPOTENT
    if isinstance(err, MissingEntries):
        return EXIT_TABLE1
    if isinstance(err, CapExceeded):
        return EXIT_CAP
    if isinstance(err, _USAGE_ERRORS):
        return EXIT_USAGE
    if isinstance(err, GroupAlgebraError):
        return EXIT_ERROR
    return EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    func: Callable[[argparse.Namespace, Settings], dict[str, Any]] = args.func
    try:
        settings = load_settings(Path(args.settings)) if args.settings else load_settings()
        if getattr(args, "cap", None) is not None:
            settings = replace(settings, algebra_cap=args.cap)
        emit(func(args, settings), args.format)
    except CommandFailed as failed:
        emit(failed.payload, args.format)
        return failed.code
    except (ValueError, OSError) as err:
        logging.error("%s", err)
        return _exit_code(err)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
