"""Command-line interface.

Subcommands: ``type`` (JSONL mentions in, decision JSONL out), ``eval``
(gold vs decisions), ``validate-ontology``, and ``record`` (run the
pipeline against a live backend while persisting every response as a
fixture).  Exit codes: 0 success, 1 usage or configuration, 2 data,
3 backend.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from fgtyper.config import (
    DEFAULT_THETA,
    DEFAULT_TOP_K,
    DEFAULT_W_CAND,
    DEFAULT_W_HEAD,
    RunConfig,
)
from fgtyper.engine import Engine, make_recording_backend
from fgtyper.errors import (
    BackendError,
    ConfigError,
    DataError,
    FgtyperError,
    UsageError,
)
from fgtyper.evaluation import evaluate, parse_dataset, parse_decisions
from fgtyper.ontology import ADVISORY, hard_violations, load_ontology, validate_ontology

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_BACKEND = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_text(path_or_dash: str) -> str:
    if path_or_dash == "-":
        return sys.stdin.read()
    path = Path(path_or_dash)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    return path.read_text(encoding="utf-8")


def _add_pipeline_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ontology", required=True, help="ontology text file")
    parser.add_argument("--verbalizer", required=True, help="verbalizer JSON file")
    parser.add_argument("--patterns", required=True, help="prompt pattern file")
    parser.add_argument("--theta", type=float, default=DEFAULT_THETA,
                        help="minimum rank gain to descend (default %(default)s)")
    parser.add_argument("--w-cand", type=float, default=DEFAULT_W_CAND)
    parser.add_argument("--w-head", type=float, default=DEFAULT_W_HEAD)
    parser.add_argument("--top-k", type=int, default=DEFAULT_TOP_K)
    parser.add_argument("--min-votes", type=int, default=None,
                        help="default: floor(n_patterns / 2) + 1")
    parser.add_argument("--parallelism", type=int, default=1)
    parser.add_argument("--no-nli", action="store_true",
                        help="ablation: rank by candidate credit only")
    parser.add_argument("--no-headword", action="store_true",
                        help="ablation: skip head-word extraction")
    parser.add_argument("--no-ensemble", action="store_true",
                        help="ablation: use only the first prompt pattern")


def _config_from_args(args, backend_kind: str) -> RunConfig:
    return RunConfig(
        ontology_path=args.ontology,
        verbalizer_path=args.verbalizer,
        patterns_path=args.patterns,
        backend_kind=backend_kind,
        backend_url=getattr(args, "backend_url", None),
        fixtures_dir=getattr(args, "fixtures_dir", None),
        theta=args.theta,
        w_cand=args.w_cand,
        w_head=args.w_head,
        top_k=args.top_k,
        min_votes=args.min_votes,
        parallelism=args.parallelism,
        use_nli=not args.no_nli,
        use_head_word=not args.no_headword,
        use_ensemble=not args.no_ensemble,
    )


def cmd_type(args) -> int:
    config = _config_from_args(args, args.backend)
    engine = Engine.build(config)
    mentions = parse_dataset(_read_text(args.input))
    for decision in engine.type_dataset(mentions):
        print(decision.to_json())
    return EXIT_OK


def cmd_record(args) -> int:
    config = _config_from_args(args, "remote")
    config.fixtures_dir = args.fixtures_dir
    backend = make_recording_backend(config)
    engine = Engine.build(config, backend=backend)
    mentions = parse_dataset(_read_text(args.input))
    for decision in engine.type_dataset(mentions):
        print(decision.to_json())
    return EXIT_OK


def cmd_eval(args) -> int:
    gold = parse_dataset(_read_text(args.gold))
    decisions = parse_decisions(_read_text(args.decisions))
    ontology = load_ontology(args.ontology) if args.ontology else None
    report = evaluate(gold, decisions, ontology)
    print(json.dumps(report.to_json_obj()))
    print(report.to_table())
    return EXIT_OK


def cmd_validate_ontology(args) -> int:
    ontology = load_ontology(args.ontology)
    violations = validate_ontology(ontology)
    shown = violations if args.advisory else hard_violations(violations)
    for v in shown:
        print(str(v))
    hard = hard_violations(violations)
    advisory_count = sum(1 for v in violations if v.severity == ADVISORY)
    print(
        f"{len(ontology)} types, {len(hard)} hard violation(s), "
        f"{advisory_count} advisory note(s)"
    )
    return EXIT_OK if not hard else EXIT_DATA


def build_parser() -> _Parser:
    parser = _Parser(prog="fgtyper", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_type = sub.add_parser("type", help="type every mention of a JSONL dataset")
    _add_pipeline_args(p_type)
    p_type.add_argument("--backend", choices=["fixture", "remote"], default="fixture")
    p_type.add_argument("--backend-url", default=None)
    p_type.add_argument("--fixtures-dir", default=None)
    p_type.add_argument("input", help="mentions JSONL file, or - for stdin")
    p_type.set_defaults(func=cmd_type)

    p_rec = sub.add_parser("record", help="type against a live backend, saving fixtures")
    _add_pipeline_args(p_rec)
    p_rec.add_argument("--backend-url", required=True)
    p_rec.add_argument("--fixtures-dir", required=True)
    p_rec.add_argument("input", help="mentions JSONL file, or - for stdin")
    p_rec.set_defaults(func=cmd_record)

    p_eval = sub.add_parser("eval", help="score decisions against gold labels")
    p_eval.add_argument("--ontology", default=None,
                        help="optional; verifies every path exists")
    p_eval.add_argument("gold", help="gold mentions JSONL")
    p_eval.add_argument("decisions", help="decision JSONL")
    p_eval.set_defaults(func=cmd_eval)

    p_val = sub.add_parser("validate-ontology", help="check ontology structure")
    p_val.add_argument("--advisory", action="store_true",
                       help="also print advisory notes")
    p_val.add_argument("ontology")
    p_val.set_defaults(func=cmd_validate_ontology)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except BackendError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except FgtyperError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
