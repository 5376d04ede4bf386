"""Sidecar CLI: serve the protocol or run the conformance battery."""

from __future__ import annotations

import argparse
import sys

from fgtyper_sidecar.config import DEFAULT_MLM_MODEL, DEFAULT_NLI_MODEL, SidecarConfig
from fgtyper_sidecar.conformance import conformance_check


def cmd_serve(args) -> int:
    import uvicorn

    from fgtyper_sidecar.app import create_app

    config = SidecarConfig(
        mlm_model=args.mlm_model,
        nli_model=args.nli_model,
        embeddings_path=args.embeddings,
        host=args.host,
        port=args.port,
    )
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


def cmd_conformance(args) -> int:
    results = conformance_check(args.url)
    for result in results:
        print(str(result))
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} rules passed")
    return 0 if not failed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fgtyper-sidecar", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="start the inference endpoint")
    p_serve.add_argument("--mlm-model", default=DEFAULT_MLM_MODEL)
    p_serve.add_argument("--nli-model", default=DEFAULT_NLI_MODEL)
    p_serve.add_argument("--embeddings", required=True,
                         help="word-embedding table (text format)")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8800)
    p_serve.set_defaults(func=cmd_serve)

    p_conf = sub.add_parser("conformance", help="check a running endpoint")
    p_conf.add_argument("--url", required=True)
    p_conf.set_defaults(func=cmd_conformance)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
