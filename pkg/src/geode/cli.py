"""Command line entry points: ask, record, serve, experts.

Exit codes: 0 success, 1 plan failure, 2 upstream failure, 64 usage error.
"""

import argparse
import json
import sys
from pathlib import Path

from .config import BACKENDS, EngineConfig
from .errors import BackendUnavailableError

EXIT_OK = 0
EXIT_PLAN = 1
EXIT_UPSTREAM = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; the CLI contract wants 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_common(sub):
    sub.add_argument("--offline", action="store_true",
                     help="replay recorded fixtures, never touch the network")
    sub.add_argument("--fixtures", type=Path, metavar="PATH",
                     help="fixture directory (defaults to the packaged set)")
    sub.add_argument("--backend", choices=BACKENDS, help="planner backend")
    sub.add_argument("--seed", type=int, metavar="N", help="sampling seed")


def _build_config(args, parser, net_mode=None) -> EngineConfig:
    overrides = {}
    if net_mode:
        overrides["net_mode"] = net_mode
    if args.offline:
        overrides["net_mode"] = "offline"
    if args.fixtures:
        overrides["fixtures_dir"] = args.fixtures
    if args.backend:
        overrides["backend"] = args.backend
    if args.seed is not None:
        overrides["seed"] = args.seed
    try:
        return EngineConfig.from_env(**overrides)
    except ValueError as exc:
        parser.error(str(exc))


def _run_query(config: EngineConfig, query: str, out: Path | None) -> int:
    from .engine import Engine

    try:
        engine = Engine(config)
    except BackendUnavailableError as exc:
        print(exc.one_line(), file=sys.stderr)
        return EXIT_UPSTREAM
    status, body = engine.handle_query(query)
    if status == 200:
        print(body["answer"])
        print()
        print(body["plan"])
        if out:
            out.write_text(json.dumps(body["map"]))
        return EXIT_OK
    error = body.get("error", {})
    print(f"{error.get('code', 'E_GEODE')}: {error.get('message', '')}",
          file=sys.stderr)
    for diag in body.get("diagnostics", []):
        print(f"  {diag}", file=sys.stderr)
    return EXIT_PLAN if status == 422 else EXIT_UPSTREAM


def main(argv=None) -> int:
    parser = _Parser(prog="geode",
                     description="Geospatial question answering engine.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    ask = sub.add_parser("ask", help="answer one query and print the plan")
    ask.add_argument("query")
    _add_common(ask)
    ask.add_argument("--out", type=Path, metavar="PATH",
                     help="write the map artifact JSON here")

    record = sub.add_parser(
        "record", help="answer one query live and persist upstream fixtures")
    record.add_argument("query")
    _add_common(record)
    record.add_argument("--out", type=Path, metavar="PATH",
                        help="write the map artifact JSON here")

    serve = sub.add_parser("serve", help="run the HTTP service")
    _add_common(serve)
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")

    sub.add_parser("experts", help="list the expert registry")

    args = parser.parse_args(argv)

    if args.command == "ask":
        if not args.query.strip():
            parser.error("query must not be empty")
        config = _build_config(args, parser)
        return _run_query(config, args.query, args.out)

    if args.command == "record":
        if not args.query.strip():
            parser.error("query must not be empty")
        if args.offline:
            parser.error("record mode contradicts --offline")
        if not args.fixtures:
            parser.error("record mode needs --fixtures to persist into")
        config = _build_config(args, parser, net_mode="record")
        return _run_query(config, args.query, args.out)

    if args.command == "serve":
        import uvicorn

        from .service import create_app

        config = _build_config(args, parser)
        app = create_app(config=config)
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
        return EXIT_OK

    if args.command == "experts":
        from .experts import signatures

        for sig in signatures():
            print(sig.render())
            print(f"    {sig.doc}")
        return EXIT_OK

    parser.error(f"unknown command {args.command!r}")


if __name__ == "__main__":
    raise SystemExit(main())
