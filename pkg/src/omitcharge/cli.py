"""Thin command-line client for the command layer.

Runs in-process by default; with --server it posts the same config document
to a running omitcharge service and formats the returned table locally, so
files are byte-identical either way.

Exit codes: 0 success, 2 config error, 3 domain/physics error,
4 numerical-convergence error.
"""

from __future__ import annotations

import argparse
import json
import sys
import urllib.error
import urllib.request
from pathlib import Path

from . import __version__
from .commands import COMMANDS, run_command
from .config import apply_overrides, load_preset, parse_config
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    OmitChargeError,
)
from .tables import ResultTable, render, write_atomic

EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_CONVERGENCE = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omitcharge",
        description="Charge detection via optomechanically induced transparency.",
    )
    parser.add_argument("--version", action="version", version=f"omitcharge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in sorted(COMMANDS):
        cmd = sub.add_parser(name, help=f"run the {name} command")
        cmd.add_argument(
            "--config",
            required=True,
            help="path to a JSON config document, or a shipped preset name "
            "(e.g. fig2.config)",
        )
        cmd.add_argument("--out", help="output file (defaults to config output.path or stdout)")
        cmd.add_argument("--format", choices=("csv", "json"), help="output format")
        cmd.add_argument(
            "--override",
            action="append",
            metavar="KEY.PATH=VALUE",
            help="override a config entry, e.g. params.bias_voltage_v=0.1",
        )
        cmd.add_argument("--server", help="base URL of a running omitcharge service")

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _load_document(source: str) -> dict:
    path = Path(source)
    if path.is_file():
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {source!r} is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError(f"config {source!r} must hold a JSON object")
        return doc
    if "/" not in source and "\\" not in source:
        return load_preset(source)
    raise ConfigError(f"config file not found: {source!r}")


def _run_remote(server: str, command: str, document: dict) -> ResultTable:
    url = f"{server.rstrip('/')}/v1/run/{command}"
    request = urllib.request.Request(
        url,
        data=json.dumps(document).encode("utf-8"),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(request) as reply:
            payload = json.loads(reply.read().decode("utf-8"))
    except urllib.error.HTTPError as exc:
        body = exc.read().decode("utf-8", errors="replace")
        try:
            detail = json.loads(body)
        except json.JSONDecodeError:
            detail = {"message": body}
        error_type = detail.get("error_type")
        message = detail.get("message") or json.dumps(detail.get("detail", detail))
        if error_type == "domain":
            raise DomainError(message) from None
        if error_type == "convergence":
            raise ConvergenceError(message) from None
        raise ConfigError(message) from None
    except urllib.error.URLError as exc:
        raise ConfigError(f"cannot reach server {server!r}: {exc.reason}") from exc
    return ResultTable(
        columns=tuple(payload["columns"]),
        rows=tuple(tuple(r) for r in payload["rows"]),
        provenance=payload["provenance"],
    )


def _run(args) -> int:
    document = apply_overrides(_load_document(args.config), args.override)
    if args.server:
        table = _run_remote(args.server, args.command, document)
    else:
        table = run_command(args.command, parse_config(document))

    output = document.get("output") or {}
    fmt = args.format or output.get("format") or "csv"
    if fmt not in ("csv", "json"):
        raise ConfigError(f"unknown output format {fmt!r}")
    text = render(table, fmt)
    out_path = args.out or output.get("path")
    if out_path:
        write_atomic(out_path, text)
    else:
        sys.stdout.write(text)
    return 0


def _fail(code: int, error_type: str, exc: Exception) -> int:
    record = {"error_type": error_type, "message": str(exc)}
    print(json.dumps(record, ensure_ascii=False), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        uvicorn.run("omitcharge.service:app", host=args.host, port=args.port)
        return 0
    try:
        return _run(args)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, "config", exc)
    except ConvergenceError as exc:
        return _fail(EXIT_CONVERGENCE, "convergence", exc)
    except DomainError as exc:
        return _fail(EXIT_DOMAIN, "domain", exc)
    except OmitChargeError as exc:
        return _fail(EXIT_DOMAIN, "domain", exc)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
