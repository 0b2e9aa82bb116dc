"""Result tables with embedded provenance, CSV/JSON rendering, atomic writes.

Every emitted file carries the full resolved configuration and the physical
constants, so re-parsing the provenance block and re-running the command
reproduces the file byte for byte. Floats are rendered with Python's
shortest round-trip repr; nothing time- or path-dependent is embedded.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import asdict, dataclass
from typing import Any, Mapping

from . import __version__
from .constants import CODATA, PhysicalConstants

TOOL_NAME = "omitcharge"

_PROVENANCE_KEYS = ("tool", "version", "command", "constants", "config")


@dataclass(frozen=True)
class ResultTable:
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    provenance: Mapping[str, Any]


def make_provenance(
    command: str, config_document: dict, consts: PhysicalConstants = CODATA
) -> dict:
    return {
        "tool": TOOL_NAME,
        "version": __version__,
        "command": command,
        "constants": asdict(consts),
        "config": config_document,
    }


def canonical_json(obj) -> str:
    return json.dumps(
        obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False
    )


def format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        if "," in value or "\n" in value or "#" in value:
            raise ValueError(f"cell value {value!r} would corrupt the CSV layout")
        return value
    raise TypeError(f"unsupported cell type {type(value).__name__}")


def render_csv(table: ResultTable) -> str:
    prov = table.provenance
    lines = [
        f"# tool: {prov['tool']}",
        f"# version: {prov['version']}",
        f"# command: {prov['command']}",
        f"# constants: {canonical_json(prov['constants'])}",
        f"# config: {canonical_json(prov['config'])}",
        ",".join(table.columns),
    ]
    for row in table.rows:
        lines.append(",".join(format_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def render_json(table: ResultTable) -> str:
    doc = {
        "provenance": dict(table.provenance),
        "columns": list(table.columns),
        "rows": [list(r) for r in table.rows],
    }
    return (
        json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)
        + "\n"
    )


def render(table: ResultTable, fmt: str) -> str:
    if fmt == "csv":
        return render_csv(table)
    if fmt == "json":
        return render_json(table)
    raise ValueError(f"unknown format {fmt!r}")


def parse_provenance_csv(text: str) -> dict:
    """Recover the provenance block from a rendered CSV document."""
    out: dict[str, Any] = {}
    for line in text.splitlines():
        if not line.startswith("# "):
            break
        key, _, value = line[2:].partition(": ")
        if key in ("constants", "config"):
            out[key] = json.loads(value)
        else:
            out[key] = value
    missing = [k for k in _PROVENANCE_KEYS if k not in out]
    if missing:
        raise ValueError(f"provenance block incomplete, missing {missing}")
    return out


def write_atomic(path: str, text: str) -> None:
    """Write via a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".omitcharge-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
