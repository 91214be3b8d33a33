"""Deterministic file emission: CSV/JSON formatting, atomic writes, manifests.

CSV bodies never contain timestamps or machine-dependent content, so a rerun
with identical inputs is byte-identical; the wall clock lives only in the
manifest JSON written next to each data file.
"""

from __future__ import annotations

import datetime
import hashlib
import json
import os
import tempfile

DEFAULT_PRECISION = 12


def format_number(value: float, precision: int = DEFAULT_PRECISION) -> str:
    text = f"{value:.{precision}g}"
    # normalize the negative-zero artifact so output is platform stable
    return "0" if text in ("-0", "-0.0") else text


def format_csv(header, rows, precision: int = DEFAULT_PRECISION) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            cell if isinstance(cell, str) else format_number(cell, precision)
            for cell in row
        ))
    return "\n".join(lines) + "\n"


def format_json_table(header, rows, precision: int = DEFAULT_PRECISION) -> str:
    records = [
        {key: (cell if isinstance(cell, str)
               else float(format_number(cell, precision)))
         for key, cell in zip(header, row)}
        for row in rows
    ]
    return json.dumps(records, indent=2, sort_keys=False) + "\n"


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def content_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def write_manifest(path: str, subcommand: str, parameters: dict,
                   outputs: dict, version: str) -> None:
    """Manifest JSON: resolved inputs, output hashes, version, and the clock."""
    manifest = {
        "subcommand": subcommand,
        "parameters": parameters,
        "outputs": outputs,
        "library_version": version,
        "written_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    atomic_write_text(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
