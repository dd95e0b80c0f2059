"""Shared file helpers: atomic writes, versioned headers, number formatting."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

from .errors import FormatError

FORMAT_VERSION = "v1"


def atomic_write_text(path: str | Path, text: str) -> Path:
    """Write text via a temp file in the same directory plus rename.

    Readers never observe a partially written file, and a crash leaves the
    previous version intact.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
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
    return path


def parse_header(line: str, magic: str, path: str | Path) -> dict[str, str]:
    """Validate a `<MAGIC> v1 k=v ...` header line and return its fields."""
    parts = line.strip().split()
    if not parts or parts[0] != magic:
        raise FormatError(f"{path}: expected a {magic} header, got {line.strip()!r}")
    if len(parts) < 2 or parts[1] != FORMAT_VERSION:
        found = parts[1] if len(parts) > 1 else "<missing>"
        raise FormatError(f"{path}: unsupported {magic} version {found!r} (expected {FORMAT_VERSION})")
    fields: dict[str, str] = {}
    for token in parts[2:]:
        if "=" not in token:
            raise FormatError(f"{path}: malformed header field {token!r}")
        key, value = token.split("=", 1)
        fields[key] = value
    return fields


def header_int(fields: dict[str, str], key: str, path: str | Path) -> int:
    try:
        return int(fields[key])
    except KeyError:
        raise FormatError(f"{path}: header is missing {key}=") from None
    except ValueError:
        raise FormatError(f"{path}: header field {key}={fields[key]!r} is not an integer") from None


def header_float(fields: dict[str, str], key: str, path: str | Path) -> float:
    try:
        return float(fields[key])
    except KeyError:
        raise FormatError(f"{path}: header is missing {key}=") from None
    except ValueError:
        raise FormatError(f"{path}: header field {key}={fields[key]!r} is not a number") from None


def read_text_lines(path: str | Path) -> list[str]:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def fmt_num(value: float | int) -> str:
    """Render a number compactly: integral floats drop the trailing .0."""
    f = float(value)
    if f.is_integer():
        return str(int(f))
    return repr(f)
