"""Plain-text system file: "MQS 1", "field q", "vars n", "polys m", then one
polynomial per line.  "# key: value" comment lines carry metadata."""

from __future__ import annotations

from pathlib import Path

from .field import field_of_size
from .polyring import PolyError, PolySystem, parse_polynomial, to_text

MAGIC = "MQS 1"


class SysFileError(ValueError):
    pass


def dumps(F: PolySystem) -> str:
    lines = [MAGIC]
    for key in sorted(F.metadata):
        value = str(F.metadata[key])
        if "\n" in value:
            raise SysFileError(f"metadata value for {key!r} spans lines")
        lines.append(f"# {key}: {value}")
    lines += [f"field {F.q}", f"vars {F.nvars}", f"polys {len(F)}"]
    lines += [to_text(f) for f in F]
    return "\n".join(lines) + "\n"


def _header(line: str, word: str, lineno: int) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != word:
        raise SysFileError(f"line {lineno}: expected '{word} <int>', got {line!r}")
    try:
        return int(parts[1])
    except ValueError:
        raise SysFileError(f"line {lineno}: {parts[1]!r} is not an integer") from None


def loads(text: str) -> PolySystem:
    raw = text.splitlines()
    if not raw or raw[0].strip() != MAGIC:
        raise SysFileError(f"first line must be {MAGIC!r}")
    meta: dict[str, str] = {}
    body: list[tuple[int, str]] = []
    for lineno, line in enumerate(raw[1:], start=2):
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            key, sep, value = s[1:].partition(":")
            if sep:
                meta[key.strip()] = value.strip()
            continue
        body.append((lineno, s))
    if len(body) < 3:
        raise SysFileError("missing field/vars/polys header")
    q = _header(body[0][1], "field", body[0][0])
    n = _header(body[1][1], "vars", body[1][0])
    m = _header(body[2][1], "polys", body[2][0])
    try:
        field = field_of_size(q)
    except Exception as exc:
        raise SysFileError(f"unsupported field size {q}: {exc}") from None
    if n < 1 or m < 1:
        raise SysFileError("need vars >= 1 and polys >= 1")
    rows = body[3:]
    if len(rows) != m:
        raise SysFileError(f"header declares {m} polynomials, found {len(rows)}")
    polys = []
    for lineno, s in rows:
        try:
            polys.append(parse_polynomial(s, field, n))
        except PolyError as exc:
            raise SysFileError(f"line {lineno}: {exc}") from None
    return PolySystem(polys, meta)


def read(path: str | Path) -> PolySystem:
    return loads(Path(path).read_text())


def write(F: PolySystem, path: str | Path) -> None:
    Path(path).write_text(dumps(F))
