"""Reading vector sets from CSV/JSON and writing full-precision reports."""
import json
import math
import re
from pathlib import Path

import numpy as np

from .errors import InputError

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\Z")
FORMATS = ("csv", "json")


class ParseError(InputError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


def _number(text, line=None, column=None):
    if not _NUMBER.match(text):
        raise ParseError(f"not a decimal number: {text!r}", line, column)
    value = float(text)
    if not math.isfinite(value):
        raise ParseError(f"number out of double range: {text!r}", line, column)
    return value


def parse_csv(text):
    """One vector per row, comma-separated decimals. Blank lines and lines
    starting with ``#`` are skipped."""
    rows = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        row = []
        col = 1
        for field in raw.split(","):
            stripped = field.strip()
            offset = col + (len(field) - len(field.lstrip()))
            row.append(_number(stripped, lineno, offset))
            col += len(field) + 1
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"expected {width} values, found {len(row)}", lineno, 1)
        rows.append(row)
    if not rows:
        raise ParseError("no vectors found")
    return rows


def _reject_constant(name):
    raise ValueError(f"non-finite constant {name} is not allowed")


_DECODER = json.JSONDecoder()
_WS = re.compile(r"[ \t\n\r]*")


def _locate(text, path):
    """Offset of the JSON value at ``path`` (keys and indices) in ``text``.

    Only called on text that already parsed successfully.
    """
    pos = _WS.match(text, 0).end()
    for step in path:
        opener = text[pos]
        pos = _WS.match(text, pos + 1).end()
        if opener == "{":
            while True:
                key, pos = json.decoder.scanstring(text, pos + 1)
                pos = _WS.match(text, text.index(":", pos) + 1).end()
                if key == step:
                    break
                pos = _DECODER.raw_decode(text, pos)[1]
                pos = _WS.match(text, text.index(",", pos) + 1).end()
        else:
            for _ in range(step):
                pos = _DECODER.raw_decode(text, pos)[1]
                pos = _WS.match(text, text.index(",", pos) + 1).end()
    return pos


def _json_error(text, message, path=()):
    pos = _locate(text, path)
    line = text.count("\n", 0, pos) + 1
    column = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return ParseError(message, line, column)


def parse_json(text):
    """A document whose top-level ``vectors`` field is a list of equal-length
    lists. Entries may be JSON numbers or decimal strings."""
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    except ValueError as exc:
        # parse_constant gives no position; find the token ourselves
        token = re.search(r"-?\b(?:NaN|Infinity)\b", text)
        pos = token.start() if token else 0
        raise ParseError(str(exc), text.count("\n", 0, pos) + 1,
                         pos - (text.rfind("\n", 0, pos) + 1) + 1) from None
    if not isinstance(doc, dict) or "vectors" not in doc:
        raise _json_error(text, "top-level object with a 'vectors' field expected")
    vectors = doc["vectors"]
    if not isinstance(vectors, list) or not vectors:
        raise _json_error(text, "'vectors' must be a non-empty list", ["vectors"])
    rows = []
    for i, vec in enumerate(vectors):
        if not isinstance(vec, list) or not vec:
            raise _json_error(text, f"vectors[{i}] must be a non-empty list of numbers", ["vectors", i])
        row = []
        for j, x in enumerate(vec):
            where = ["vectors", i, j]
            if isinstance(x, bool) or not isinstance(x, (int, float, str)):
                raise _json_error(text, f"vectors[{i}][{j}] is not a number", where)
            try:
                value = _number(x) if isinstance(x, str) else float(x)
            except ParseError as exc:
                raise _json_error(text, f"vectors[{i}][{j}]: {exc}", where) from None
            except OverflowError:
                value = math.inf
            if not math.isfinite(value):
                raise _json_error(text, f"vectors[{i}][{j}] is out of double range", where)
            row.append(value)
        if rows and len(row) != len(rows[0]):
            raise _json_error(
                text, f"vectors[{i}] has {len(row)} entries, expected {len(rows[0])}", ["vectors", i]
            )
        rows.append(row)
    return rows


def detect_format(path):
    suffix = Path(path).suffix.lower().lstrip(".")
    if suffix not in FORMATS:
        raise InputError(f"cannot infer format from {str(path)!r}; pass --format")
    return suffix


def read_vectors(path, fmt=None):
    """Load a vector set from ``path`` as an ``(n, m)`` float array."""
    fmt = fmt or detect_format(path)
    try:
        text = Path(path).read_bytes().decode("utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {str(path)!r}: {exc.strerror}") from None
    except UnicodeDecodeError as exc:
        raise ParseError(f"invalid UTF-8 at byte {exc.start}") from None
    rows = parse_csv(text) if fmt == "csv" else parse_json(text)
    return np.array(rows, dtype=np.float64)


def fmt_float(x):
    """Decimal string with 17 significant digits; parses back to the same double."""
    return format(float(x), ".17g")


def encode(obj):
    """Convert a report payload to JSON-ready values, floats as decimal strings."""
    if isinstance(obj, dict):
        return {k: encode(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return encode(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    return obj


def dumps(report):
    return json.dumps(encode(report), indent=2) + "\n"
