"""Input description files: sectioned key/value text, or equivalent JSON.

Text grammar (documented with examples under sample_inputs/):

    # comment (also after values)
    [section]
    key = value
    key = another value      # repeating a key collects a list

Values are whitespace- or comma-separated tokens; typed accessors convert
them.  The JSON equivalent is an object mapping section names to objects;
repeatable keys take a list value.

All grammar violations raise ParseError with line/column information.
"""

from __future__ import annotations

import json
from typing import Dict, List, Optional

from .errors import ParseError

__all__ = ["parse_input_file", "Sections"]


class Sections:
    """Parsed sections: name -> key -> list of raw string values."""

    def __init__(self, data: Dict[str, Dict[str, List[str]]]):
        self.data = data

    def section(self, name: str, required: bool = True) -> Optional[Dict[str, List[str]]]:
        if name not in self.data:
            if required:
                raise ParseError(f"missing required section [{name}]")
            return None
        return self.data[name]

    def get(self, section: str, key: str, default=None, required: bool = False) -> Optional[str]:
        sec = self.data.get(section, {})
        if key not in sec:
            if required:
                raise ParseError(f"missing key {key!r} in section [{section}]")
            return default
        vals = sec[key]
        if len(vals) != 1:
            raise ParseError(f"key {key!r} in [{section}] given {len(vals)} times, expected once")
        return vals[0]

    def get_int(self, section: str, key: str, default=None, required: bool = False) -> Optional[int]:
        raw = self.get(section, key, None, required)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise ParseError(f"key {key!r} in [{section}]: expected an integer, got {raw!r}")

    def get_bool(self, section: str, key: str, default=None) -> Optional[bool]:
        raw = self.get(section, key)
        if raw is None:
            return default
        lowered = raw.strip().lower()
        if lowered in ("true", "yes", "1"):
            return True
        if lowered in ("false", "no", "0"):
            return False
        raise ParseError(f"key {key!r} in [{section}]: expected a boolean, got {raw!r}")

    def get_int_list(self, section: str, key: str, required: bool = False) -> Optional[List[int]]:
        raw = self.get(section, key, None, required)
        if raw is None:
            return None
        return _int_tokens(raw, f"{key!r} in [{section}]")

    def get_all(self, section: str, key: str) -> List[str]:
        return list(self.data.get(section, {}).get(key, []))

    def get_all_int_lists(self, section: str, key: str) -> List[List[int]]:
        return [_int_tokens(v, f"{key!r} in [{section}]") for v in self.get_all(section, key)]


def _int_tokens(raw: str, where: str) -> List[int]:
    toks = raw.replace(",", " ").split()
    out = []
    for t in toks:
        try:
            out.append(int(t))
        except ValueError:
            raise ParseError(f"{where}: expected integers, got {t!r}")
    return out


def _parse_text(text: str) -> Sections:
    data: Dict[str, Dict[str, List[str]]] = {}
    current: Optional[str] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            if not stripped.endswith("]") or len(stripped) < 3:
                raise ParseError("malformed section header", line=lineno, column=1)
            name = stripped[1:-1].strip()
            if not name:
                raise ParseError("empty section name", line=lineno, column=2)
            data.setdefault(name, {})
            current = name
            continue
        if "=" not in stripped:
            raise ParseError("expected 'key = value'", line=lineno,
                             column=len(raw) - len(raw.lstrip()) + 1)
        if current is None:
            raise ParseError("key/value outside any [section]", line=lineno, column=1)
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ParseError("empty key", line=lineno, column=1)
        data[current].setdefault(key, []).append(value)
    return Sections(data)


def _parse_json(text: str) -> Sections:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno)
    if not isinstance(obj, dict):
        raise ParseError("top-level JSON value must be an object of sections")
    data: Dict[str, Dict[str, List[str]]] = {}
    for section, body in obj.items():
        if not isinstance(body, dict):
            raise ParseError(f"section {section!r} must be an object")
        data[section] = {}
        for key, value in body.items():
            if isinstance(value, list) and not any(isinstance(v, (dict, list)) for v in value):
                if value and all(isinstance(v, (int, float)) for v in value):
                    data[section][key] = [" ".join(str(v) for v in value)] \
                        if key not in _REPEATABLE else [str(v) for v in value]
                else:
                    data[section][key] = [_scalar(v, section, key) for v in value]
            else:
                data[section][key] = [_scalar(value, section, key)]
    return Sections(data)


# keys whose JSON list form means "repeated key", not "one list value"
_REPEATABLE = {"gen", "row", "entry", "factor"}


def _scalar(v, section: str, key: str) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float, str)):
        return str(v)
    raise ParseError(f"unsupported JSON value for {key!r} in section {section!r}")


def parse_input_file(path: str) -> Sections:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read input file: {exc}")
    if path.endswith(".json") or text.lstrip().startswith("{"):
        return _parse_json(text)
    return _parse_text(text)
