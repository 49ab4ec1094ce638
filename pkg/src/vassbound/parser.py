"""Input formats.

Text grammar (UTF-8, '#' comments to end of line):

    dim <d>
    states <id> <id> ...        # one or more lines
    <q> -> <q'> [e1 e2 ... ed]  # one transition per line, entries in {-1,0,1}

Identifiers match [A-Za-z_][A-Za-z0-9_]*.  Declaration order of states fixes
the canonical state numbering.  Files ending in .json carry the same fields
as a JSON object: {"dim": d, "states": [...], "transitions": [[src, [e...],
tgt], ...]} (transition objects {"source","update","target"} also accepted).
"""

from __future__ import annotations

import json
import re
from typing import Sequence

from .core import Vass, VassError, validate

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
TRANSITION = re.compile(
    r"(?P<src>[A-Za-z_][A-Za-z0-9_]*)\s*->\s*(?P<tgt>[A-Za-z_][A-Za-z0-9_]*)\s*\[(?P<upd>[^\]]*)\]\s*\Z"
)


class ParseError(ValueError):
    def __init__(self, line: int, rule: str, message: str) -> None:
        super().__init__(f"line {line}: [{rule}] {message}")
        self.line = line
        self.rule = rule


def parse_text(text: str) -> Vass:
    dim = None
    states: list[str] = []
    transitions: list[tuple[str, Sequence[int], str]] = []
    section = "dim"

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if section == "dim":
            if tokens[0] != "dim" or len(tokens) != 2:
                raise ParseError(lineno, "dim", "first significant line must be 'dim <d>'")
            try:
                dim = int(tokens[1])
            except ValueError:
                raise ParseError(lineno, "dim", f"{tokens[1]!r} is not an integer") from None
            if dim < 1:
                raise ParseError(lineno, "dim", "dimension must be positive")
            section = "states"
            continue
        if tokens[0] == "states":
            if section not in ("states",):
                raise ParseError(lineno, "states", "states lines must precede transitions")
            if len(tokens) < 2:
                raise ParseError(lineno, "states", "states line declares no identifiers")
            for tok in tokens[1:]:
                if not IDENT.match(tok):
                    raise ParseError(lineno, "identifier", f"bad state identifier {tok!r}")
                states.append(tok)
            continue
        # anything else must be a transition line
        if section == "states" and not states:
            raise ParseError(lineno, "states", "expected a 'states' line before transitions")
        section = "transitions"
        m = TRANSITION.match(line)
        if not m:
            raise ParseError(
                lineno, "transition", f"expected '<q> -> <q>' '[e1 ... ed]', got {line!r}"
            )
        upd_tokens = m.group("upd").split()
        try:
            update = [int(tok) for tok in upd_tokens]
        except ValueError:
            raise ParseError(
                lineno, "update-entry", f"non-integer update entry in {line!r}"
            ) from None
        transitions.append((m.group("src"), update, m.group("tgt")))

    if dim is None:
        raise ParseError(1, "dim", "empty input: expected 'dim <d>'")
    if not states:
        raise ParseError(1, "states", "no states declared")
    return validate(dim, states, transitions)


def parse_json(text: str) -> Vass:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, "json", exc.msg) from None
    if not isinstance(doc, dict):
        raise ParseError(1, "json", "top-level JSON value must be an object")
    for key in ("dim", "states", "transitions"):
        if key not in doc:
            raise ParseError(1, "json", f"missing field {key!r}")
    transitions = []
    for i, item in enumerate(doc["transitions"]):
        if isinstance(item, dict):
            try:
                transitions.append((item["source"], item["update"], item["target"]))
            except KeyError as exc:
                raise ParseError(1, "json", f"transition {i} missing field {exc}") from None
        elif isinstance(item, (list, tuple)) and len(item) == 3:
            transitions.append((item[0], item[1], item[2]))
        else:
            raise ParseError(
                1, "json", f"transition {i} must be [source, update, target] or an object"
            )
    return validate(doc["dim"], doc["states"], transitions)


def parse_path(path: str, text: str) -> Vass:
    if path.endswith(".json"):
        return parse_json(text)
    return parse_text(text)


def load(path: str) -> Vass:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_path(path, fh.read())
