"""Plain-text stanza format for relations and monotone maps.

A stanza::

    # comment
    carrier: a b c
    a < b
    c < b

The first line of a stanza names the carrier in element-id order; every
following line is one strict pair.  The reader closes nothing, so the
pairs must already be transitively closed.  Stanzas are separated by
blank lines.  A map stanza is a relation stanza (the base relation on the
lower part) followed by one ``z -> x1 x2`` line per upper element.
"""
from __future__ import annotations

import re
from pathlib import Path

from porel.errors import ParseError, PosetError
from porel.poset import Poset, validate

_LABEL = r"[^\s<:#,>-][^\s<:#,>]*"
_CARRIER = re.compile(r"^carrier\s*:(.*)$")
_PAIR = re.compile(rf"^({_LABEL})\s*<\s*({_LABEL})$")
_ASSIGN = re.compile(rf"^({_LABEL})\s*->(.*)$")
_LABEL_ONLY = re.compile(rf"^{_LABEL}$")


def _stanzas(text: str):
    """Yield lists of (line_number, content) with comments stripped."""
    block = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if block and not raw.strip():
                yield block
                block = []
            continue
        block.append((no, line))
    if block:
        yield block


def _labels(rest: str, no: int) -> list[str]:
    labels = rest.split()
    for a in labels:
        if not _LABEL_ONLY.match(a):
            raise ParseError(f"bad element label {a!r}", no)
    return labels


def _parse_block(block):
    no, first = block[0]
    m = _CARRIER.match(first)
    if not m:
        raise ParseError("stanza must start with 'carrier: ...'", no)
    carrier = _labels(m.group(1), no)
    pairs = []
    assignments = {}
    for no, line in block[1:]:
        pm = _PAIR.match(line)
        if pm:
            if assignments:
                raise ParseError("pair after map lines", no)
            pairs.append((pm.group(1), pm.group(2)))
            continue
        am = _ASSIGN.match(line)
        if am:
            assignments[am.group(1)] = _labels(am.group(2), no)
            continue
        raise ParseError(f"cannot parse {line!r}", no)
    try:
        R = validate(carrier, pairs)
    except PosetError as exc:
        raise ParseError(str(exc), block[0][0]) from exc
    return R, assignments


def parse_posets(text: str) -> list[Poset]:
    out = []
    for block in _stanzas(text):
        R, assignments = _parse_block(block)
        if assignments:
            raise ParseError("unexpected map lines in a relation stanza", block[0][0])
        out.append(R)
    return out


def parse_poset(text: str) -> Poset:
    rels = parse_posets(text)
    if len(rels) != 1:
        raise ParseError(f"expected exactly one relation, found {len(rels)}")
    return rels[0]


def parse_map(text: str):
    """Parse one map stanza into a :class:`~porel.families.MonotoneLowerEndMap`."""
    from porel.families import MonotoneLowerEndMap

    blocks = list(_stanzas(text))
    if len(blocks) != 1:
        raise ParseError(f"expected exactly one map stanza, found {len(blocks)}")
    base, assignments = _parse_block(blocks[0])
    try:
        return MonotoneLowerEndMap.from_dict(base, assignments)
    except PosetError as exc:
        raise ParseError(str(exc)) from exc


def format_poset(R: Poset) -> str:
    head = "carrier:" + "".join(" " + a for a in R.labels)
    lines = [head] + [f"{a} < {b}" for a, b in R.sorted_strict_pairs()]
    return "\n".join(lines) + "\n"


def format_inline(R: Poset) -> str:
    """One-line form used in reports: ``carrier: a b c; a < b; c < b``."""
    return format_poset(R).rstrip("\n").replace("\n", "; ")


def format_posets(rels) -> str:
    return "\n".join(format_poset(R) for R in rels)


def format_map(f) -> str:
    lines = [format_poset(f.base).rstrip("\n")]
    for y, low in f.assignment:
        members = [a for a in f.base.labels if a in low]
        lines.append(f"{y} ->" + "".join(" " + a for a in members))
    return "\n".join(lines) + "\n"


def read_poset(path) -> Poset:
    return parse_poset(Path(path).read_text())
