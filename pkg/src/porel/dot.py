"""Graphviz DOT rendering of Hasse diagrams."""
from __future__ import annotations

from typing import Iterable

from porel.enumeration import hasse_cover
from porel.poset import Poset, iter_bits

# black dots for the anchor, small circles for the lower part, a hollow diamond for the apex
STYLES = {
    "upper": 'shape=circle, style=filled, fillcolor=black, fontcolor=white, width=0.3',
    "lower": 'shape=circle, width=0.2',
    "apex": 'shape=diamond',
}


def ranks(R: Poset) -> list[int]:
    """Length of the longest chain ending at each element (minimal points get 0)."""
    out = [0] * R.n
    down = R.down
    # a strict predecessor always has a strictly smaller down-set
    for i in sorted(range(R.n), key=lambda i: bin(down[i]).count("1")):
        for j in iter_bits(down[i] & ~(1 << i)):
            out[i] = max(out[i], out[j] + 1)
    return out


def to_dot(
    R: Poset,
    *,
    upper: Iterable[str] = (),
    lower: Iterable[str] = (),
    apex: str | None = None,
    name: str = "poset",
) -> str:
    role = {a: "upper" for a in upper}
    role.update({a: "lower" for a in lower})
    if apex is not None:
        role[apex] = "apex"
    for a in role:
        R.mask(a)
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  edge [arrowhead=none];"]
    for a in R.labels:
        style = STYLES.get(role.get(a, ""), "shape=plaintext")
        lines.append(f'  "{a}" [{style}];')
    levels: dict[int, list[str]] = {}
    for a, r in zip(R.labels, ranks(R)):
        levels.setdefault(r, []).append(a)
    for r in sorted(levels):
        members = " ".join(f'"{a}";' for a in levels[r])
        lines.append(f"  {{ rank=same; {members} }}")
    for a, b in sorted(hasse_cover(R), key=lambda p: (R.index[p[0]], R.index[p[1]])):
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
