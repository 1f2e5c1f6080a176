"""Exhaustive generation of labeled partial orders and role-preserving canonical forms."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Iterator, Sequence

from porel.errors import LimitExceeded, PosetError
from porel.poset import Labels, Pair, Poset, _as_labels, iter_bits

MAX_SIZE = 7
_CACHE_SIZE = 6  # 130023 relations on 6 points; 7 points is streamed


def _check_limit(n: int, limit: int):
    if n > limit:
        raise LimitExceeded(f"carrier of size {n} exceeds the limit {limit}")


def _submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in increasing numeric order."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def _generate(n: int, order: Sequence[int]) -> Iterator[tuple[int, ...]]:
    # Insert elements one at a time.  The new element e gets a down-set D
    # (a lower end of what is already there) and an up-set U (an upper end
    # lying entirely above D); no pair between old elements changes.
    up = [0] * n
    down = [0] * n

    def extend(k: int, placed: int):
        if k == n:
            yield tuple(up)
            return
        e = order[k]
        ebit = 1 << e
        for D in _submasks(placed):
            if any(down[i] & ~D for i in iter_bits(D)):
                continue
            above = placed & ~D
            for d in iter_bits(D):
                above &= up[d]
            for U in _submasks(above):
                if any(up[u] & ~U for u in iter_bits(U)):
                    continue
                up[e] = U | ebit
                down[e] = D | ebit
                for d in iter_bits(D):
                    up[d] |= ebit
                for u in iter_bits(U):
                    down[u] |= ebit
                yield from extend(k + 1, placed | ebit)
                for d in iter_bits(D):
                    up[d] ^= ebit
                for u in iter_bits(U):
                    down[u] ^= ebit
        up[e] = down[e] = 0

    return extend(0, 0)


@lru_cache(maxsize=16)
def _cached(n: int, order: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    return tuple(_generate(n, order))


def raw_posets(n: int, order: Sequence[int] | None = None, *, limit: int = MAX_SIZE) -> Iterable[tuple[int, ...]]:
    """Up-mask rows of every partial order on ids ``0..n-1``.

    ``order`` is the insertion order of the ids (default: id order).  The
    stream is deterministic for a given order.
    """
    _check_limit(n, limit)
    order = tuple(range(n)) if order is None else tuple(order)
    if sorted(order) != list(range(n)):
        raise PosetError(f"insertion order {order} is not a permutation of 0..{n - 1}")
    if n <= _CACHE_SIZE:
        return _cached(n, order)
    return _generate(n, order)


def all_posets(carrier: Labels, *, order: Sequence[int] | None = None, limit: int = MAX_SIZE) -> Iterator[Poset]:
    """Every partial order relation on ``carrier``, each exactly once."""
    labels = tuple(_as_labels(carrier))
    for up in raw_posets(len(labels), order, limit=limit):
        yield Poset(labels, up)


def naive_posets(carrier: Labels) -> list[Poset]:
    """Filter all 2^(n^2-n) relations on the carrier; the cross-check oracle for n <= 4."""
    labels = tuple(_as_labels(carrier))
    _check_limit(len(labels), 4)
    off = [(a, b) for a in labels for b in labels if a != b]
    out = []
    for bits in product((False, True), repeat=len(off)):
        rel = {p for p, keep in zip(off, bits) if keep}
        if any((b, a) in rel for a, b in rel):
            continue
        if any(b == c and a != d and (a, d) not in rel for a, b in rel for c, d in rel):
            continue
        index = {a: i for i, a in enumerate(labels)}
        up = [1 << i for i in range(len(labels))]
        for a, b in rel:
            up[index[a]] |= 1 << index[b]
        out.append(Poset(labels, tuple(up)))
    return out


def hasse_cover(R: Poset) -> frozenset[Pair]:
    """Covering pairs (transitive reduction) of R."""
    out = set()
    down = R.down
    for a in range(R.n):
        for b in iter_bits(R.up[a] & ~(1 << a)):
            if R.up[a] & down[b] == (1 << a) | (1 << b):
                out.add((R.labels[a], R.labels[b]))
    return frozenset(out)


def _role_classes(R: Poset, roles) -> list[list[int]]:
    if roles is None:
        return [list(range(R.n))]
    classes = [[R.index[a] for a in cls] if not isinstance(cls, str) else [R.index[cls]] for cls in roles]
    flat = sorted(i for cls in classes for i in cls)
    if flat != list(range(R.n)):
        raise PosetError("role classes must partition the carrier")
    return classes


def canonical_form(R: Poset, roles: Sequence[Iterable[str]] | None = None, *, limit: int = MAX_SIZE) -> bytes:
    """Minimal relation-matrix encoding over role-preserving relabelings.

    ``roles`` partitions the carrier into classes; elements are only
    permuted inside their class, and the classes occupy consecutive
    positions in the given order.  Two relations get equal forms iff an
    isomorphism mapping each class onto the corresponding class exists.
    """
    _check_limit(R.n, limit)
    classes = _role_classes(R, roles)
    n = R.n
    strict = [(i, j) for i in range(n) for j in iter_bits(R.up[i] & ~(1 << i))]
    slots = []
    start = 0
    for cls in classes:
        slots.append(list(range(start, start + len(cls))))
        start += len(cls)
    best = None
    for choice in product(*(permutations(s) for s in slots)):
        pos = [0] * n
        for cls, placed in zip(classes, choice):
            for i, p in zip(cls, placed):
                pos[i] = p
        code = 0
        for i, j in strict:
            code |= 1 << (pos[i] * n + pos[j])
        if best is None or code < best:
            best = code
    header = bytes([n, len(classes), *(len(c) for c in classes)])
    return header + best.to_bytes((n * n + 7) // 8, "big")


def count_classes(rels: Iterable[Poset], roles) -> Counter:
    return Counter(canonical_form(R, roles) for R in rels)


@dataclass
class BlockRow:
    """Per-block counts for one G of the partition index."""

    anchor: Poset
    lhs: int
    rhs: int


@dataclass
class CountReport:
    lhs_count: int
    rhs_count: int
    lhs_classes: Counter = field(default_factory=Counter)
    rhs_classes: Counter = field(default_factory=Counter)
    block_table: list[BlockRow] = field(default_factory=list)
    params: dict = field(default_factory=dict)

    @property
    def equal(self) -> bool:
        return self.lhs_count == self.rhs_count

    def check(self):
        """Raise AssertionError if the bookkeeping invariants do not hold."""
        if self.lhs_classes:
            assert sum(self.lhs_classes.values()) == self.lhs_count
        if self.rhs_classes:
            assert sum(self.rhs_classes.values()) == self.rhs_count
        if self.block_table:
            assert sum(b.lhs for b in self.block_table) == self.lhs_count
            assert sum(b.rhs for b in self.block_table) == self.rhs_count

    @staticmethod
    def multiplicities(classes: Counter) -> list[int]:
        return sorted(classes.values())

    def to_dict(self) -> dict:
        from porel.textio import format_inline

        def cls(c):
            return sorted([k.hex(), v] for k, v in c.items())

        return {
            "params": self.params,
            "lhs": self.lhs_count,
            "rhs": self.rhs_count,
            "equal": self.equal,
            "classes": {"lhs": cls(self.lhs_classes), "rhs": cls(self.rhs_classes)},
            "blocks": [{"G": format_inline(b.anchor), "lhs": b.lhs, "rhs": b.rhs} for b in self.block_table],
        }
