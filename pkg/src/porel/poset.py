"""Finite partial order relations on small labeled carriers.

A relation is stored as a dense bit matrix: ``up[i]`` is the bitmask of
the up-set of element ``i`` (the diagonal is always included).  Element
ids are positions in ``labels``; labels are for display and for talking
about elements from the outside.  Every public function takes and returns
element *labels*; the ``*_mask`` helpers work on raw bitmasks.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Union

from porel.errors import (
    AntisymmetryViolation,
    ForeignElement,
    NotTransitivelyClosed,
    OverlappingCarriers,
    PosetError,
)

Pair = tuple[str, str]
Labels = Union[str, Iterable[str]]


class Element(NamedTuple):
    id: int
    label: str


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _as_labels(M: Labels) -> list[str]:
    # a bare string is one label, not a sequence of one-character labels
    if isinstance(M, str):
        return [M]
    return list(M)


@dataclass(frozen=True, eq=False)
class Poset:
    """A partial order relation; build it with :func:`validate` or the helpers below.

    Equality is pair-set equality: two relations on the same label set
    compare equal even if their internal element order differs.
    """

    labels: tuple[str, ...]
    up: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise PosetError(f"duplicate labels in carrier {self.labels}")

    @cached_property
    def index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.labels)}

    @cached_property
    def down(self) -> tuple[int, ...]:
        down = [0] * len(self.labels)
        for i, row in enumerate(self.up):
            for j in iter_bits(row):
                down[j] |= 1 << i
        return tuple(down)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return (1 << len(self.labels)) - 1

    @property
    def carrier(self) -> frozenset[str]:
        return frozenset(self.labels)

    @property
    def elements(self) -> tuple[Element, ...]:
        return tuple(Element(i, a) for i, a in enumerate(self.labels))

    def mask(self, M: Labels) -> int:
        m = 0
        for a in _as_labels(M):
            try:
                m |= 1 << self.index[a]
            except KeyError:
                raise ForeignElement(f"{a!r} is not in the carrier {sorted(self.labels)}") from None
        return m

    def subset(self, mask: int) -> frozenset[str]:
        return frozenset(self.labels[i] for i in iter_bits(mask))

    def up_mask(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= self.up[i]
        return out

    def down_mask(self, mask: int) -> int:
        out = 0
        down = self.down
        for i in iter_bits(mask):
            out |= down[i]
        return out

    def leq(self, a: str, b: str) -> bool:
        return bool(self.up[self.index[a]] >> self.index[b] & 1)

    @cached_property
    def pairs(self) -> frozenset[Pair]:
        return frozenset(
            (self.labels[i], self.labels[j]) for i, row in enumerate(self.up) for j in iter_bits(row)
        )

    @cached_property
    def strict_pairs(self) -> frozenset[Pair]:
        return frozenset((a, b) for a, b in self.pairs if a != b)

    def sorted_strict_pairs(self) -> list[Pair]:
        return sorted(self.strict_pairs)

    @cached_property
    def _key(self):
        return frozenset(self.labels), self.strict_pairs

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        if self.labels == other.labels:
            return self.up == other.up
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        rel = ", ".join(f"{a}<{b}" for a, b in self.sorted_strict_pairs())
        return f"Poset([{' '.join(self.labels)}] {{{rel}}})"

    def reorder(self, labels: Iterable[str]) -> "Poset":
        """Same relation, element ids assigned in the given label order."""
        labels = tuple(labels)
        if sorted(labels) != sorted(self.labels):
            raise PosetError(f"{labels} is not a permutation of {self.labels}")
        pos = [self.index[a] for a in labels]
        where = {old: new for new, old in enumerate(pos)}
        up = []
        for old in pos:
            row = 0
            for j in iter_bits(self.up[old]):
                row |= 1 << where[j]
            up.append(row)
        return Poset(labels, tuple(up))

    def relabel(self, mapping: dict[str, str]) -> "Poset":
        return Poset(tuple(mapping.get(a, a) for a in self.labels), self.up)


# -- construction ----------------------------------------------------------


def _from_pairs_unchecked(labels: tuple[str, ...], pairs: Iterable[Pair]) -> tuple[int, ...]:
    index = {a: i for i, a in enumerate(labels)}
    up = [1 << i for i in range(len(labels))]
    for a, b in pairs:
        if a not in index or b not in index:
            bad = a if a not in index else b
            raise ForeignElement(f"pair ({a}, {b}) mentions {bad!r}, which is not in the carrier")
        up[index[a]] |= 1 << index[b]
    return tuple(up)


def validate(carrier: Iterable[str], strict_pairs: Iterable[Pair]) -> Poset:
    """Check that ``strict_pairs`` is a strict partial order on ``carrier``.

    The diagonal is added; nothing else is.  Input that is not already
    transitively closed is rejected, not repaired (use
    :func:`transitive_hull` for that).
    """
    labels = tuple(_as_labels(carrier))
    if len(set(labels)) != len(labels):
        raise PosetError(f"duplicate labels in carrier {labels}")
    return from_rows(labels, _from_pairs_unchecked(labels, strict_pairs))


def from_rows(labels: Iterable[str], up: Iterable[int]) -> Poset:
    """Build a relation from up-mask rows, rejecting anything that is not a partial order."""
    labels = tuple(labels)
    up = tuple(row | 1 << i for i, row in enumerate(up))
    n = len(labels)
    if len(up) != n or any(row >> n for row in up):
        raise ForeignElement("rows refer to ids outside the carrier")
    for i in range(n):
        for j in iter_bits(up[i] & ~(1 << i)):
            if up[j] >> i & 1:
                raise AntisymmetryViolation(f"{labels[i]} < {labels[j]} and {labels[j]} < {labels[i]}")
    for i in range(n):
        for j in iter_bits(up[i]):
            missing = up[j] & ~up[i]
            if missing:
                k = next(iter_bits(missing))
                raise NotTransitivelyClosed(
                    f"{labels[i]} < {labels[j]} < {labels[k]} but ({labels[i]}, {labels[k]}) is missing"
                )
    return Poset(labels, up)


def transitive_hull(*parts) -> Poset:
    """Smallest transitive (and reflexive) relation containing all parts.

    Each part is a :class:`Poset` or a plain iterable of label pairs.  The
    carrier is the union of the parts' carriers, in order of first
    appearance.  Raises :class:`AntisymmetryViolation` when the closure is
    not antisymmetric.
    """
    labels: list[str] = []
    seen = set()
    pair_lists = []
    for part in parts:
        if isinstance(part, Poset):
            names, pairs = part.labels, part.pairs
        else:
            pairs = [tuple(p) for p in part]
            names = [a for p in pairs for a in p]
        for a in names:
            if a not in seen:
                seen.add(a)
                labels.append(a)
        pair_lists.append(pairs)
    lab = tuple(labels)
    up = list(_from_pairs_unchecked(lab, (p for pairs in pair_lists for p in pairs)))
    n = len(lab)
    for k in range(n):
        bit = 1 << k
        for i in range(n):
            if up[i] & bit:
                up[i] |= up[k]
    for i in range(n):
        for j in iter_bits(up[i] & ~(1 << i)):
            if up[j] >> i & 1:
                raise AntisymmetryViolation(
                    f"closure puts {lab[i]} and {lab[j]} below each other"
                )
    return Poset(lab, tuple(up))


def empty() -> Poset:
    return Poset((), ())


def antichain(labels: Labels) -> Poset:
    labels = tuple(_as_labels(labels))
    return Poset(labels, tuple(1 << i for i in range(len(labels))))


def singleton(label: str) -> Poset:
    """The one-point relation A_y."""
    return antichain([label])


def chain(labels: Labels) -> Poset:
    """Chain following the given order: labels[0] < labels[1] < ..."""
    labels = tuple(_as_labels(labels))
    n = len(labels)
    full = (1 << n) - 1
    return Poset(labels, tuple(full & ~((1 << i) - 1) for i in range(n)))


def lambda_poset(a: str = "a", b: str = "b", c: str = "c") -> Poset:
    """Two minimal points a, c below one maximal point b."""
    return validate([a, b, c], [(a, b), (c, b)])


def vee_poset(a: str = "a", b: str = "b", c: str = "c") -> Poset:
    return dual(lambda_poset(a, b, c))


_PRESET = re.compile(r"^(antichain|chain)(\d+)$")


def preset(name: str, prefix: str = "z") -> Poset:
    """Named anchors: ``empty``, ``antichain<k>``, ``chain<k>``, ``lambda``, ``vee``.

    Elements are labeled ``z1, z2, ...``; ``lambda`` is z1 < z2 > z3.
    """
    if name == "empty":
        return empty()
    if name == "lambda":
        return lambda_poset(f"{prefix}1", f"{prefix}2", f"{prefix}3")
    if name == "vee":
        return vee_poset(f"{prefix}1", f"{prefix}2", f"{prefix}3")
    m = _PRESET.match(name)
    if not m:
        raise KeyError(name)
    labels = [f"{prefix}{i}" for i in range(1, int(m.group(2)) + 1)]
    return antichain(labels) if m.group(1) == "antichain" else chain(labels)


# -- structural operations ---------------------------------------------------


def induced(R: Poset, M: Labels) -> Poset:
    """R restricted to M; element order follows R."""
    return induced_mask(R, R.mask(M))


def induced_mask(R: Poset, mask: int) -> Poset:
    keep = list(iter_bits(mask))
    where = {old: new for new, old in enumerate(keep)}
    up = []
    for old in keep:
        row = 0
        for j in iter_bits(R.up[old] & mask):
            row |= 1 << where[j]
        up.append(row)
    return Poset(tuple(R.labels[i] for i in keep), tuple(up))


def dual(R: Poset) -> Poset:
    return Poset(R.labels, R.down)


def _check_disjoint(R1: Poset, R2: Poset):
    common = R1.carrier & R2.carrier
    if common:
        raise OverlappingCarriers(f"carriers share {sorted(common)}")


def direct_sum(R1: Poset, R2: Poset) -> Poset:
    _check_disjoint(R1, R2)
    shift = R1.n
    return Poset(R1.labels + R2.labels, R1.up + tuple(row << shift for row in R2.up))


def ordinal_sum(R1: Poset, R2: Poset) -> Poset:
    """R2 placed on top of R1."""
    _check_disjoint(R1, R2)
    shift = R1.n
    top = R2.full << shift
    return Poset(R1.labels + R2.labels, tuple(row | top for row in R1.up) + tuple(row << shift for row in R2.up))


# -- ends, extremal points, convexity ----------------------------------------


def down_set(R: Poset, M: Labels) -> frozenset[str]:
    return R.subset(R.down_mask(R.mask(M)))


def up_set(R: Poset, M: Labels) -> frozenset[str]:
    return R.subset(R.up_mask(R.mask(M)))


def is_lower_end_mask(R: Poset, mask: int) -> bool:
    return R.down_mask(mask) == mask


def is_upper_end_mask(R: Poset, mask: int) -> bool:
    return R.up_mask(mask) == mask


def is_lower_end(R: Poset, M: Labels) -> bool:
    return is_lower_end_mask(R, R.mask(M))


def is_upper_end(R: Poset, M: Labels) -> bool:
    return is_upper_end_mask(R, R.mask(M))


def lower_end_masks(R: Poset) -> list[int]:
    # L is a lower end iff no pair of R leads from outside L into L
    out = []
    down = R.down
    for L in range(R.full + 1):
        if all(down[i] & ~L == 0 for i in iter_bits(L)):
            out.append(L)
    return out


def lower_ends(R: Poset) -> list[frozenset[str]]:
    return [R.subset(L) for L in lower_end_masks(R)]


def upper_ends(R: Poset) -> list[frozenset[str]]:
    return lower_ends(dual(R))


def maximal_mask(R: Poset, mask: int | None = None) -> int:
    if mask is None:
        mask = R.full
    out = 0
    for i in iter_bits(mask):
        if R.up[i] & mask == 1 << i:
            out |= 1 << i
    return out


def minimal_mask(R: Poset, mask: int | None = None) -> int:
    if mask is None:
        mask = R.full
    out = 0
    down = R.down
    for i in iter_bits(mask):
        if down[i] & mask == 1 << i:
            out |= 1 << i
    return out


def maximal_points(R: Poset) -> frozenset[str]:
    return R.subset(maximal_mask(R))


def minimal_points(R: Poset) -> frozenset[str]:
    return R.subset(minimal_mask(R))


def maximal_points_of(R: Poset, M: Labels) -> frozenset[str]:
    """max M, i.e. the maximal points of R restricted to M."""
    return R.subset(maximal_mask(R, R.mask(M)))


def minimal_points_of(R: Poset, M: Labels) -> frozenset[str]:
    return R.subset(minimal_mask(R, R.mask(M)))


def is_convex_mask(R: Poset, mask: int) -> bool:
    down = R.down
    for x in iter_bits(R.full & ~mask):
        if R.up[x] & mask and down[x] & mask:
            return False
    return True


def is_convex(R: Poset, M: Labels) -> bool:
    return is_convex_mask(R, R.mask(M))


def convex_hull_mask(R: Poset, mask: int) -> int:
    down = R.down
    hull = 0
    for m in iter_bits(mask):
        for k in iter_bits(mask):
            hull |= R.up[m] & down[k]
    return hull


def convex_hull(R: Poset, M: Labels) -> frozenset[str]:
    """Smallest convex superset of M: all x with m <= x <= n for some m, n in M."""
    return R.subset(convex_hull_mask(R, R.mask(M)))


@dataclass(frozen=True)
class SplitContext:
    """A partition of a carrier into a lower part, an upper part and an optional apex.

    Tuples keep the caller's element order, which fixes element ids of
    everything enumerated on ``carrier``: lower part first, then the upper
    part, then the apex (always the largest id).
    """

    lower_part: tuple[str, ...]
    upper_part: tuple[str, ...]
    apex: str | None = None

    def __post_init__(self):
        lower = tuple(_as_labels(self.lower_part))
        upper = tuple(_as_labels(self.upper_part))
        object.__setattr__(self, "lower_part", lower)
        object.__setattr__(self, "upper_part", upper)
        if len(set(lower)) != len(lower) or len(set(upper)) != len(upper):
            raise PosetError("duplicate labels in split context")
        common = set(lower) & set(upper)
        if common:
            raise OverlappingCarriers(f"lower and upper part share {sorted(common)}")
        if self.apex is not None and (self.apex in lower or self.apex in upper):
            raise OverlappingCarriers(f"apex {self.apex!r} lies in one of the parts")

    @property
    def lower(self) -> frozenset[str]:
        return frozenset(self.lower_part)

    @property
    def upper(self) -> frozenset[str]:
        return frozenset(self.upper_part)

    @property
    def carrier(self) -> tuple[str, ...]:
        extra = () if self.apex is None else (self.apex,)
        return self.lower_part + self.upper_part + extra

    @classmethod
    def split(cls, R: Poset, upper: Labels, apex: str | None = None) -> "SplitContext":
        """Context whose lower part is everything of R outside ``upper`` and the apex."""
        upper = _as_labels(upper)
        R.mask(upper)
        if apex is not None:
            R.mask(apex)
        taken = set(upper) | {apex}
        return cls(tuple(a for a in R.labels if a not in taken), tuple(upper), apex)
