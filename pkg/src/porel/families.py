"""Relation families, monotone lower-end maps and the partition check.

Every family lives on the carrier ``lower ∪ upper (∪ apex)`` of a
:class:`SplitContext`.  When the context has an apex ``y`` the family is
taken relative to ``upper ∪ {y}`` with anchor ``Q + A_y``, which is how
the main counting identity uses them.

Membership is decided on raw up-mask rows so that enumeration can filter
hundreds of thousands of candidates without building objects;
:func:`why_not_member` is a slower, independent re-statement that also
says *why* a relation fails.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Mapping

from porel.enumeration import MAX_SIZE, raw_posets
from porel.errors import (
    CarrierMismatch,
    LimitExceeded,
    NotInFamily,
    NotMonotone,
    OverlappingCarriers,
    PartitionViolation,
)
from porel.poset import (
    Poset,
    SplitContext,
    convex_hull,
    direct_sum,
    induced,
    is_upper_end,
    iter_bits,
    lower_end_masks,
    maximal_points,
    maximal_points_of,
    singleton,
)


class FamilyKind(str, enum.Enum):
    U = "u"
    C = "c"
    M = "m"
    MSTAR = "mstar"
    F = "f"
    FSTAR = "fstar"
    I = "i"  # noqa: E741
    NSTAR = "nstar"
    G = "g"


_MAP_KINDS = (FamilyKind.F, FamilyKind.FSTAR)


@dataclass(frozen=True)
class FamilySpec:
    kind: FamilyKind
    context: SplitContext
    anchor: Poset | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", FamilyKind(self.kind))
        if self.anchor is None:
            if self.kind is not FamilyKind.U:
                raise CarrierMismatch(f"family {self.kind.value} needs an anchor relation")
        elif self.anchor.carrier != self.context.upper:
            raise CarrierMismatch(
                f"anchor carrier {sorted(self.anchor.carrier)} differs from the upper part "
                f"{sorted(self.context.upper)}"
            )

    @classmethod
    def of(cls, kind, anchor: Poset, lower: Iterable[str], apex: str | None = None) -> "FamilySpec":
        return cls(FamilyKind(kind), SplitContext(tuple(lower), anchor.labels, apex), anchor)

    @property
    def upper_labels(self) -> tuple[str, ...]:
        ctx = self.context
        return ctx.upper_part + (() if ctx.apex is None else (ctx.apex,))

    @property
    def full_anchor(self) -> Poset | None:
        """The anchor including the apex point, Q + A_y."""
        if self.anchor is None or self.context.apex is None:
            return self.anchor
        return direct_sum(self.anchor, singleton(self.context.apex))


# -- monotone lower-end maps ----------------------------------------------------


@dataclass(frozen=True)
class MonotoneLowerEndMap:
    """A map from the upper elements to lower ends of ``base``.

    ``assignment`` holds ``(element, lower end)`` pairs in domain order.
    Monotonicity depends on the anchor relation and is checked against it
    by :meth:`check_monotone`.
    """

    base: Poset
    assignment: tuple[tuple[str, frozenset[str]], ...]

    def __post_init__(self):
        for y, low in self.assignment:
            mask = self.base.mask(low)
            if self.base.down_mask(mask) != mask:
                raise NotInFamily(f"f({y}) = {sorted(low)} is not a lower end of the base relation")

    @classmethod
    def from_dict(cls, base: Poset, mapping: Mapping[str, Iterable[str]]) -> "MonotoneLowerEndMap":
        return cls(base, tuple((y, frozenset(v)) for y, v in mapping.items()))

    def __getitem__(self, y: str) -> frozenset[str]:
        for key, low in self.assignment:
            if key == y:
                return low
        raise KeyError(y)

    @property
    def domain(self) -> tuple[str, ...]:
        return tuple(y for y, _ in self.assignment)

    def as_dict(self) -> dict[str, frozenset[str]]:
        return dict(self.assignment)

    def image_union(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for _, low in self.assignment:
            out |= low
        return out

    def is_starred(self) -> bool:
        return self.image_union() == self.base.carrier

    def check_monotone(self, Q: Poset):
        if set(self.domain) != Q.carrier or len(self.domain) != Q.n:
            raise CarrierMismatch(f"map domain {sorted(self.domain)} is not the carrier of {Q!r}")
        f = self.as_dict()
        for a, b in Q.strict_pairs:
            if not f[a] <= f[b]:
                raise NotMonotone(f"{a} < {b} but f({a}) = {sorted(f[a])} is not inside f({b}) = {sorted(f[b])}")

    def is_monotone(self, Q: Poset) -> bool:
        try:
            self.check_monotone(Q)
        except (NotMonotone, CarrierMismatch):
            return False
        return True

    def __eq__(self, other):
        if not isinstance(other, MonotoneLowerEndMap):
            return NotImplemented
        return self.base == other.base and self.as_dict() == other.as_dict()

    def __hash__(self):
        return hash((self.base, frozenset(self.assignment)))


def enumerate_monotone_maps(Q: Poset, X: Iterable[str], starred: bool = False, *, limit: int = MAX_SIZE) -> list[MonotoneLowerEndMap]:
    """All maps of the F_Q(X, Y) space (or its starred subset), base relation by base relation."""
    X = tuple(X)
    common = set(X) & Q.carrier
    if common:
        raise OverlappingCarriers(f"X and the anchor carrier share {sorted(common)}")
    if len(X) + Q.n > limit:
        raise LimitExceeded(f"carrier of size {len(X) + Q.n} exceeds the limit {limit}")
    strict = [(Q.index[a], Q.index[b]) for a, b in Q.strict_pairs]
    out = []
    for up in raw_posets(len(X)):
        base = Poset(X, up)
        ends = lower_end_masks(base)
        for choice in product(ends, repeat=Q.n):
            if any(choice[a] & ~choice[b] for a, b in strict):
                continue
            if starred:
                union = 0
                for m in choice:
                    union |= m
                if union != base.full:
                    continue
            out.append(MonotoneLowerEndMap(base, tuple((Q.labels[i], base.subset(m)) for i, m in enumerate(choice))))
    return out


# -- membership ----------------------------------------------------------------


def _predicate(spec: FamilySpec, labels: tuple[str, ...]) -> Callable[[tuple[int, ...]], bool]:
    index = {a: i for i, a in enumerate(labels)}
    n = len(labels)
    full = (1 << n) - 1
    upper = [index[a] for a in spec.upper_labels]
    ymask = 0
    for i in upper:
        ymask |= 1 << i
    others = [i for i in range(n) if not ymask >> i & 1]
    kind = spec.kind

    expected = []
    max_anchor = 0
    anchor = spec.full_anchor
    if anchor is not None:
        for i, row in zip((index[a] for a in anchor.labels), anchor.up):
            mapped = 0
            for j in iter_bits(row):
                mapped |= 1 << index[anchor.labels[j]]
            expected.append((i, mapped))
            if mapped == 1 << i:
                max_anchor |= 1 << i

    def induced_ok(up):
        for i, row in expected:
            if up[i] & ymask != row:
                return False
        return True

    def up_of_y(up):
        u = 0
        for i in upper:
            u |= up[i]
        return u

    def convex_ok(up):
        above = up_of_y(up)
        for x in others:
            if up[x] & ymask and above >> x & 1:
                return False
        return True

    def upper_end_ok(up):
        return up_of_y(up) == ymask

    def max_ok(up):
        m = 0
        for i in range(n):
            if up[i] == 1 << i:
                m |= 1 << i
        return m == max_anchor

    def hull_ok(up):
        below = 0
        for x in range(n):
            if up[x] & ymask:
                below |= 1 << x
        return up_of_y(up) & below == full

    if kind is FamilyKind.U:
        return upper_end_ok
    if kind is FamilyKind.C:
        return lambda up: induced_ok(up) and convex_ok(up)
    if kind is FamilyKind.M:
        return lambda up: induced_ok(up) and upper_end_ok(up)
    if kind is FamilyKind.MSTAR:
        return lambda up: induced_ok(up) and convex_ok(up) and max_ok(up)
    if kind is FamilyKind.I:
        return induced_ok
    if kind is FamilyKind.NSTAR:
        return lambda up: induced_ok(up) and max_ok(up)
    if kind is FamilyKind.G:
        return lambda up: induced_ok(up) and hull_ok(up)
    raise ValueError(f"{kind} is a family of maps, not of relations")


_cached_predicate = lru_cache(maxsize=256)(_predicate)


def _check_carrier(R: Poset, spec: FamilySpec):
    want = set(spec.context.carrier)
    if spec.kind is FamilyKind.G:
        if not set(spec.upper_labels) <= R.carrier <= want:
            raise CarrierMismatch(f"carrier {sorted(R.carrier)} must lie between the upper part and {sorted(want)}")
    elif R.carrier != want:
        raise CarrierMismatch(f"carrier {sorted(R.carrier)} differs from {sorted(want)}")


def is_member(R, spec: FamilySpec) -> bool:
    """Evaluate the defining predicate of ``spec`` on a relation (or, for F kinds, a map)."""
    if spec.kind in _MAP_KINDS:
        if not isinstance(R, MonotoneLowerEndMap):
            raise TypeError("F families contain monotone maps, not relations")
        if R.base.carrier != spec.context.lower:
            raise CarrierMismatch(f"base carrier {sorted(R.base.carrier)} differs from {sorted(spec.context.lower)}")
        if not R.is_monotone(spec.full_anchor):
            return False
        return spec.kind is FamilyKind.F or R.is_starred()
    _check_carrier(R, spec)
    return _cached_predicate(spec, R.labels)(R.up)


def why_not_member(R: Poset, spec: FamilySpec) -> str | None:
    """A readable reason why R is outside the family, or None if it is a member."""
    _check_carrier(R, spec)
    Y = spec.upper_labels
    kind = spec.kind
    if kind is not FamilyKind.U:
        got = induced(R, Y)
        if got != spec.full_anchor:
            return f"the relation induced on {{{', '.join(Y)}}} is {got!r}, expected {spec.full_anchor!r}"
    if kind in (FamilyKind.U, FamilyKind.M) and not is_upper_end(R, Y):
        for y in Y:
            for a in R.labels:
                if a not in Y and R.leq(y, a):
                    return f"{{{', '.join(Y)}}} is not an upper end: {y} < {a}"
    if kind in (FamilyKind.C, FamilyKind.M, FamilyKind.MSTAR):
        for x in R.labels:
            if x in Y:
                continue
            lo = [a for a in Y if R.leq(a, x)]
            hi = [b for b in Y if R.leq(x, b)]
            if lo and hi:
                return f"not convex: {x} lies between {lo[0]} and {hi[0]} but is outside {{{', '.join(Y)}}}"
    if kind in (FamilyKind.MSTAR, FamilyKind.NSTAR):
        mr = maximal_points(R)
        mq = maximal_points_of(R, Y)
        if mr != mq:
            return f"maximal points {sorted(mr)} differ from the anchor's maximal points {sorted(mq)}"
    if kind is FamilyKind.G:
        hull = convex_hull(R, Y)
        if hull != R.carrier:
            return f"convex hull of the upper part is {sorted(hull)}, not the whole carrier"
    return None


# -- enumeration ----------------------------------------------------------------


def enumerate_family(spec: FamilySpec, *, limit: int = MAX_SIZE) -> list:
    """All members of the family, generated then filtered by membership."""
    if spec.kind in _MAP_KINDS:
        return enumerate_monotone_maps(
            spec.full_anchor, spec.context.lower_part, spec.kind is FamilyKind.FSTAR, limit=limit
        )
    if spec.kind is FamilyKind.G:
        return enumerate_G(spec.full_anchor, spec.context.lower_part, limit=limit)
    labels = spec.context.carrier
    pred = _cached_predicate(spec, labels)
    return [Poset(labels, up) for up in raw_posets(len(labels), limit=limit) if pred(up)]


def _subsets(labels: tuple[str, ...]):
    for mask in range(1 << len(labels)):
        yield tuple(a for i, a in enumerate(labels) if mask >> i & 1)


def enumerate_G(Q: Poset, X: Iterable[str], *, limit: int = MAX_SIZE) -> list[Poset]:
    """Relations G on M ∪ c(Q), M ⊆ X, with G|c(Q) = Q and c(G) the convex hull of c(Q)."""
    X = tuple(X)
    common = set(X) & Q.carrier
    if common:
        raise OverlappingCarriers(f"X and the anchor carrier share {sorted(common)}")
    if len(X) + Q.n > limit:
        raise LimitExceeded(f"carrier of size {len(X) + Q.n} exceeds the limit {limit}")
    out = []
    for M in _subsets(X):
        spec = FamilySpec(FamilyKind.G, SplitContext(M, Q.labels), Q)
        labels = M + Q.labels
        pred = _cached_predicate(spec, labels)
        out.extend(Poset(labels, up) for up in raw_posets(len(labels)) if pred(up))
    return out


# -- partition into G-indexed blocks -----------------------------------------------


@dataclass
class PartitionReport:
    which: str
    anchor: Poset
    lower: tuple[str, ...]
    total: int
    blocks: list[tuple[Poset, int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        from porel.textio import format_inline

        return {
            "which": self.which,
            "Q": format_inline(self.anchor),
            "X": list(self.lower),
            "total": self.total,
            "blocks": [{"G": format_inline(G), "size": size} for G, size in self.blocks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


_PARTITIONS = {
    "c": (FamilyKind.I, FamilyKind.C),
    "mstar": (FamilyKind.NSTAR, FamilyKind.MSTAR),
}


def verify_partition(Q: Poset, X: Iterable[str], which: str = "c", *, limit: int = MAX_SIZE) -> PartitionReport:
    """Check that the blocks indexed by the G family partition the target family.

    ``which="c"``: the C_G blocks must partition I_Q(X, Y).
    ``which="mstar"``: the M*_G blocks must partition N*_Q(X, Y).
    Raises :class:`PartitionViolation` with a witness relation otherwise.
    """
    X = tuple(X)
    target_kind, block_kind = _PARTITIONS[which]
    target = set(enumerate_family(FamilySpec.of(target_kind, Q, X), limit=limit))
    seen: dict[Poset, Poset] = {}
    report = PartitionReport(which, Q, X, len(target))
    for G in enumerate_G(Q, X, limit=limit):
        rest = tuple(a for a in X if a not in G.carrier)
        block = enumerate_family(FamilySpec(block_kind, SplitContext(rest, G.labels), G), limit=limit)
        for R in block:
            if R not in target:
                raise PartitionViolation(f"{R!r} lies in the block of {G!r} but not in the target family", R)
            if R in seen:
                raise PartitionViolation(f"{R!r} lies in the blocks of both {seen[R]!r} and {G!r}", R)
            seen[R] = G
        report.blocks.append((G, len(block)))
    for R in target:
        if R not in seen:
            raise PartitionViolation(f"{R!r} lies in no block", R)
    return report
