"""Exhaustive checks of the counting identity and of the sigma bijection.

``theorem_count_check`` counts both sides by independent enumeration and
never touches the bijections; ``check_sigma`` then verifies that sigma
realises the equality block by block.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterator

from porel.bijections import block_context, sigma_blockwise, sigma_blockwise_inverse
from porel.enumeration import MAX_SIZE, BlockRow, CountReport, all_posets, count_classes
from porel.errors import OverlappingCarriers, PartitionViolation
from porel.families import FamilyKind, FamilySpec, enumerate_G, enumerate_family, is_member
from porel.poset import (
    Poset,
    SplitContext,
    convex_hull,
    dual,
    induced,
    maximal_points,
)
from porel.textio import format_inline


def z_labels(k: int) -> tuple[str, ...]:
    return tuple(f"z{i}" for i in range(1, k + 1))


def x_labels(m: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, m + 1))


def labeled_anchors(k: int) -> list[Poset]:
    """Every labeled relation on z1..zk."""
    return list(all_posets(z_labels(k)))


def sweep(max_z: int, max_x: int) -> Iterator[tuple[Poset, tuple[str, ...]]]:
    for k in range(max_z + 1):
        for Q in labeled_anchors(k):
            for m in range(max_x + 1):
                yield Q, x_labels(m)


def _lhs_spec(Q: Poset, X, apex: str) -> FamilySpec:
    return FamilySpec(FamilyKind.NSTAR, SplitContext(tuple(X), Q.labels, apex), Q)


def _rhs_spec(Q: Poset, X) -> FamilySpec:
    return FamilySpec.of(FamilyKind.I, dual(Q), X)


def _block_of(R: Poset, Z) -> Poset:
    return induced(R, convex_hull(R, Z))


def theorem_count_check(
    Q: Poset,
    X,
    apex: str = "y",
    *,
    classes: bool = True,
    blocks: bool = True,
    limit: int = MAX_SIZE,
) -> CountReport:
    """Count N*_{Q+A_y}(X, Z ∪ {y}) and I_{Q^d}(X, Z) by enumeration.

    With ``classes`` the role-preserving isomorphism classes of both sides
    are tallied (roles: X, Z, apex).  With ``blocks`` both sides are split
    along the partition indexed by G_Q(X).
    """
    X = tuple(X)
    if apex in X or apex in Q.carrier:
        raise OverlappingCarriers(f"apex {apex!r} must lie outside X and Z")
    lhs = enumerate_family(_lhs_spec(Q, X, apex), limit=limit)
    rhs = enumerate_family(_rhs_spec(Q, X), limit=limit)
    report = CountReport(len(lhs), len(rhs), params={"Q": format_inline(Q), "X": list(X), "apex": apex})
    if classes:
        report.lhs_classes = count_classes(lhs, [X, Q.labels, [apex]])
        report.rhs_classes = count_classes(rhs, [X, Q.labels])
    if blocks:
        rows = {G: BlockRow(G, 0, 0) for G in enumerate_G(Q, X, limit=limit)}
        for R in lhs:
            # the apex is incomparable to Z, so it never enters the hull
            G = _block_of(R, Q.labels)
            if G not in rows:
                raise PartitionViolation(f"{R!r} falls into no block", R)
            rows[G].lhs += 1
        for R in rhs:
            G = dual(_block_of(R, Q.labels))
            if G not in rows:
                raise PartitionViolation(f"{R!r} falls into no block", R)
            rows[G].rhs += 1
        report.block_table = list(rows.values())
    report.check()
    return report


@dataclass
class SigmaCheck:
    anchor: Poset
    lower: tuple[str, ...]
    domain: int = 0
    codomain: int = 0
    blocks: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_sigma(Q: Poset, X, apex: str = "y", *, limit: int = MAX_SIZE) -> SigmaCheck:
    """Verify that blockwise sigma is a bijection between the two enumerated sides.

    Per element R of the domain: R lies in the M* family of its block,
    sigma(R) lies in the C family of the dual block, and sigma_inverse
    brings it back.  Globally: sigma is injective and its image is exactly
    the independently enumerated codomain.
    """
    X = tuple(X)
    domain = enumerate_family(_lhs_spec(Q, X, apex), limit=limit)
    codomain = set(enumerate_family(_rhs_spec(Q, X), limit=limit))
    ctx = SplitContext(X, Q.labels, apex)
    out = SigmaCheck(Q, X, len(domain), len(codomain))
    image: dict[Poset, Poset] = {}
    seen_blocks = set()
    for R in domain:
        bctx = block_context(R, ctx)
        G = induced(R, bctx.upper_part)
        seen_blocks.add(G)
        if not is_member(R, FamilySpec(FamilyKind.MSTAR, bctx, G)):
            out.failures.append(f"{R!r} is not in the M* family of its block {G!r}")
            continue
        T = sigma_blockwise(R, ctx)
        if not is_member(T, FamilySpec(FamilyKind.C, SplitContext(bctx.lower_part, bctx.upper_part), dual(G))):
            out.failures.append(f"sigma({R!r}) = {T!r} is not in the C family of the dual block")
        if T in image:
            out.failures.append(f"sigma is not injective: {R!r} and {image[T]!r} both map to {T!r}")
        image[T] = R
        if sigma_blockwise_inverse(T, ctx) != R:
            out.failures.append(f"sigma_inverse(sigma({R!r})) differs from the input")
    missing = codomain - set(image)
    extra = set(image) - codomain
    if missing:
        out.failures.append(f"{len(missing)} codomain members are not hit, e.g. {next(iter(missing))!r}")
    if extra:
        out.failures.append(f"{len(extra)} images lie outside the codomain, e.g. {next(iter(extra))!r}")
    out.blocks = len(seen_blocks)
    return out


def erne_counts(m: int, nx: int, *, limit: int = MAX_SIZE) -> tuple[int, int]:
    """Both sides of the antichain special case, counted straight from the definitions.

    Left: relations on X ∪ Z in which Z (|Z| = m) is an antichain.
    Right: relations on X ∪ Z ∪ {y} whose maximal points are exactly Z ∪ {y}.
    """
    X, Z = x_labels(nx), z_labels(m)
    left = sum(1 for R in all_posets(X + Z, limit=limit) if not any(R.leq(a, b) for a in Z for b in Z if a != b))
    top = frozenset(Z) | {"y"}
    right = sum(1 for R in all_posets(X + Z + ("y",), limit=limit) if maximal_points(R) == top)
    return left, right


def theorem_sweep(max_z: int, max_x: int, **kwargs) -> Iterator[CountReport]:
    for Q, X in sweep(max_z, max_x):
        start = time.perf_counter()
        report = theorem_count_check(Q, X, **kwargs)
        report.params["seconds"] = round(time.perf_counter() - start, 4)
        yield report

