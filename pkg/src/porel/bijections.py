"""The constructive maps: phi (monotone map -> relation), tau and sigma.

All maps validate their input family before doing anything and build
their output through :func:`porel.poset.from_rows`, so a construction
bug surfaces as an exception instead of a plausible-looking relation.
"""
from __future__ import annotations

from porel.errors import CarrierMismatch, NotInFamily, OverlappingCarriers
from porel.families import FamilyKind, FamilySpec, MonotoneLowerEndMap, why_not_member
from porel.poset import (
    Poset,
    SplitContext,
    convex_hull,
    down_set,
    dual,
    from_rows,
    induced,
    is_upper_end_mask,
    up_set,
    validate,
)


def _require(R: Poset, spec: FamilySpec, what: str):
    reason = why_not_member(R, spec)
    if reason is not None:
        raise NotInFamily(f"{what}: {reason}", reason)


def phi(f: MonotoneLowerEndMap, Q: Poset) -> Poset:
    """Relation S(f) ∪ Q ∪ {(x, y) : x ∈ f(y)} on X ∪ Y, X before Y."""
    f.check_monotone(Q)
    common = f.base.carrier & Q.carrier
    if common:
        raise OverlappingCarriers(f"base and anchor share {sorted(common)}")
    cross = {(x, y) for y, low in f.assignment for x in low}
    return validate(f.base.labels + Q.labels, f.base.strict_pairs | Q.strict_pairs | cross)


def phi_inverse(R: Poset, context: SplitContext) -> MonotoneLowerEndMap:
    """Recover the monotone map: base R|X and y -> (down-set of y) minus the upper part.

    With an apex in ``context`` the upper part includes it.
    """
    upper = context.upper_part + (() if context.apex is None else (context.apex,))
    spec = FamilySpec(FamilyKind.M, SplitContext(context.lower_part, upper), induced(R, upper))
    _require(R, spec, "phi_inverse needs the upper part to be a convex upper end")
    lower = tuple(a for a in R.labels if a in context.lower)
    ys = set(upper)
    return MonotoneLowerEndMap(
        induced(R, lower), tuple((y, down_set(R, y) - ys) for y in upper)
    )


def tau(R: Poset, context: SplitContext) -> Poset:
    """Dualize R on X and on Y and complement the X-to-Y pairs.

    X is ``context.lower_part``, Y is ``context.upper_part``; Y must be an
    upper end of R.  The result keeps R's element order.
    """
    if context.apex is not None:
        raise CarrierMismatch("tau takes a two-part split without an apex")
    if R.carrier != context.lower | context.upper:
        raise CarrierMismatch(f"carrier {sorted(R.carrier)} is not the union of the split")
    xmask = R.mask(context.lower_part)
    ymask = R.mask(context.upper_part)
    if not is_upper_end_mask(R, ymask):
        raise NotInFamily(f"{{{', '.join(context.upper_part)}}} is not an upper end", "upper end")
    down = R.down
    rows = []
    for i in range(R.n):
        if xmask >> i & 1:
            rows.append(down[i] & xmask | ymask & ~R.up[i])
        else:
            rows.append(down[i] & ymask)
    return from_rows(R.labels, rows)


def _apex_context(context: SplitContext) -> str:
    if context.apex is None:
        raise CarrierMismatch("sigma needs a context with an apex")
    return context.apex


def sigma(R: Poset, context: SplitContext, check: bool = False) -> Poset:
    """Drop the apex y, split at the down-set of y and apply tau.

    ``R`` must lie in M*_{Q+A_y}(X, Z ∪ {y}) for Q = R|Z, where X, Z, y are
    the lower part, upper part and apex of ``context``.  The image lies in
    C_{Q^d}(X, Z); ``check=True`` re-verifies that.
    """
    y = _apex_context(context)
    Q = induced(R, context.upper_part)
    _require(R, FamilySpec(FamilyKind.MSTAR, context, Q), "sigma")
    W = tuple(a for a in R.labels if a != y)
    below = down_set(R, y)
    split = SplitContext(tuple(a for a in W if a in below), tuple(a for a in W if a not in below))
    T = tau(induced(R, W), split)
    if check:
        out = FamilySpec(FamilyKind.C, SplitContext(context.lower_part, context.upper_part), dual(Q))
        _require(T, out, "sigma produced a relation outside the codomain")
    return T


def sigma_inverse(Rp: Poset, context: SplitContext, check: bool = False) -> Poset:
    """Inverse of :func:`sigma`, built directly: the apex goes last in the carrier."""
    y = _apex_context(context)
    if y in Rp.carrier:
        raise CarrierMismatch(f"apex {y!r} already lies in the carrier")
    plain = SplitContext(context.lower_part, context.upper_part)
    Qd = induced(Rp, context.upper_part)
    _require(Rp, FamilySpec(FamilyKind.C, plain, Qd), "sigma_inverse")
    above = up_set(Rp, context.upper_part)
    lower = tuple(a for a in Rp.labels if a not in above)
    T = tau(Rp, SplitContext(lower, tuple(a for a in Rp.labels if a in above)))
    ybit = 1 << T.n
    lmask = T.mask(lower)
    rows = [row | ybit if lmask >> i & 1 else row for i, row in enumerate(T.up)]
    R = from_rows(T.labels + (y,), rows + [ybit])
    if check:
        _require(R, FamilySpec(FamilyKind.MSTAR, context, dual(Qd)), "sigma_inverse produced a relation outside the codomain")
    return R


def block_context(R: Poset, context: SplitContext) -> SplitContext:
    """Context of the partition block containing R: upper part = convex hull of the upper part."""
    hull = convex_hull(R, context.upper_part)
    return SplitContext(
        tuple(a for a in context.lower_part if a not in hull),
        tuple(a for a in R.labels if a in hull),
        context.apex,
    )


def sigma_blockwise(R: Poset, context: SplitContext, check: bool = False) -> Poset:
    """Bijection N*_{Q+A_y}(X, Z ∪ {y}) -> I_{Q^d}(X, Z), one partition block at a time.

    Z need not be convex in R: sigma is applied with the convex hull of Z
    as the upper part, which is the block R belongs to.
    """
    _apex_context(context)
    Q = induced(R, context.upper_part)
    _require(R, FamilySpec(FamilyKind.NSTAR, context, Q), "sigma_blockwise")
    return sigma(R, block_context(R, context), check=check)


def sigma_blockwise_inverse(Rp: Poset, context: SplitContext, check: bool = False) -> Poset:
    _apex_context(context)
    plain = SplitContext(context.lower_part, context.upper_part)
    _require(Rp, FamilySpec(FamilyKind.I, plain, induced(Rp, context.upper_part)), "sigma_blockwise_inverse")
    return sigma_inverse(Rp, block_context(Rp, context), check=check)
