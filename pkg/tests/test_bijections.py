import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import posets
from porel.bijections import (
    block_context,
    phi,
    phi_inverse,
    sigma,
    sigma_blockwise,
    sigma_blockwise_inverse,
    sigma_inverse,
    tau,
)
from porel.enumeration import all_posets
from porel.errors import CarrierMismatch, NotInFamily, NotMonotone
from porel.families import FamilyKind, FamilySpec, MonotoneLowerEndMap, enumerate_family, is_member
from porel.poset import (
    SplitContext,
    antichain,
    chain,
    convex_hull,
    direct_sum,
    down_set,
    dual,
    empty,
    induced,
    is_convex,
    is_upper_end,
    lambda_poset,
    singleton,
    up_set,
    validate,
)
from porel.verify import labeled_anchors, x_labels

K = FamilyKind
A1 = singleton("z")
A2 = antichain(["z1", "z2"])


def splits(labels):
    labels = tuple(labels)
    for mask in range(1 << len(labels)):
        upper = tuple(a for i, a in enumerate(labels) if mask >> i & 1)
        lower = tuple(a for a in labels if a not in upper)
        yield lower, upper


# -- phi ------------------------------------------------------------------------------


def test_phi_examples():
    for Q in (A2, chain(["z1", "z2"]), lambda_poset("z1", "z2", "z3")):
        f = MonotoneLowerEndMap.from_dict(empty(), {z: [] for z in Q.labels})
        assert phi(f, Q) == Q
    f = MonotoneLowerEndMap.from_dict(singleton("x"), {"z": ["x"]})
    assert phi(f, A1) == chain(["x", "z"])
    f = MonotoneLowerEndMap.from_dict(singleton("x"), {"z1": ["x"], "z2": []})
    R = phi(f, A2)
    assert R == validate(["x", "z1", "z2"], [("x", "z1")])
    assert is_upper_end(R, ["z1", "z2"])


def test_phi_rejects_non_monotone_map():
    f = MonotoneLowerEndMap.from_dict(singleton("x"), {"z1": ["x"], "z2": []})
    with pytest.raises(NotMonotone):
        phi(f, chain(["z1", "z2"]))


def test_phi_inverse_examples():
    f = phi_inverse(A2, SplitContext([], A2.labels))
    assert f.base == empty() and f.as_dict() == {"z1": frozenset(), "z2": frozenset()}
    f = phi_inverse(chain(["x", "z"]), SplitContext(["x"], ["z"]))
    assert f["z"] == {"x"} and f.is_starred()


def test_phi_inverse_rejects_non_upper_end():
    R = chain(["z", "x"])
    with pytest.raises(NotInFamily, match="upper end"):
        phi_inverse(R, SplitContext(["x"], ["z"]))


def test_phi_round_trips_small():
    for Q in labeled_anchors(2):
        for m in range(3):
            X = x_labels(m)
            maps = enumerate_family(FamilySpec.of(K.F, Q, X))
            image = {phi(f, Q) for f in maps}
            assert image == set(enumerate_family(FamilySpec.of(K.M, Q, X)))
            for f in maps:
                assert phi_inverse(phi(f, Q), SplitContext(X, Q.labels)) == f
            starred = {phi(f, Q) for f in enumerate_family(FamilySpec.of(K.FSTAR, Q, X))}
            assert starred == set(enumerate_family(FamilySpec.of(K.MSTAR, Q, X)))
            for R in starred:
                assert phi_inverse(R, SplitContext(X, Q.labels)).is_starred()


# -- tau ------------------------------------------------------------------------------------


def test_tau_examples():
    ctx = SplitContext(["x"], ["z"])
    assert tau(chain(["x", "z"]), ctx) == antichain(["x", "z"])
    assert tau(antichain(["x", "z"]), ctx) == chain(["x", "z"])
    L = lambda_poset("a", "b", "c")
    assert tau(L, SplitContext([], L.labels)) == dual(L)


def test_tau_needs_upper_end():
    with pytest.raises(NotInFamily):
        tau(chain(["z", "x"]), SplitContext(["x"], ["z"]))
    with pytest.raises(CarrierMismatch):
        tau(chain(["x", "z"]), SplitContext(["x"], ["z"], "y"))


def test_tau_involution_and_convex_addendum():
    for n in range(4):
        labels = ["a", "b", "c"][:n]
        for R in all_posets(labels):
            for X, Y in splits(labels):
                ctx = SplitContext(X, Y)
                if not is_upper_end(R, Y):
                    continue
                T = tau(R, ctx)
                assert is_upper_end(T, Y)
                assert tau(T, ctx) == R
                for _, Z in splits(Y):
                    if is_convex(R, Z):
                        assert is_convex(T, Z)
                        assert induced(T, Z) == dual(induced(R, Z))


# -- upper ends lying below a convex part ---------------------------------------------------


def test_upper_end_below_convex_part_is_in_M():
    for n in range(5):
        labels = ["a", "b", "c", "d"][:n]
        for R in all_posets(labels):
            for X, Y in splits(labels):
                if not is_upper_end(R, Y):
                    continue
                for _, Z in splits(Y):
                    if not is_convex(R, Z) or not set(Y) <= down_set(R, Z):
                        continue
                    rest = X + tuple(a for a in Y if a not in Z)
                    spec = FamilySpec(K.M, SplitContext(rest, Z), induced(R, Z))
                    assert is_member(R, spec)


# -- sigma -------------------------------------------------------------------------------------


def test_sigma_without_lower_part():
    for Q in labeled_anchors(3):
        R = direct_sum(Q, singleton("y"))
        ctx = SplitContext([], Q.labels, "y")
        assert sigma(R, ctx) == dual(Q)
        assert sigma_inverse(dual(Q), ctx) == R


def test_sigma_one_point_example():
    R = validate(["x", "z", "y"], [("x", "y")])
    ctx = SplitContext(["x"], ["z"], "y")
    out = sigma(R, ctx, check=True)
    assert out == chain(["x", "z"]) and out.labels == ("x", "z")


def test_sigma_inverse_one_point_example():
    ctx = SplitContext(["x"], ["z"], "y")
    R = sigma_inverse(chain(["x", "z"]), ctx, check=True)
    assert R == validate(["x", "z", "y"], [("x", "y")])
    assert R.labels[-1] == "y"


def test_sigma_rejects_max_condition_failure():
    R = validate(["x", "z", "y"], [("x", "y"), ("z", "x"), ("z", "y")])
    with pytest.raises(NotInFamily):
        sigma(R, SplitContext(["x"], ["z"], "y"))
    R = validate(["x", "z", "y"], [("z", "x")])
    with pytest.raises(NotInFamily, match="maximal points"):
        sigma(R, SplitContext(["x"], ["z"], "y"))


def test_sigma_needs_apex():
    with pytest.raises(CarrierMismatch):
        sigma(A2, SplitContext([], A2.labels))


def test_sigma_image_count_for_two_point_antichain():
    ctx = SplitContext(["x"], A2.labels, "y")
    dom = enumerate_family(FamilySpec.of(K.MSTAR, A2, ["x"], "y"))
    assert len({sigma(R, ctx) for R in dom}) == 7


def test_sigma_round_trips_small():
    for Q in labeled_anchors(2):
        for m in range(3):
            X = x_labels(m)
            ctx = SplitContext(X, Q.labels, "y")
            dom = enumerate_family(FamilySpec.of(K.MSTAR, Q, X, "y"))
            cod = set(enumerate_family(FamilySpec.of(K.C, dual(Q), X)))
            image = set()
            for R in dom:
                T = sigma(R, ctx, check=True)
                assert T.carrier == set(X) | Q.carrier
                # the part split off above is exactly the up-set of Z in the image
                assert up_set(T, Q.labels) == set(X + Q.labels) - down_set(R, "y")
                assert sigma_inverse(T, ctx, check=True) == R
                image.add(T)
            assert image == cod
            for T in cod:
                assert sigma(sigma_inverse(T, ctx), ctx) == T


def test_blockwise_sigma_examples():
    # z1 < x < z2 is not convex, so the block is the hull {x, z1, z2}
    Q = chain(["z1", "z2"])
    R = validate(["x", "z1", "z2", "y"], [("z1", "x"), ("x", "z2"), ("z1", "z2")])
    ctx = SplitContext(["x"], Q.labels, "y")
    assert set(block_context(R, ctx).upper_part) == {"x", "z1", "z2"}
    T = sigma_blockwise(R, ctx, check=True)
    assert T == dual(induced(R, ["x", "z1", "z2"]))
    assert sigma_blockwise_inverse(T, ctx) == R
    with pytest.raises(NotInFamily):
        sigma(R, ctx)


@given(st.integers(0, 2), st.integers(0, 2), st.data())
def test_sigma_relabeling_of_apex(k, m, data):
    Q = data.draw(st.sampled_from(labeled_anchors(k)))
    X = x_labels(m)
    dom = enumerate_family(FamilySpec.of(K.MSTAR, Q, X, "y"))
    R = data.draw(st.sampled_from(dom))
    renamed = R.relabel({"y": "w"})
    assert sigma(renamed, SplitContext(X, Q.labels, "w")) == sigma(R, SplitContext(X, Q.labels, "y"))


@given(posets(max_size=5))
def test_hull_context_contains_upper_part(R):
    upper = R.labels[: R.n // 2]
    ctx = SplitContext(R.labels[R.n // 2 :], upper)
    b = block_context(R, ctx)
    assert set(b.upper_part) == convex_hull(R, upper)
    assert set(b.lower_part) | set(b.upper_part) == R.carrier
