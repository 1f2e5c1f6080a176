"""Finite partial orders, monotone lower-end maps, and an exhaustive check of a
counting identity between two families of relations (with an explicit bijection).
"""
from porel.poset import (
    Element,
    Poset,
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
    lambda_poset,
    lower_ends,
    maximal_points,
    maximal_points_of,
    minimal_points,
    ordinal_sum,
    singleton,
    transitive_hull,
    up_set,
    validate,
    vee_poset,
)

__version__ = "0.1.0"
