"""Brute-force reference implementations over plain sets of pairs.

Nothing here uses the bitmask machinery of the package; these are the
independent sides of the checks.
"""
from itertools import chain, combinations, permutations, product


def subsets(items):
    items = list(items)
    return [frozenset(c) for c in chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))]


def relations(carrier):
    """All partial orders on carrier as frozensets of pairs (diagonal included)."""
    carrier = list(carrier)
    off = [(a, b) for a in carrier for b in carrier if a != b]
    out = []
    for bits in product((0, 1), repeat=len(off)):
        S = {p for p, b in zip(off, bits) if b}
        if any((b, a) in S for a, b in S):
            continue
        if any((a, d) not in S for a, b in S for c, d in S if b == c and a != d):
            continue
        out.append(frozenset(S | {(a, a) for a in carrier}))
    return out


def down(pairs, M):
    return frozenset(x for x, m in pairs if m in M)


def up(pairs, M):
    return frozenset(x for m, x in pairs if m in M)


def restrict(pairs, M):
    return frozenset((a, b) for a, b in pairs if a in M and b in M)


def is_convex(pairs, carrier, M):
    return all(x in M for a in M for b in M for x in carrier if (a, x) in pairs and (x, b) in pairs)


def hull_by_intersection(pairs, carrier, M):
    out = frozenset(carrier)
    for S in subsets(carrier):
        if M <= S and is_convex(pairs, carrier, S):
            out &= S
    return out


def maximal(pairs, M):
    return frozenset(m for m in M if not any(a == m and b != m and b in M for a, b in pairs))


def is_lower_end(pairs, carrier, L):
    return all(x in L for x in carrier for y in L if (x, y) in pairs)


def is_upper_end(pairs, carrier, U):
    return all(x in U for x in carrier for y in U if (y, x) in pairs)


def isomorphic(p1, p2, roles1, roles2):
    """Is there a bijection mapping each role class of p1 onto the matching class of p2 and p1 onto p2?"""
    if [len(r) for r in roles1] != [len(r) for r in roles2]:
        return False
    for choice in product(*(permutations(r) for r in roles2)):
        m = {}
        for src, dst in zip(roles1, choice):
            m.update(zip(src, dst))
        if frozenset((m[a], m[b]) for a, b in p1) == p2:
            return True
    return False
