"""Slow, definition-level reference implementations used only by the tests.

Nothing here shares code with the library beyond reading a lattice's
tables or a frame's relation sets.
"""
from __future__ import annotations

from collections import deque
from itertools import chain, combinations, permutations, product
from math import comb


def subsets(xs):
    xs = list(xs)
    return [frozenset(c) for r in range(len(xs) + 1) for c in combinations(xs, r)]


# ---------------------------------------------------------------- lattices

def is_hom(L, M, f) -> bool:
    return all(f[L.meet[x, y]] == M.meet[f[x], f[y]] and f[L.join[x, y]] == M.join[f[x], f[y]]
               for x in range(L.n) for y in range(L.n))


def brute_embedding(L, M, bound_preserving=False):
    """First injective homomorphism by plain permutation scan (small M only)."""
    for img in permutations(range(M.n), L.n):
        if bound_preserving and (img[L.bottom] != M.bottom or img[L.top] != M.top):
            continue
        if is_hom(L, M, img):
            return img
    return None


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def congruences(L):
    """Every compatible equivalence relation, as a frozenset of related pairs."""
    out = []
    for part in set_partitions(range(L.n)):
        block = {x: i for i, b in enumerate(part) for x in b}
        ok = all(block[L.meet[x, z]] == block[L.meet[y, z]] and block[L.join[x, z]] == block[L.join[y, z]]
                 for b in part for x in b for y in b for z in range(L.n))
        if ok:
            out.append(frozenset((x, y) for b in part for x in b for y in b))
    return out


def brute_si(L) -> bool:
    if L.n < 2:
        return False
    diag = frozenset((x, x) for x in range(L.n))
    nontrivial = [c for c in congruences(L) if c != diag]
    return frozenset.intersection(*nontrivial) != diag


def jis_by_definition(L):
    """x ≠ ⊥ with x ∉ {join(y, z) | y, z < x}."""
    out = []
    for x in range(L.n):
        below = [y for y in range(L.n) if L.leq[y, x] and y != x]
        if x != L.bottom and all(L.join[y, z] != x for y in below for z in below):
            out.append(x)
    return out


# ---------------------------------------------------------------- frames

def path_reach(F, x, alpha):
    """Worlds reachable from x by BFS over edges labelled in alpha."""
    rel = F.relations()
    seen, todo = {x}, deque([x])
    while todo:
        u = todo.popleft()
        for a in alpha:
            for (p, q) in rel[a]:
                if p == u and q not in seen:
                    seen.add(q)
                    todo.append(q)
    return seen


def frame_closed_sets(F):
    """All (α, Y) with Y closed under α-paths, scanned over every subset."""
    out = []
    for alpha in subsets(F.actions):
        reach = {x: path_reach(F, x, alpha) for x in F.worlds}
        for Y in subsets(F.worlds):
            if all(x in Y for x in F.worlds if reach[x] & Y):
                out.append((alpha, Y))
    return out


def space_closed_sets(points, attrs, delta):
    """All (α, Y) of ``A ∪ X`` with ``y ∈ Y, δ(x,y) ⊆ α ⇒ x ∈ Y``."""
    out = []
    for alpha in subsets(attrs):
        for Y in subsets(points):
            if all(x in Y for y in Y for x in points if delta(x, y) <= alpha):
                out.append((alpha, Y))
    return out


def relational_count_formula(D: int, k: int) -> int:
    """α-closed sets are unions of α-classes, and there are D^(k-|α|) classes."""
    return sum(comb(k, r) * 2 ** (D ** (k - r)) for r in range(k + 1))


def pairwise_complete(points, attrs, delta) -> bool:
    """Every split ``δ(f, g) ⊆ α ∪ β`` has an interpolant, over all α and β."""
    for f in points:
        for g in points:
            d = delta(f, g)
            for alpha in subsets(attrs):
                for beta in subsets(attrs):
                    if d <= alpha | beta and not any(delta(f, h) <= alpha and delta(h, g) <= beta
                                                     for h in points):
                        return False
    return True


def continuous(points, attrs, delta, Y) -> bool:
    """``⋂_{g ∈ Y} δ(f, g) = ∅ ⇒ f ∈ Y``; the empty intersection is all of A."""
    for f in points:
        common = frozenset(attrs)
        for g in Y:
            common &= delta(f, g)
        if not common and f not in Y:
            return False
    return True


def hamming(f, g, attrs):
    return frozenset(a for a, x, y in zip(attrs, f, g) if x != y)


def all_functions(D, k):
    return list(product(range(D), repeat=k))


def flatten(xss):
    return list(chain.from_iterable(xss))
