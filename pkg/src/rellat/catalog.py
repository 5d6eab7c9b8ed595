"""Standard small lattices and an exhaustive generator of all small lattices."""
from __future__ import annotations

from itertools import permutations, product

import numpy as np

from .errors import NotALattice
from .order_core import FiniteLattice, build_lattice, transitive_closure


def chain(n: int) -> FiniteLattice:
    return build_lattice([str(i) for i in range(n)], [(str(i), str(i + 1)) for i in range(n - 1)])


def boolean(n: int) -> FiniteLattice:
    """Subsets of ``{0..n-1}``; labels are bit strings."""
    labels = [format(m, f"0{n}b") if n else "e" for m in range(2 ** n)]
    leq = np.array([[a & ~b == 0 for b in range(2 ** n)] for a in range(2 ** n)])
    return FiniteLattice.from_leq(labels, leq)


def m3() -> FiniteLattice:
    return build_lattice(["0", "a", "b", "c", "1"],
                         [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")])


def n5() -> FiniteLattice:
    return build_lattice(["0", "a", "b", "c", "1"],
                         [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")])


def canonical_form(L: FiniteLattice) -> tuple:
    """Lexicographically least order matrix over all relabelings.

    Brute force over permutations; meant for lattices of at most 8 elements.
    """
    n = L.n
    best = None
    for perm in permutations(range(n)):
        p = np.array(perm)
        key = L.leq[np.ix_(p, p)].tobytes()
        if best is None or key < best:
            best = key
    return n, best


def all_lattices(n: int) -> list[FiniteLattice]:
    """One representative of every isomorphism type of n-element lattice.

    Enumerates transitive antisymmetric relations on the ``n - 2`` middle
    elements, adds bounds, keeps lattices and drops isomorphic duplicates.
    """
    if n == 1:
        return [chain(1)]
    if n == 2:
        return [chain(2)]
    k = n - 2
    pairs = [(i, j) for i in range(k) for j in range(k) if i != j]
    seen = {}
    for bits in product((False, True), repeat=len(pairs)):
        adj = np.zeros((k, k), dtype=bool)
        for (i, j), b in zip(pairs, bits):
            adj[i, j] = b
        if (adj & adj.T).any():
            continue
        if not (transitive_closure(adj) == (adj | np.eye(k, dtype=bool))).all():
            continue
        leq = np.zeros((n, n), dtype=bool)
        leq[0, :] = True
        leq[:, n - 1] = True
        leq[1:n - 1, 1:n - 1] = adj | np.eye(k, dtype=bool)
        try:
            L = FiniteLattice.from_leq([str(i) for i in range(n)], leq)
        except NotALattice:
            continue
        key = canonical_form(L)
        seen.setdefault(key, L)
    return list(seen.values())


def small_lattices(max_n: int) -> list[FiniteLattice]:
    out = []
    for n in range(1, max_n + 1):
        out.extend(all_lattices(n))
    return out
