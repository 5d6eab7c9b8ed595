"""Finite lattices, Moore families, join-irreducibles and OD-graphs.

Elements of a :class:`FiniteLattice` are identified by their index
``0..n-1``; labels are arbitrary hashables used only for lookup and I/O.
The order is kept as a dense boolean matrix ``leq[x, y] == (x <= y)`` and
meet/join as integer tables, which is the simplest correct choice for
lattices of up to a few thousand elements.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import (
    InvalidMooreFamily,
    MethodDisagreement,
    NotACover,
    NotALattice,
    NotAMorphism,
    NotAnEmbedding,
    NotAPoset,
    NotBoundPreserving,
    NotDClosed,
    NotJoinIrreducible,
)


@dataclass(frozen=True)
class Verdict:
    """A yes/no answer carrying a witness (or counterexample)."""

    ok: bool
    witness: object = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def transitive_closure(adj: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure of a square boolean matrix (Warshall)."""
    r = np.array(adj, dtype=bool, copy=True)
    np.fill_diagonal(r, True)
    for k in range(len(r)):
        r |= r[:, k, None] & r[None, k, :]
    return r


def _readonly(a):
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


def _bound_table(leq: np.ndarray, upper: bool) -> np.ndarray:
    """Least upper (or greatest lower) bound table, or raise NotALattice."""
    rel = leq if upper else leq.T
    n = len(rel)
    above = rel.sum(axis=1)
    table = np.empty((n, n), dtype=np.intp)
    rows = np.arange(n)
    for x in range(n):
        ubs = rel[x][None, :] & rel
        cand = np.where(ubs, above[None, :], -1).argmax(axis=1)
        ok = ubs[rows, cand] & ~(ubs & ~rel[cand]).any(axis=1)
        if not ok.all():
            y = int(np.flatnonzero(~ok)[0])
            kind = "join" if upper else "meet"
            raise NotALattice(f"elements {x} and {y} have no {kind}")
        table[x] = cand
    return table


class FiniteLattice:
    """An explicit finite lattice.

    ``parent_index`` optionally records, for a sublattice or quotient, the
    index of each element inside the lattice it was cut out of.
    """

    def __init__(self, labels: Sequence[Hashable], leq, meet, join, parent_index=None):
        self.labels = tuple(labels)
        self.leq = _readonly(np.asarray(leq, dtype=bool))
        self.meet = _readonly(np.asarray(meet, dtype=np.intp))
        self.join = _readonly(np.asarray(join, dtype=np.intp))
        self.parent_index = None if parent_index is None else tuple(int(i) for i in parent_index)
        n = len(self.labels)
        if self.leq.shape != (n, n):
            raise ValueError("order matrix does not match the number of labels")
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != n:
            raise ValueError("duplicate labels")
        if n == 0:
            raise NotALattice("a lattice has at least one element")
        self.bottom = int(np.flatnonzero(self.leq.all(axis=1))[0])
        self.top = int(np.flatnonzero(self.leq.all(axis=0))[0])

    @classmethod
    def from_leq(cls, labels, leq, parent_index=None) -> "FiniteLattice":
        """Build meet/join tables from a partial order matrix."""
        leq = np.asarray(leq, dtype=bool)
        n = len(leq)
        if n == 0:
            raise NotALattice("a lattice has at least one element")
        if not leq.diagonal().all():
            raise NotAPoset("order is not reflexive")
        sym = leq & leq.T
        np.fill_diagonal(sym, False)
        if sym.any():
            x, y = np.argwhere(sym)[0]
            raise NotAPoset(f"cycle between elements {x} and {y}")
        if ((leq.astype(np.int64) @ leq.astype(np.int64) > 0) & ~leq).any():
            raise NotAPoset("order is not transitive")
        join = _bound_table(leq, upper=True)
        meet = _bound_table(leq, upper=False)
        return cls(labels, leq, meet, join, parent_index)

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"FiniteLattice(n={len(self)})"

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        return self._index[label]

    def label(self, i: int):
        return self.labels[i]

    def le(self, x: int, y: int) -> bool:
        return bool(self.leq[x, y])

    def join_all(self, xs: Iterable[int]) -> int:
        acc = self.bottom
        for x in xs:
            acc = int(self.join[acc, x])
        return acc

    def meet_all(self, xs: Iterable[int]) -> int:
        acc = self.top
        for x in xs:
            acc = int(self.meet[acc, x])
        return acc

    @cached_property
    def covers(self) -> np.ndarray:
        """``covers[x, y]`` iff y covers x."""
        lt = self.leq.copy()
        np.fill_diagonal(lt, False)
        between = (lt.astype(np.int64) @ lt.astype(np.int64)) > 0
        return _readonly(lt & ~between)

    def lower_covers(self, x: int) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.covers[:, x])]

    def upper_covers(self, x: int) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.covers[x, :])]

    def down(self, x: int) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.leq[:, x])]

    def up(self, x: int) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.leq[x, :])]

    @cached_property
    def jis(self) -> tuple[int, ...]:
        """Join-irreducible elements: exactly one lower cover."""
        counts = self.covers.sum(axis=0)
        return tuple(int(i) for i in np.flatnonzero(counts == 1))

    @cached_property
    def lower_cover_of(self) -> dict[int, int]:
        return {j: self.lower_covers(j)[0] for j in self.jis}

    def check_axioms(self) -> None:
        """Assert the table invariants; used by tests and after parsing."""
        n = self.n
        idx = np.arange(n)
        leq = self.leq
        assert leq[idx, idx].all()
        for x in range(n):
            ubs = leq[x][None, :] & leq
            # join[x, y] is an upper bound below every upper bound
            assert ubs[idx, self.join[x]].all()
            assert (~ubs | leq[self.join[x]]).all()
            lbs = leq[:, x][None, :] & leq.T
            assert lbs[idx, self.meet[x]].all()
            assert (~lbs | leq.T[self.meet[x]]).all()
        assert (self.meet[idx[:, None], self.join] == idx[:, None]).all()
        assert (self.join[idx[:, None], self.meet] == idx[:, None]).all()

    def sublattice(self, elements: Iterable[int]) -> "FiniteLattice":
        """Induced sublattice on a meet- and join-closed subset."""
        elems = sorted(set(int(e) for e in elements))
        pos = {e: i for i, e in enumerate(elems)}
        sub = np.array(elems)
        try:
            meet = np.vectorize(pos.__getitem__, otypes=[np.intp])(self.meet[np.ix_(sub, sub)])
            join = np.vectorize(pos.__getitem__, otypes=[np.intp])(self.join[np.ix_(sub, sub)])
        except KeyError as exc:
            raise NotALattice("subset is not closed under meet and join") from exc
        return FiniteLattice([self.labels[e] for e in elems], self.leq[np.ix_(sub, sub)],
                             meet, join, parent_index=elems)

    def relabel(self, labels) -> "FiniteLattice":
        return FiniteLattice(labels, self.leq, self.meet, self.join, self.parent_index)

    def same_as(self, other: "FiniteLattice") -> bool:
        """Equality as labelled lattices (same labels, same order)."""
        if set(self.labels) != set(other.labels):
            return False
        perm = np.array([other.index(lab) for lab in self.labels])
        return bool((other.leq[np.ix_(perm, perm)] == self.leq).all())

    @cached_property
    def is_distributive(self) -> bool:
        for a in range(self.n):
            lhs = self.meet[a][self.join]  # a ∧ (b ∨ c)
            rhs = self.join[self.meet[a][:, None], self.meet[a][None, :]]
            if (lhs != rhs).any():
                return False
        return True


def build_lattice(elements: Sequence[Hashable], leq_pairs: Iterable[tuple]) -> FiniteLattice:
    """Lattice from labels and generating order pairs (closed transitively)."""
    elements = list(elements)
    pos = {e: i for i, e in enumerate(elements)}
    adj = np.zeros((len(elements), len(elements)), dtype=bool)
    for x, y in leq_pairs:
        try:
            adj[pos[x], pos[y]] = True
        except KeyError as exc:
            raise NotAPoset(f"unknown element {exc.args[0]!r}") from exc
    return FiniteLattice.from_leq(elements, transitive_closure(adj))


# ---------------------------------------------------------------- Moore families

@dataclass(frozen=True)
class MooreFamily:
    ground: tuple
    members: frozenset  # of frozensets

    def __post_init__(self):
        object.__setattr__(self, "ground", tuple(self.ground))
        object.__setattr__(self, "members", frozenset(frozenset(m) for m in self.members))

    def validate(self) -> None:
        g = frozenset(self.ground)
        if g not in self.members:
            raise InvalidMooreFamily("ground set is not a member")
        for m in self.members:
            if not m <= g:
                raise InvalidMooreFamily(f"member {set(m)} is not a subset of the ground set")
        for a, b in combinations(self.members, 2):
            if a & b not in self.members:
                raise InvalidMooreFamily(f"{set(a)} ∩ {set(b)} is not a member")

    def closure(self, z) -> frozenset:
        z = frozenset(z)
        out = frozenset(self.ground)
        for m in self.members:
            if z <= m:
                out &= m
        return out


def lattice_from_masks(masks: Sequence[int], labels=None, closure=None) -> FiniteLattice:
    """Lattice of a family of sets given as bit masks, ordered by inclusion.

    Members are sorted by (cardinality, mask) so bottom comes first. When a
    ``closure`` on masks is supplied it is used for joins; meets are always
    intersections.
    """
    order = sorted(range(len(masks)), key=lambda i: (bin(masks[i]).count("1"), masks[i]))
    masks = [masks[i] for i in order]
    if labels is None:
        labels = masks
    else:
        labels = [labels[i] for i in order]
    pos = {m: i for i, m in enumerate(masks)}
    if len(pos) != len(masks):
        raise InvalidMooreFamily("duplicate members")
    n = len(masks)
    width = max((m.bit_length() for m in masks), default=0)
    bits = np.zeros((n, max(width, 1)), dtype=np.int64)
    for i, m in enumerate(masks):
        for b in range(width):
            if m >> b & 1:
                bits[i, b] = 1
    leq = (bits @ (1 - bits).T) == 0
    meet = np.empty((n, n), dtype=np.intp)
    join = np.empty((n, n), dtype=np.intp)
    if width < 63:
        arr = np.array(masks, dtype=np.int64)
        by_value = np.argsort(arr)
        sorted_vals = arr[by_value]
        for i in range(n):
            inter = arr[i] & arr
            k = np.minimum(np.searchsorted(sorted_vals, inter), n - 1)
            if (sorted_vals[k] != inter).any():
                raise InvalidMooreFamily("family is not closed under intersection")
            meet[i] = by_value[k]
    else:
        for i, a in enumerate(masks):
            for j in range(i, n):
                try:
                    meet[i, j] = meet[j, i] = pos[a & masks[j]]
                except KeyError as exc:
                    raise InvalidMooreFamily("family is not closed under intersection") from exc
    if closure is None:
        join = _bound_table(leq, upper=True)
    elif width < 63:
        # many pairs share a union; close each distinct union once
        closed: dict[int, int] = {}
        for i in range(n):
            uniq, inv = np.unique(arr[i] | arr, return_inverse=True)
            row = np.empty(len(uniq), dtype=np.intp)
            for t, u in enumerate(uniq.tolist()):
                if u not in closed:
                    closed[u] = pos[closure(u)]
                row[t] = closed[u]
            join[i] = row[inv.ravel()]
    else:
        for i, a in enumerate(masks):
            for j in range(i, n):
                join[i, j] = join[j, i] = pos[closure(a | masks[j])]
    return FiniteLattice(labels, leq, meet, join)


def lattice_from_moore(fam: MooreFamily) -> FiniteLattice:
    """Members ordered by inclusion; meet is intersection, join closes the union."""
    fam.validate()
    bit = {g: 1 << i for i, g in enumerate(fam.ground)}
    members = list(fam.members)
    masks = [sum(bit[x] for x in m) for m in members]
    return lattice_from_masks(masks, labels=members)


# ---------------------------------------------------------------- join structure

@dataclass(frozen=True)
class JIProfile:
    jis: tuple
    atoms: tuple
    join_primes: tuple
    is_atomistic: bool
    lower_covers: dict


def join_primes(L: FiniteLattice) -> tuple[int, ...]:
    out = []
    for j in L.jis:
        below_join = L.leq[j][L.join]
        escapes = below_join & ~L.leq[j][:, None] & ~L.leq[j][None, :]
        if not escapes.any():
            out.append(j)
    return tuple(out)


def ji_profile(L: FiniteLattice) -> JIProfile:
    atoms = tuple(L.upper_covers(L.bottom)) if L.n > 1 else ()
    return JIProfile(
        jis=L.jis,
        atoms=atoms,
        join_primes=join_primes(L),
        is_atomistic=set(L.jis) <= set(atoms),
        lower_covers=dict(L.lower_cover_of),
    )


def refines(L: FiniteLattice, X: Iterable[int], Y: Iterable[int]) -> bool:
    """``X ≪ Y``: every x in X lies below some y in Y."""
    Y = list(Y)
    return all(any(L.leq[x, y] for y in Y) for x in X)


def minimal_join_covers(L: FiniteLattice, j: int) -> list[frozenset]:
    """All minimal join-covers of ``j``, the trivial cover ``{j}`` included.

    Uses the finite-lattice characterisation: ``C ⊆ J(L)`` is minimal iff
    ``j ≤ ⋁C`` and, for each ``c ∈ C``, ``j ≰ ⋁(C∖{c}) ∨ c_*``.
    """
    if j not in L.lower_cover_of:
        raise NotJoinIrreducible(f"element {j} is not join-irreducible")
    low = L.lower_cover_of
    cands = [k for k in L.jis if k != j and not L.leq[j, k]]
    found = [frozenset([j])]

    def minimal(C):
        for c in C:
            rest = L.join_all(x for x in C if x != c)
            if L.leq[j, L.join[rest, low[c]]]:
                return False
        return True

    def extend(start, chosen, acc):
        for pos in range(start, len(cands)):
            k = cands[pos]
            if any(L.leq[k, c] or L.leq[c, k] for c in chosen):
                continue
            nxt = int(L.join[acc, k])
            chosen.append(k)
            if L.leq[j, nxt]:
                if minimal(chosen):
                    found.append(frozenset(chosen))
            else:
                extend(pos + 1, chosen, nxt)
            chosen.pop()

    extend(0, [], L.bottom)
    return sorted(found, key=lambda c: (len(c), sorted(c)))


@dataclass(frozen=True)
class ODGraph:
    """Join-irreducibles with their order and non-trivial minimal covers."""

    jis: tuple            # element indices in the source lattice
    labels: tuple         # their labels
    ji_leq: np.ndarray = field(compare=False)
    min_covers: dict = field(compare=False)   # j -> list of frozensets (non-trivial only)
    lower_cover: dict = field(compare=False, default=None)

    def covers_of(self, j) -> list[frozenset]:
        return [frozenset([j])] + list(self.min_covers[j])


def od_graph(L: FiniteLattice) -> ODGraph:
    jis = L.jis
    sub = np.array(jis, dtype=np.intp)
    ji_leq = L.leq[np.ix_(sub, sub)] if len(jis) else np.zeros((0, 0), bool)
    covers = {j: [c for c in minimal_join_covers(L, j) if c != frozenset([j])] for j in jis}
    return ODGraph(jis=tuple(jis), labels=tuple(L.labels[j] for j in jis),
                   ji_leq=_readonly(ji_leq), min_covers=covers,
                   lower_cover=dict(L.lower_cover_of))


def lattice_from_od_graph(od: ODGraph) -> FiniteLattice:
    """Lattice of closed subsets of the join-irreducibles.

    A subset is closed when it is a downset and ``j ⋘_m C ⊆ X`` implies
    ``j ∈ X``. Labels are frozensets of the original ji labels.
    """
    m = len(od.jis)
    pos = {j: i for i, j in enumerate(od.jis)}
    below = [sum(1 << k for k in range(m) if od.ji_leq[k, i]) for i in range(m)]
    rules = [(1 << pos[j], sum(1 << pos[c] for c in C))
             for j in od.jis for C in od.min_covers[j]]

    def close(mask):
        while True:
            new = mask
            for i in range(m):
                if new >> i & 1:
                    new |= below[i]
            for head, body in rules:
                if new & body == body:
                    new |= head
            if new == mask:
                return mask
            mask = new

    closed = {0: None}
    frontier = [0]
    while frontier:
        nxt = []
        for s in frontier:
            for i in range(m):
                if not s >> i & 1:
                    t = close(s | 1 << i)
                    if t not in closed:
                        closed[t] = None
                        nxt.append(t)
        frontier = nxt
    masks = list(closed)
    labels = [frozenset(od.labels[i] for i in range(m) if s >> i & 1) for s in masks]
    return lattice_from_masks(masks, labels=labels, closure=close)


def join_dependency(L: FiniteLattice) -> dict[int, set[int]]:
    """Edges ``j → k`` of the join-dependency relation on join-irreducibles."""
    low = L.lower_cover_of
    edges = {j: set() for j in L.jis}
    for k in L.jis:
        with_k = L.join[:, k]
        with_low = L.join[:, low[k]]
        for j in L.jis:
            if j != k and (L.leq[j, with_k] & ~L.leq[j, with_low]).any():
                edges[j].add(k)
    return edges


def _reach(edges: dict, root) -> set:
    seen = {root}
    stack = [root]
    while stack:
        for y in edges[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def digraph_root(edges: dict):
    """A vertex reaching all others, or None."""
    for r in sorted(edges):
        if len(_reach(edges, r)) == len(edges):
            return r
    return None


# ---------------------------------------------------------------- congruences

@dataclass(frozen=True)
class Congruence:
    """Partition of element indices; block ids are canonical (first occurrence)."""

    partition: tuple

    @classmethod
    def from_blocks(cls, ids) -> "Congruence":
        seen = {}
        return cls(tuple(seen.setdefault(b, len(seen)) for b in ids))

    @property
    def is_trivial(self) -> bool:
        return len(set(self.partition)) == len(self.partition)

    @property
    def is_total(self) -> bool:
        return len(set(self.partition)) == 1

    def related(self, x, y) -> bool:
        return self.partition[x] == self.partition[y]

    def __and__(self, other: "Congruence") -> "Congruence":
        return Congruence.from_blocks(zip(self.partition, other.partition))

    def __le__(self, other: "Congruence") -> bool:
        return all(other.partition[x] == other.partition[y]
                   for x, y in combinations(range(len(self.partition)), 2)
                   if self.partition[x] == self.partition[y])

    def blocks(self) -> list[list[int]]:
        out = {}
        for x, b in enumerate(self.partition):
            out.setdefault(b, []).append(x)
        return list(out.values())

    def is_compatible(self, L: FiniteLattice) -> bool:
        p = np.array(self.partition)
        for x in range(L.n):
            same = np.flatnonzero(p == p[x])
            for tab in (L.meet, L.join):
                if (p[tab[same]] != p[tab[x]][None, :]).any():
                    return False
        return True


def principal_congruence(L: FiniteLattice, a: int, b: int) -> Congruence:
    """θ(a, b): close the pair under translations by meet/join and transitivity."""
    parent = list(range(L.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    todo = [(a, b)]
    while todo:
        x, y = todo.pop()
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        parent[max(rx, ry)] = min(rx, ry)
        for tab in (L.meet, L.join):
            for u, v in zip(tab[x], tab[y]):
                if u != v:
                    todo.append((int(u), int(v)))
    return Congruence.from_blocks(find(x) for x in range(L.n))


def monolith(L: FiniteLattice) -> Congruence | None:
    """The least non-trivial congruence, or None when L is not SI."""
    if L.n < 2:
        return None
    result = None
    for x, y in np.argwhere(L.covers):
        theta = principal_congruence(L, int(x), int(y))
        result = theta if result is None else result & theta
        if result.is_trivial:
            return None
    return result


@dataclass(frozen=True)
class SIReport:
    si: bool
    monolith_pair: tuple | None
    root: int | None
    monolith: Congruence | None


def is_subdirectly_irreducible(L: FiniteLattice) -> SIReport:
    """Decide subdirect irreducibility twice and insist the answers agree.

    (i) the join-dependency digraph on join-irreducibles is rooted;
    (ii) the intersection of all non-trivial congruences is non-trivial.
    """
    if L.n < 2:
        return SIReport(False, None, None, None)
    root = digraph_root(join_dependency(L))
    mono = monolith(L)
    if (root is not None) != (mono is not None):
        raise MethodDisagreement(
            f"D-digraph rooted={root is not None} but monolith exists={mono is not None}")
    pair = None
    if mono is not None:
        pair = next((a, b) for a, b in combinations(range(L.n), 2)
                    if mono.related(a, b) and principal_congruence(L, a, b) == mono)
    return SIReport(mono is not None, pair, root, mono)


# ---------------------------------------------------------------- quotients

def is_d_closed(L: FiniteLattice, S: Iterable[int], od: ODGraph | None = None):
    """Verdict whose witness ``(j, C)`` is a minimal cover leaving S."""
    S = set(S)
    od = od or od_graph(L)
    for j in sorted(S):
        for C in od.min_covers[j]:
            if not C <= S:
                return Verdict(False, (j, C), "cover leaves the set")
    return Verdict(True)


def quotient_by_dclosed(L: FiniteLattice, S: Iterable[int], od: ODGraph | None = None):
    """Join-closure ``L_S`` of a D-closed set with its projection ``π_S``.

    Returns ``(L_S, π_S)`` where ``π_S(l) = ⋁{j ∈ S | j ≤ l}`` is a
    :class:`LatticeMorphism` from L onto L_S.
    """
    S = sorted(set(int(s) for s in S))
    bad = [s for s in S if s not in L.lower_cover_of]
    if bad:
        raise NotJoinIrreducible(f"elements {bad} are not join-irreducible")
    closed_check = is_d_closed(L, S, od)
    if not closed_check:
        j, C = closed_check.witness
        raise NotDClosed(f"{j} ⋘_m {sorted(C)} leaves the set", j=j, cover=C)
    closed = {L.bottom}
    frontier = [L.bottom]
    while frontier:
        nxt = []
        for x in frontier:
            for s in S:
                y = int(L.join[x, s])
                if y not in closed:
                    closed.add(y)
                    nxt.append(y)
        frontier = nxt
    elems = sorted(closed)
    sub = np.array(elems)
    LS = FiniteLattice.from_leq([L.labels[e] for e in elems], L.leq[np.ix_(sub, sub)],
                                parent_index=elems)
    in_S = np.zeros(L.n, dtype=bool)
    in_S[S] = True
    pos = {e: i for i, e in enumerate(elems)}
    proj = []
    for l in range(L.n):
        js = np.flatnonzero(in_S & L.leq[:, l])
        proj.append(pos[L.join_all(int(j) for j in js)])
    return LS, LatticeMorphism(L, LS, proj)


@dataclass
class SubdirectDecomposition:
    lattice: FiniteLattice
    factors: list          # list of (L_S, π_S)

    def tuple_of(self, x: int) -> tuple:
        return tuple(int(pi.mapping[x]) for _, pi in self.factors)

    @property
    def is_injective(self) -> bool:
        return len({self.tuple_of(x) for x in range(self.lattice.n)}) == self.lattice.n

    def product(self):
        """Materialise the product lattice and the embedding into it."""
        P = product_lattice([LS for LS, _ in self.factors])
        emb = [P.index(tuple(LS.labels[i] for (LS, _), i in zip(self.factors, self.tuple_of(x))))
               for x in range(self.lattice.n)]
        return P, LatticeMorphism(self.lattice, P, emb)


def subdirect_decomposition(L: FiniteLattice, cover: Sequence[Iterable[int]]) -> SubdirectDecomposition:
    cover = [set(S) for S in cover]
    union = set().union(*cover) if cover else set()
    if union != set(L.jis):
        raise NotACover("the sets do not cover the join-irreducibles")
    od = od_graph(L)
    dec = SubdirectDecomposition(L, [quotient_by_dclosed(L, S, od) for S in cover])
    if not dec.is_injective:
        raise MethodDisagreement("tuple map of a covering family is not injective")
    return dec


def product_lattice(factors: Sequence[FiniteLattice]) -> FiniteLattice:
    """Direct product; labels are tuples of factor labels."""
    from itertools import product as iproduct
    idx = list(iproduct(*[range(F.n) for F in factors]))
    n = len(idx)
    arr = np.array(idx, dtype=np.intp).reshape(n, len(factors))
    leq = np.ones((n, n), dtype=bool)
    for k, F in enumerate(factors):
        leq &= F.leq[np.ix_(arr[:, k], arr[:, k])]
    strides = np.array([int(np.prod([F.n for F in factors[k + 1:]])) for k in range(len(factors))],
                       dtype=np.intp)
    meet = np.zeros((n, n), dtype=np.intp)
    join = np.zeros((n, n), dtype=np.intp)
    for k, F in enumerate(factors):
        meet += F.meet[np.ix_(arr[:, k], arr[:, k])] * strides[k]
        join += F.join[np.ix_(arr[:, k], arr[:, k])] * strides[k]
    labels = [tuple(F.labels[i] for F, i in zip(factors, t)) for t in idx]
    return FiniteLattice(labels, leq, meet, join)


def principal_ideal(L: FiniteLattice, l: int) -> FiniteLattice:
    return L.sublattice(L.down(l))


def principal_filter(L: FiniteLattice, l: int) -> FiniteLattice:
    return L.sublattice(L.up(l))


# ---------------------------------------------------------------- morphisms

class LatticeMorphism:
    """A map between finite lattices given by an index array."""

    def __init__(self, source: FiniteLattice, target: FiniteLattice, mapping):
        self.source = source
        self.target = target
        self.mapping = _readonly(np.asarray(mapping, dtype=np.intp))
        if self.mapping.shape != (source.n,):
            raise NotAMorphism("mapping must be defined on every source element")

    def __call__(self, x: int) -> int:
        return int(self.mapping[x])

    def __repr__(self):
        return f"LatticeMorphism({self.source.n} -> {self.target.n})"

    def label_map(self) -> dict:
        return {self.source.labels[x]: self.target.labels[y] for x, y in enumerate(self.mapping)}

    @classmethod
    def from_labels(cls, source, target, pairs: dict) -> "LatticeMorphism":
        return cls(source, target, [target.index(pairs[lab]) for lab in source.labels])

    def preserves_meets(self) -> bool:
        f, S, T = self.mapping, self.source, self.target
        return bool((T.meet[f[:, None], f[None, :]] == f[S.meet]).all())

    def preserves_joins(self) -> bool:
        f, S, T = self.mapping, self.source, self.target
        return bool((T.join[f[:, None], f[None, :]] == f[S.join]).all())

    def is_homomorphism(self) -> bool:
        return self.preserves_meets() and self.preserves_joins()

    def is_injective(self) -> bool:
        return len(set(self.mapping.tolist())) == self.source.n

    def is_surjective(self) -> bool:
        return len(set(self.mapping.tolist())) == self.target.n

    def preserves_top(self) -> bool:
        return self(self.source.top) == self.target.top

    def preserves_bottom(self) -> bool:
        return self(self.source.bottom) == self.target.bottom

    def preserves_bounds(self) -> bool:
        return self.preserves_top() and self.preserves_bottom()

    def is_embedding(self) -> bool:
        return self.is_injective() and self.is_homomorphism()

    def check_embedding(self) -> "LatticeMorphism":
        if not self.is_homomorphism():
            raise NotAnEmbedding("map does not preserve meet and join")
        if not self.is_injective():
            raise NotAnEmbedding("map is not injective")
        return self

    def then(self, other: "LatticeMorphism") -> "LatticeMorphism":
        """Composite ``other ∘ self``."""
        if other.source is not self.target and other.source.labels != self.target.labels:
            raise NotAMorphism("codomain and domain do not match")
        return LatticeMorphism(self.source, other.target, other.mapping[self.mapping])


def left_adjoint(f: LatticeMorphism) -> np.ndarray:
    """``μ(m) = ⋀{l | m ≤ f(l)}``, checked against the adjunction on all pairs."""
    if not f.is_homomorphism():
        raise NotAMorphism("map does not preserve meet and join")
    if not f.preserves_bounds():
        raise NotBoundPreserving("left adjoint requires a bound-preserving morphism")
    L, M = f.source, f.target
    mu = np.array([L.meet_all(np.flatnonzero(M.leq[m, f.mapping])) for m in range(M.n)],
                  dtype=np.intp)
    # μ(m) ≤ l  ⟺  m ≤ f(l)
    if not (L.leq[mu] == M.leq[:, f.mapping]).all():
        raise MethodDisagreement("computed left adjoint violates the adjunction")
    return mu


# ---------------------------------------------------------------- search

def find_embedding(L: FiniteLattice, M: FiniteLattice, bound_preserving: bool = False,
                   bijective: bool = False) -> LatticeMorphism | None:
    """First lattice embedding ``L → M`` in lexicographic search order, or None.

    An embedding is determined by the image of ⊥ and of the
    join-irreducibles, since ``f(l) = f(⊥) ∨ ⋁{f(j) | j ≤ l}``. Those images
    are assigned along a linear extension, candidates tried in index order of M, with
    order/injectivity/meet checks on every element whose image is already
    determined.
    """
    if L.n > M.n or (bijective and L.n != M.n):
        return None
    # a linear extension, so each ji is placed right after everything below it
    jis = sorted(L.jis, key=lambda j: (int(L.leq[:, j].sum()), j))
    if bound_preserving and L.n == 1:
        return LatticeMorphism(L, M, [M.bottom]) if M.n == 1 else None
    # step at which each element becomes determined
    ji_pos = {j: k for k, j in enumerate(jis)}
    ready_at = [[] for _ in range(len(jis) + 1)]
    below = []
    for x in range(L.n):
        js = [j for j in jis if L.leq[j, x]]
        below.append(js)
        ready_at[max((ji_pos[j] + 1 for j in js), default=0)].append(x)
    join_pairs = [np.argwhere(L.join == x) for x in range(L.n)]
    image = np.full(L.n, -1, dtype=np.intp)
    ji_img = {}
    used = {}

    def place(step) -> bool:
        """Fix images of elements determined at ``step``; False on conflict."""
        placed = []
        ok = True
        for x in ready_at[step]:
            y = image[L.bottom] if x != L.bottom else image[x]
            for j in below[x]:
                y = M.join[y, ji_img[j]]
            y = int(y)
            if y in used and used[y] != x:
                ok = False
                break
            image[x] = y
            used[y] = x
            placed.append(x)
        if ok:
            for x in placed:
                det = np.flatnonzero(image >= 0)
                fy = image[det]
                y = image[x]
                if not ((L.leq[x, det] == M.leq[y, fy]).all() and (L.leq[det, x] == M.leq[fy, y]).all()):
                    ok = False
                    break
                mx = L.meet[x, det]
                known = image[mx] >= 0
                if (image[mx[known]] != M.meet[y, fy[known]]).any():
                    ok = False
                    break
                jx = L.join[x, det]
                known = image[jx] >= 0
                if (image[jx[known]] != M.join[y, fy[known]]).any():
                    ok = False
                    break
                us, vs = join_pairs[x].T
                if (M.join[image[us], image[vs]] != y).any():
                    ok = False
                    break
            if ok and bound_preserving and image[L.top] >= 0 and image[L.top] != M.top:
                ok = False
        if not ok:
            for x in ready_at[step]:
                if image[x] >= 0 and used.get(int(image[x])) == x:
                    del used[int(image[x])]
                image[x] = -1
        return ok

    def undo(step):
        for x in ready_at[step]:
            if image[x] >= 0 and used.get(int(image[x])) == x:
                del used[int(image[x])]
            image[x] = -1

    def search(k) -> bool:
        if k == len(jis):
            return True
        j = jis[k]
        base = image[L.bottom]
        # order against everything placed so far must already match
        det = np.flatnonzero(image >= 0)
        fy = image[det]
        ok = M.leq[base] & ((M.leq[:, fy] == L.leq[j, det]).all(axis=1))
        ok &= (M.leq[fy, :] == L.leq[det, j][:, None]).all(axis=0)
        ok[fy] = False
        for m in np.flatnonzero(ok):
            m = int(m)
            ji_img[j] = m
            if place(k + 1):
                if search(k + 1):
                    return True
                undo(k + 1)
        ji_img.pop(j, None)
        return False

    bottoms = [M.bottom] if bound_preserving else range(M.n)
    up_size = M.leq.sum(axis=1)
    for b in bottoms:
        if up_size[b] < L.n:
            continue
        image[L.bottom] = b
        used.clear()
        used[b] = L.bottom
        if bound_preserving and L.top == L.bottom and b != M.top:
            continue
        if search(0):
            f = LatticeMorphism(L, M, image.copy())
            if f.is_embedding() and (not bound_preserving or f.preserves_bounds()):
                return f
            raise MethodDisagreement("embedding search returned an invalid map")
        image[:] = -1
    return None


def find_isomorphism(L: FiniteLattice, M: FiniteLattice) -> LatticeMorphism | None:
    if L.n != M.n or len(L.jis) != len(M.jis):
        return None
    return find_embedding(L, M, bound_preserving=True, bijective=True)


def is_isomorphic(L: FiniteLattice, M: FiniteLattice) -> bool:
    return find_isomorphism(L, M) is not None
