"""Generalized ultrametric spaces with distances in the powerset of a finite A.

Distances are bit masks over the attribute order of the space, stored in a
dense integer matrix ``dist[i, j]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    EmptyFiber,
    MethodDisagreement,
    ModuleLawViolation,
    NotReduced,
    NotSymmetric,
    SizeCapExceeded,
    TriangleViolation,
    UnknownAction,
)
from .frame_lattice import DEFAULT_LATTICE_CAP, SetLattice, iter_downsets
from .frames import Frame
from .order_core import Verdict

DEFAULT_SPACE_CAP = 4096


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


class UltraSpace:
    """Points with a ``P(A)``-valued distance; axioms are checked by :func:`build_space`."""

    def __init__(self, attrs: Sequence[Hashable], points: Sequence[Hashable], dist: np.ndarray):
        self.attrs = tuple(attrs)
        self.points = tuple(points)
        self.index = {p: i for i, p in enumerate(self.points)}
        self.attr_index = {a: i for i, a in enumerate(self.attrs)}
        d = np.array(dist, dtype=np.int64)
        d.flags.writeable = False
        self.dist = d

    def __repr__(self):
        return f"{type(self).__name__}(attrs={list(self.attrs)}, points={len(self.points)})"

    def __len__(self):
        return len(self.points)

    @property
    def full(self) -> int:
        return (1 << len(self.attrs)) - 1

    def mask(self, attrs: Iterable) -> int:
        m = 0
        for a in attrs:
            if a not in self.attr_index:
                raise UnknownAction(f"unknown attribute {a!r}")
            m |= 1 << self.attr_index[a]
        return m

    def attrset(self, mask: int) -> frozenset:
        return frozenset(self.attrs[i] for i in _bits(int(mask)))

    def delta(self, f, g) -> frozenset:
        return self.attrset(self.dist[self.index[f], self.index[g]])

    def ball(self, f, alpha: Iterable) -> frozenset:
        """``B(f, α) = {g | δ(f, g) ⊆ α}``."""
        m = self.mask(alpha)
        row = self.dist[self.index[f]]
        return frozenset(self.points[j] for j in np.flatnonzero((row & ~m) == 0))

    def subspace(self, points: Iterable) -> "UltraSpace":
        keep = [self.index[p] for p in points]
        keep.sort()
        return UltraSpace(self.attrs, [self.points[i] for i in keep], self.dist[np.ix_(keep, keep)])

    def dist_table(self) -> dict:
        return {(f, g): self.delta(f, g) for f in self.points for g in self.points}


def check_axioms(S: UltraSpace) -> None:
    d = S.dist
    n = len(S.points)
    diag = np.eye(n, dtype=bool)
    bad = (d == 0) != diag
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise NotReduced(f"δ({S.points[i]},{S.points[j]}) is empty iff the points coincide fails",
                         witness=(S.points[i], S.points[j]))
    asym = d != d.T
    if asym.any():
        i, j = np.argwhere(asym)[0]
        raise NotSymmetric(f"δ({S.points[i]},{S.points[j]}) ≠ δ({S.points[j]},{S.points[i]})",
                           witness=(S.points[i], S.points[j]))
    for h in range(n):
        through = d[:, h][:, None] | d[h, :][None, :]
        viol = (d & ~through) != 0
        if viol.any():
            i, j = np.argwhere(viol)[0]
            raise TriangleViolation(
                f"δ({S.points[i]},{S.points[j]}) ⊄ δ({S.points[i]},{S.points[h]}) ∪ δ({S.points[h]},{S.points[j]})",
                witness=(S.points[i], S.points[j], S.points[h]))


def build_space(attrs: Sequence[Hashable], points: Sequence[Hashable], dist) -> UltraSpace:
    """Validated space from ``dist``: a mapping ``(f, g) → attrs`` or a callable.

    Missing pairs ``(f, f)`` default to ∅.
    """
    attrs = tuple(attrs)
    points = tuple(points)
    pos = {a: i for i, a in enumerate(attrs)}
    n = len(points)
    d = np.zeros((n, n), dtype=np.int64)
    for i, f in enumerate(points):
        for j, g in enumerate(points):
            if callable(dist):
                val = dist(f, g)
            elif (f, g) in dist:
                val = dist[(f, g)]
            elif i == j:
                val = ()
            else:
                raise KeyError(f"distance ({f!r}, {g!r}) missing")
            m = 0
            for a in val:
                if a not in pos:
                    raise UnknownAction(f"unknown attribute {a!r}")
                m |= 1 << pos[a]
            d[i, j] = m
    S = UltraSpace(attrs, points, d)
    check_axioms(S)
    return S


# ---------------------------------------------------------------- section spaces

class SectionSpace(UltraSpace):
    """``∏_a E_a`` with ``δ(f, g) = {a | f(a) ≠ g(a)}``."""

    def __init__(self, fibers: Mapping[Hashable, Sequence[Hashable]], cap: int = DEFAULT_SPACE_CAP):
        fib = {a: tuple(xs) for a, xs in fibers.items()}
        for a, xs in fib.items():
            if not xs:
                raise EmptyFiber(f"fiber over {a!r} is empty")
        size = int(np.prod([len(xs) for xs in fib.values()], dtype=object)) if fib else 1
        if size > cap:
            raise SizeCapExceeded(f"section space has {size} points (cap {cap})")
        self.fibers = fib
        pts = list(product(*fib.values()))
        n = len(pts)
        arr = np.array(pts, dtype=object).reshape(n, len(fib))
        d = np.zeros((n, n), dtype=np.int64)
        for k in range(len(fib)):
            col = arr[:, k]
            d |= (col[:, None] != col[None, :]).astype(np.int64) << k
        super().__init__(tuple(fib), pts, d)


def section_space(fibers: Mapping, cap: int = DEFAULT_SPACE_CAP) -> SectionSpace:
    return SectionSpace(fibers, cap)


def hamming_space(domain, attrs: Sequence[Hashable], cap: int = DEFAULT_SPACE_CAP) -> SectionSpace:
    """All functions ``A → D``; ``domain`` is a size or an explicit value list."""
    values = tuple(range(domain)) if isinstance(domain, int) else tuple(domain)
    return SectionSpace({a: values for a in attrs}, cap)


# ---------------------------------------------------------------- completeness

def is_pairwise_complete(S: UltraSpace) -> Verdict:
    """Check interpolants for every disjoint split of every distance.

    Splits ``α ∪ β = δ(f, g)`` are tried with α in increasing mask order;
    the first failure is returned as ``(f, g, α, β)``.
    """
    d = S.dist
    n = len(S.points)
    for i in range(n):
        for j in range(n):
            dij = int(d[i, j])
            sub = [m for m in range(dij + 1) if m & ~dij == 0]
            for alpha in sub:
                beta = dij & ~alpha
                ok = ((d[i] & ~alpha) == 0) & ((d[:, j] & ~beta) == 0)
                if not ok.any():
                    return Verdict(False, (S.points[i], S.points[j], S.attrset(alpha), S.attrset(beta)),
                                   "no interpolant point")
    return Verdict(True)


def interpolants(S: UltraSpace, f, g, alpha: Iterable, beta: Iterable) -> list:
    a, b = S.mask(alpha), S.mask(beta)
    i, j = S.index[f], S.index[g]
    ok = ((S.dist[i] & ~a) == 0) & ((S.dist[:, j] & ~b) == 0)
    return [S.points[k] for k in np.flatnonzero(ok)]


@dataclass(frozen=True)
class Representation:
    section: SectionSpace
    mapping: dict
    surjective: bool


def represent(S: UltraSpace) -> Representation:
    """Isometry into ``∏_a D_a`` with ``D_a`` the balls ``B(f, A∖{a})``.

    Fiber values are ball indices in order of first appearance.
    """
    full = S.full
    fibers = {}
    coords = []
    for k, a in enumerate(S.attrs):
        m = full & ~(1 << k)
        seen = {}
        col = []
        for i in range(len(S.points)):
            ball = frozenset(np.flatnonzero((S.dist[i] & ~m) == 0).tolist())
            col.append(seen.setdefault(ball, len(seen)))
        fibers[a] = tuple(range(len(seen)))
        coords.append(col)
    section = SectionSpace(fibers, cap=max(DEFAULT_SPACE_CAP, 1))
    mapping = {p: tuple(c[i] for c in coords) for i, p in enumerate(S.points)}
    img = [section.index[mapping[p]] for p in S.points]
    if not (section.dist[np.ix_(img, img)] == S.dist).all():
        raise MethodDisagreement("ball representation is not an isometry")
    if len(set(img)) != len(img):
        raise MethodDisagreement("ball representation is not injective")
    return Representation(section, mapping, len(set(img)) == len(section.points))


# ---------------------------------------------------------------- modules

class MetricModule:
    """A map ``v: X → P(A)`` with ``v(f) ⊆ δ(f, g) ∪ v(g)``."""

    def __init__(self, base: UltraSpace, v: Sequence[int]):
        self.base = base
        arr = np.array(v, dtype=np.int64)
        arr.flags.writeable = False
        self.v = arr

    def __call__(self, f) -> frozenset:
        return self.base.attrset(self.v[self.base.index[f]])

    def __eq__(self, other):
        return isinstance(other, MetricModule) and other.base is self.base and (other.v == self.v).all()

    def __hash__(self):
        return hash(self.v.tobytes())

    def law_violation(self):
        d, v = self.base.dist, self.v
        bad = (v[:, None] & ~(d | v[None, :])) != 0
        if bad.any():
            i, j = np.argwhere(bad)[0]
            return self.base.points[i], self.base.points[j]
        return None

    def validate(self) -> "MetricModule":
        w = self.law_violation()
        if w is not None:
            raise ModuleLawViolation(f"v({w[0]}) ⊄ δ({w[0]},{w[1]}) ∪ v({w[1]})")
        return self


def vv_module(S: UltraSpace, Y: Iterable) -> MetricModule:
    """``v(f) = ⋂_{g ∈ Y} δ(f, g)``; the empty intersection is all of A."""
    idx = [S.index[g] for g in Y]
    if not idx:
        return MetricModule(S, [S.full] * len(S.points))
    v = np.bitwise_and.reduce(S.dist[:, idx], axis=1)
    return MetricModule(S, v).validate()


def kernel_subspace(m: MetricModule) -> frozenset:
    """Zero set ``{f | v(f) = ∅}``."""
    m.validate()
    return frozenset(m.base.points[i] for i in np.flatnonzero(m.v == 0))


def is_continuous(S: UltraSpace, Y: Iterable) -> bool:
    """Every f with ``vv_Y(f) = ∅`` already lies in Y."""
    Y = frozenset(Y)
    return kernel_subspace(vv_module(S, Y)) <= Y


def continuous_closure(S: UltraSpace, Y: Iterable) -> frozenset:
    return kernel_subspace(vv_module(S, Y))


def all_modules(S: UltraSpace, cap: int = 10 ** 6) -> list[MetricModule]:
    """Every module on S, by a vectorized filter over all maps ``X → P(A)``."""
    n, k = len(S.points), len(S.attrs)
    total = (1 << k) ** n
    if total > cap:
        raise SizeCapExceeded(f"{total} candidate maps (cap {cap})")
    grid = np.indices([1 << k] * n).reshape(n, -1).T.astype(np.int64)   # rows are candidate v
    ok = np.ones(len(grid), dtype=bool)
    d = S.dist
    for i in range(n):
        for j in range(n):
            if i != j:
                ok &= (grid[:, i] & ~(d[i, j] | grid[:, j])) == 0
    return [MetricModule(S, row) for row in grid[ok]]


# ---------------------------------------------------------------- lattice of a space

def _classes(S: UltraSpace, alpha: int) -> list[int]:
    """``down[y]`` masks of ``{x | δ(x, y) ⊆ α}``."""
    n = len(S.points)
    hit = (S.dist & ~alpha) == 0
    return [sum(1 << int(i) for i in np.flatnonzero(hit[:, y])) for y in range(n)]


def count_space_closed(S: UltraSpace) -> int:
    """``|L(X, δ)|``: for each α, two choices per class of ``δ(x, y) ⊆ α``."""
    total = 0
    n = len(S.points)
    for alpha in range(1 << len(S.attrs)):
        hit = (S.dist & ~alpha) == 0
        seen = np.zeros(n, dtype=bool)
        classes = 0
        for i in range(n):
            if not seen[i]:
                classes += 1
                seen |= hit[i]
        total += 2 ** classes
    return total


def lattice_of_space(S: UltraSpace, cap: int = DEFAULT_LATTICE_CAP) -> SetLattice:
    """Closed subsets Z of ``A ∪ X``: ``y ∈ Z`` and ``δ(x, y) ⊆ Z ∩ A`` force ``x ∈ Z``."""
    size = count_space_closed(S)
    if size > cap:
        raise SizeCapExceeded(f"L(X, δ) has {size} elements (cap {cap})")
    k = len(S.attrs)
    avail = (1 << len(S.points)) - 1
    tables = {}
    masks = []
    for alpha in range(1 << k):
        down = _classes(S, alpha)
        tables[alpha] = down
        masks.extend(alpha | (y << k) for y in iter_downsets(down, down, avail))
    full = (1 << k) - 1

    def close(mask: int) -> int:
        alpha = mask & full
        down = tables[alpha]
        pts = mask >> k
        out = 0
        while pts:
            b = pts & -pts
            out |= down[b.bit_length() - 1]
            pts ^= b
        return alpha | (out << k)

    return SetLattice(S.attrs, S.points, masks, closure=close)


# ---------------------------------------------------------------- frames

def space_frame(S: UltraSpace) -> Frame:
    """``f R_a g ⟺ δ(f, g) ⊆ {a}``."""
    rel = {}
    for k, a in enumerate(S.attrs):
        hit = (S.dist & ~(1 << k)) == 0
        rel[a] = [(S.points[i], S.points[j]) for i, j in np.argwhere(hit)]
    return Frame(S.attrs, S.points, rel)


def distance_from_frame(F: Frame) -> np.ndarray:
    """``δ(f, g) = ⋂{α | some α-path leads from f to g}``."""
    n = len(F.worlds)
    full = (1 << len(F.actions)) - 1
    d = np.full((n, n), full, dtype=np.int64)
    for alpha in range(1 << len(F.actions)):
        d = np.where(F.reach(alpha), d & alpha, d)
    return d
