"""The lattice L(F) of a multimodal frame and the maps it induces.

Subsets of ``A ∪ X`` are bit masks: the first ``|A|`` bits are actions in
declaration order, the remaining bits are worlds in declaration order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import InvalidPMorphism, MethodDisagreement, NotSurjective, SizeCapExceeded
from .frames import (
    Frame,
    PMorphism,
    ProductFrame,
    uniform_product_frame,
    uniformize,
    validate_pmorphism,
)
from .order_core import FiniteLattice, LatticeMorphism, lattice_from_masks

DEFAULT_LATTICE_CAP = 5000


def _fmt(x) -> str:
    if isinstance(x, tuple):
        return "".join(str(c) for c in x) if all(len(str(c)) == 1 for c in x) else ".".join(map(str, x))
    return str(x)


@dataclass(frozen=True)
class FrameSubset:
    """A subset ``attrs ∪ points`` of ``A ∪ X``."""

    attrs: frozenset = frozenset()
    points: frozenset = frozenset()

    def __str__(self):
        a = ",".join(sorted(_fmt(x) for x in self.attrs))
        p = ",".join(sorted(_fmt(x) for x in self.points))
        return "{" + a + "|" + p + "}"

    def __le__(self, other: "FrameSubset") -> bool:
        return self.attrs <= other.attrs and self.points <= other.points


class SetLattice(FiniteLattice):
    """A lattice of subsets of ``A ∪ X`` carrying its bit-mask encoding."""

    def __init__(self, attrs: Sequence[Hashable], points: Sequence[Hashable], masks: Sequence[int],
                 closure=None):
        self.attrs = tuple(attrs)
        self.points = tuple(points)
        self._attr_pos = {a: i for i, a in enumerate(self.attrs)}
        self._point_pos = {x: i for i, x in enumerate(self.points)}
        base = lattice_from_masks(list(masks), closure=closure)
        self.masks = tuple(base.labels)
        self._mask_index = {m: i for i, m in enumerate(self.masks)}
        labels = [self.decode(m) for m in self.masks]
        super().__init__(labels, base.leq, base.meet, base.join)

    @property
    def attr_bits(self) -> int:
        return len(self.attrs)

    def decode(self, mask: int) -> FrameSubset:
        k = len(self.attrs)
        return FrameSubset(
            frozenset(a for i, a in enumerate(self.attrs) if mask >> i & 1),
            frozenset(x for i, x in enumerate(self.points) if mask >> (k + i) & 1),
        )

    def encode(self, attrs: Iterable = (), points: Iterable = ()) -> int:
        k = len(self.attrs)
        m = 0
        for a in attrs:
            m |= 1 << self._attr_pos[a]
        for x in points:
            m |= 1 << (k + self._point_pos[x])
        return m

    def index_of_mask(self, mask: int) -> int:
        return self._mask_index[mask]

    def index_of(self, attrs: Iterable = (), points: Iterable = ()) -> int:
        return self._mask_index[self.encode(attrs, points)]


# ---------------------------------------------------------------- downsets

def count_downsets(down: Sequence[int], up: Sequence[int], avail: int) -> int:
    """Number of downsets of a finite preorder restricted to ``avail``.

    ``down[x]`` / ``up[x]`` are bit masks of the principal down- and up-sets.
    Uses ``d(P) = d(P - ↑x) + d(P - ↓x)`` with factorization over
    comparability components, so antichains and products stay cheap.
    """
    down = tuple(down)
    up = tuple(up)
    nbr = tuple(d | u for d, u in zip(down, up))

    @lru_cache(maxsize=None)
    def count(mask: int) -> int:
        if mask == 0:
            return 1
        comps = []
        rest = mask
        while rest:
            seed = rest & -rest
            comp = seed
            frontier = seed
            while frontier:
                new = 0
                while frontier:
                    b = frontier & -frontier
                    new |= nbr[b.bit_length() - 1]
                    frontier ^= b
                new &= mask & ~comp
                comp |= new
                frontier = new
            comps.append(comp)
            rest &= ~comp
        if len(comps) > 1:
            total = 1
            for c in comps:
                total *= count(c)
            return total
        x = (mask & -mask).bit_length() - 1
        return count(mask & ~up[x]) + count(mask & ~down[x])

    return count(avail)


def iter_downsets(down: Sequence[int], up: Sequence[int], avail: int):
    """Yield every downset of the preorder restricted to ``avail``."""
    if avail == 0:
        yield 0
        return
    x = (avail & -avail).bit_length() - 1
    yield from iter_downsets(down, up, avail & ~up[x])
    base = down[x] & avail
    for d in iter_downsets(down, up, avail & ~down[x]):
        yield base | d


# ---------------------------------------------------------------- closure

def _principal(F: Frame, alpha_mask: int) -> tuple[list[int], list[int]]:
    """Per world: mask of worlds reaching it and of worlds it reaches."""
    r = F.reach(alpha_mask)
    weights = [1 << i for i in range(len(F.worlds))]
    down = [sum(w for w, hit in zip(weights, r[:, y]) if hit) for y in range(len(F.worlds))]
    up = [sum(w for w, hit in zip(weights, r[x]) if hit) for x in range(len(F.worlds))]
    return down, up


def closure(F: Frame, Z: FrameSubset) -> FrameSubset:
    """``(α, cl_α(Z ∩ X))`` with ``α = Z ∩ A``: add every world with an α-path into Z."""
    alpha = F.attrs_mask(Z.attrs)
    r = F.reach(alpha)
    idx = [F.world_index[x] for x in Z.points]
    hit = r[:, idx].any(axis=1) if idx else np.zeros(len(F.worlds), dtype=bool)
    return FrameSubset(frozenset(Z.attrs), frozenset(F.worlds[i] for i in np.flatnonzero(hit)))


def is_closed(F: Frame, Z: FrameSubset) -> bool:
    return closure(F, Z) == FrameSubset(frozenset(Z.attrs), frozenset(Z.points))


def _mask_closure(F: Frame):
    k = len(F.actions)
    full = (1 << k) - 1
    tables = {}

    def close(mask: int) -> int:
        alpha = mask & full
        if alpha not in tables:
            tables[alpha] = _principal(F, alpha)[0]
        down = tables[alpha]
        pts = mask >> k
        out = 0
        while pts:
            b = pts & -pts
            out |= down[b.bit_length() - 1]
            pts ^= b
        return alpha | (out << k)

    return close


def count_closed_sets(F: Frame) -> int:
    """``|L(F)|`` without enumerating it."""
    total = 0
    avail = (1 << len(F.worlds)) - 1
    for alpha in range(1 << len(F.actions)):
        down, up = _principal(F, alpha)
        total += count_downsets(down, up, avail)
    return total


def closed_masks(F: Frame, cap: int = DEFAULT_LATTICE_CAP) -> list[int]:
    n = count_closed_sets(F)
    if n > cap:
        raise SizeCapExceeded(f"L(F) has {n} elements (cap {cap})")
    k = len(F.actions)
    avail = (1 << len(F.worlds)) - 1
    out = []
    for alpha in range(1 << k):
        down, up = _principal(F, alpha)
        out.extend(alpha | (d << k) for d in iter_downsets(down, up, avail))
    return out


def lattice_of_frame(F: Frame, cap: int = DEFAULT_LATTICE_CAP) -> SetLattice:
    """All closed subsets of ``A ∪ X`` ordered by inclusion."""
    return SetLattice(F.actions, F.worlds, closed_masks(F, cap), closure=_mask_closure(F))


def minimal_path_covers(F: Frame, x) -> list[FrameSubset]:
    """``α ∪ {y}`` for every y and every inclusion-minimal α with an α-path x → y."""
    out = []
    xi = F.world_index[x]
    k = len(F.actions)
    for yi, y in enumerate(F.worlds):
        good = [a for a in range(1 << k) if F.reach(a)[xi, yi]]
        for a in good:
            if not any(b != a and b & a == b for b in good):
                attrs = frozenset(F.actions[i] for i in range(k) if a >> i & 1)
                out.append(FrameSubset(attrs, frozenset([y])))
    return out


# ---------------------------------------------------------------- functor on morphisms

def lattice_of_pmorphism(psi: PMorphism, source_lattice: SetLattice | None = None,
                         target_lattice: SetLattice | None = None,
                         cap: int = DEFAULT_LATTICE_CAP) -> LatticeMorphism:
    """``L(ψ): L(F1) → L(F0)``, ``Z ↦ (Z ∩ A) ∪ ψ⁻¹(Z ∩ X1)``."""
    v = validate_pmorphism(psi.mapping, psi.source, psi.target)
    if not v:
        raise InvalidPMorphism(v.reason)
    L1 = target_lattice if target_lattice is not None else lattice_of_frame(psi.target, cap)
    L0 = source_lattice if source_lattice is not None else lattice_of_frame(psi.source, cap)
    fibre = {}
    for x, y in psi.mapping.items():
        fibre.setdefault(y, []).append(x)
    image = []
    for Z in L1.labels:
        pts = [x for y in Z.points for x in fibre.get(y, ())]
        image.append(L0.index_of(Z.attrs, pts))
    return LatticeMorphism(L1, L0, image)


def embedding_from_cover(psi: PMorphism, cap: int = DEFAULT_LATTICE_CAP) -> LatticeMorphism:
    """Verified bound-preserving embedding ``L(F) → R(X, A)`` from a surjective cover.

    The cover's source is uniformized first; the relational lattice is the
    one on ``|X|`` values where X is the widest component.
    """
    from .relational import relational_lattice

    U = psi.source
    if not isinstance(U, ProductFrame):
        raise InvalidPMorphism("cover must start at a product frame")
    if not psi.is_surjective():
        raise NotSurjective("cover misses some worlds")
    v = psi.validate()
    if not v:
        raise InvalidPMorphism(v.reason)
    V, p = uniformize(U)
    cover = p.then(psi)
    X = next(iter(V.components.values()))
    pos = {x: i for i, x in enumerate(X)}
    # rename V's worlds to value-index tuples so L(V) is literally R(|X|, A)
    W = uniform_product_frame(V.actions, len(X))
    cover = PMorphism(W, psi.target, {tuple(pos[c] for c in w): y for w, y in cover.mapping.items()})
    R = relational_lattice(len(X), V.actions, cap=cap)
    emb = lattice_of_pmorphism(cover, source_lattice=R, cap=cap)
    emb.check_embedding()
    if not emb.preserves_bounds():
        raise MethodDisagreement("cover-induced embedding does not preserve bounds")
    return emb
