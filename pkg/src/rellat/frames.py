"""Multimodal frames, p-morphisms and universal S5 product frames."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Hashable, Iterable, Mapping

import numpy as np

from .errors import (
    DomainMismatch,
    EmptyComponent,
    SizeCapExceeded,
    UnknownAction,
    UnknownWorld,
)
from .order_core import Verdict, transitive_closure

DEFAULT_PRODUCT_CAP = 10 ** 6


class Frame:
    """An A-multimodal frame: worlds plus one binary relation per action.

    Worlds and actions keep their declaration order; that order fixes all
    indexing, so everything derived from a frame is reproducible.
    """

    def __init__(self, actions: Iterable[Hashable], worlds: Iterable[Hashable],
                 rel: Mapping[Hashable, Iterable[tuple]]):
        self.actions = tuple(actions)
        self.worlds = tuple(worlds)
        self.world_index = {w: i for i, w in enumerate(self.worlds)}
        self.action_index = {a: i for i, a in enumerate(self.actions)}
        if len(self.world_index) != len(self.worlds) or len(self.action_index) != len(self.actions):
            raise ValueError("duplicate world or action")
        n = len(self.worlds)
        adj = np.zeros((len(self.actions), n, n), dtype=bool)
        for a, pairs in rel.items():
            if a not in self.action_index:
                raise UnknownAction(f"unknown action {a!r}")
            k = self.action_index[a]
            for x, y in pairs:
                for w in (x, y):
                    if w not in self.world_index:
                        raise UnknownWorld(f"unknown world {w!r} in relation {a!r}")
                adj[k, self.world_index[x], self.world_index[y]] = True
        adj.flags.writeable = False
        self.adj = adj
        self._reach = {}

    def __repr__(self):
        return f"Frame(actions={len(self.actions)}, worlds={len(self.worlds)})"

    def rel(self, a) -> frozenset:
        k = self.action_index[a]
        return frozenset((self.worlds[i], self.worlds[j]) for i, j in np.argwhere(self.adj[k]))

    def relations(self) -> dict:
        return {a: self.rel(a) for a in self.actions}

    def related(self, a, x, y) -> bool:
        return bool(self.adj[self.action_index[a], self.world_index[x], self.world_index[y]])

    def attrs_mask(self, alpha: Iterable) -> int:
        m = 0
        for a in alpha:
            if a not in self.action_index:
                raise UnknownAction(f"unknown action {a!r}")
            m |= 1 << self.action_index[a]
        return m

    def reach(self, alpha_mask: int) -> np.ndarray:
        """``reach[x, y]`` iff there is an α-path from x to y."""
        if alpha_mask not in self._reach:
            n = len(self.worlds)
            adj = np.zeros((n, n), dtype=bool)
            for k in range(len(self.actions)):
                if alpha_mask >> k & 1:
                    adj |= self.adj[k]
            r = transitive_closure(adj)
            r.flags.writeable = False
            self._reach[alpha_mask] = r
        return self._reach[alpha_mask]

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self.actions)) - 1


@dataclass(frozen=True)
class FrameProperties:
    s4: bool
    rooted: bool
    full: bool
    root_witness: Hashable = None
    full_witnesses: dict = None


def frame_properties(F: Frame) -> FrameProperties:
    n = len(F.worlds)
    s4 = all(F.adj[k].diagonal().all() and
             not ((F.adj[k].astype(np.int64) @ F.adj[k].astype(np.int64) > 0) & ~F.adj[k]).any()
             for k in range(len(F.actions)))
    r = F.reach(F.full_mask)
    roots = np.flatnonzero(r.all(axis=1))
    rooted = len(roots) > 0
    witnesses = {}
    for k, a in enumerate(F.actions):
        off = F.adj[k] & ~np.eye(n, dtype=bool)
        if off.any():
            i, j = np.argwhere(off)[0]
            witnesses[a] = (F.worlds[i], F.worlds[j])
    full = len(witnesses) == len(F.actions)
    return FrameProperties(
        s4=bool(s4),
        rooted=bool(rooted),
        full=full,
        root_witness=F.worlds[roots[0]] if rooted else None,
        full_witnesses=witnesses if full else None,
    )


def is_s5(F: Frame) -> bool:
    """Every relation is an equivalence."""
    return frame_properties(F).s4 and all((F.adj[k] == F.adj[k].T).all() for k in range(len(F.actions)))


def alpha_reachable(F: Frame, x, alpha: Iterable) -> frozenset:
    """Worlds reachable from x by an α-path (x itself included)."""
    r = F.reach(F.attrs_mask(alpha))
    return frozenset(F.worlds[j] for j in np.flatnonzero(r[F.world_index[x]]))


def build_frame(actions, worlds, rel) -> Frame:
    return Frame(actions, worlds, rel)


# ---------------------------------------------------------------- p-morphisms

@dataclass(frozen=True)
class PMorphism:
    source: Frame
    target: Frame
    mapping: Mapping

    def __call__(self, x):
        return self.mapping[x]

    def is_surjective(self) -> bool:
        return set(self.mapping.values()) == set(self.target.worlds)

    def then(self, other: "PMorphism") -> "PMorphism":
        """Composite ``other ∘ self``."""
        return PMorphism(self.source, other.target, {x: other(y) for x, y in self.mapping.items()})

    def validate(self) -> Verdict:
        return validate_pmorphism(self.mapping, self.source, self.target)


def validate_pmorphism(psi: Mapping, F0: Frame, F1: Frame) -> Verdict:
    """Check the forth and back conditions for every action.

    The witness names the failing clause: ``("forth", a, x, y)`` or
    ``("back", a, x, z)``.
    """
    if set(F0.actions) != set(F1.actions):
        raise DomainMismatch("frames have different action sets")
    if set(psi) != set(F0.worlds):
        raise DomainMismatch("map must be total on the source worlds")
    if not set(psi.values()) <= set(F1.worlds):
        raise DomainMismatch("map leaves the target worlds")
    img = np.array([F1.world_index[psi[w]] for w in F0.worlds], dtype=np.intp)
    for a in F0.actions:
        A0 = F0.adj[F0.action_index[a]]
        A1 = F1.adj[F1.action_index[a]]
        bad = A0 & ~A1[np.ix_(img, img)]
        if bad.any():
            i, j = np.argwhere(bad)[0]
            return Verdict(False, ("forth", a, F0.worlds[i], F0.worlds[j]),
                           f"{F0.worlds[i]} R_{a} {F0.worlds[j]} but images are not related")
        # back: for x and z with ψ(x) R_a z, some successor of x maps to z
        hit = (A0.astype(np.int64) @ np.eye(len(F1.worlds), dtype=np.int64)[img]) > 0
        need = A1[img]
        miss = need & ~hit
        if miss.any():
            i, z = np.argwhere(miss)[0]
            return Verdict(False, ("back", a, F0.worlds[i], F1.worlds[z]),
                           f"ψ({F0.worlds[i]}) R_{a} {F1.worlds[z]} has no lift")
    return Verdict(True)


# ---------------------------------------------------------------- product frames

class ProductFrame(Frame):
    """Universal S5^A-product: tuples, R_a changes only coordinate a."""

    def __init__(self, components: Mapping[Hashable, Iterable[Hashable]], cap: int = DEFAULT_PRODUCT_CAP):
        comps = {a: tuple(xs) for a, xs in components.items()}
        for a, xs in comps.items():
            if not xs:
                raise EmptyComponent(f"component {a!r} is empty")
        size = int(np.prod([len(xs) for xs in comps.values()], dtype=object)) if comps else 1
        if size > cap:
            raise SizeCapExceeded(f"product has {size} worlds (cap {cap})")
        self.components = comps
        actions = tuple(comps)
        worlds = list(product(*comps.values()))
        # build relations through coordinates directly
        super().__init__(actions, worlds, {})
        n = len(worlds)
        coords = np.array([[comps[a].index(w[k]) for k, a in enumerate(actions)] for w in worlds],
                          dtype=np.intp).reshape(n, len(actions))
        adj = np.zeros((len(actions), n, n), dtype=bool)
        for k in range(len(actions)):
            others = [i for i in range(len(actions)) if i != k]
            same = np.ones((n, n), dtype=bool)
            for i in others:
                same &= coords[:, i][:, None] == coords[:, i][None, :]
            adj[k] = same
        adj.flags.writeable = False
        self.adj = adj
        self.coords = coords


def universal_product_frame(components: Mapping, cap: int = DEFAULT_PRODUCT_CAP) -> ProductFrame:
    return ProductFrame(components, cap)


def uniform_product_frame(actions: Iterable, size: int, cap: int = DEFAULT_PRODUCT_CAP) -> ProductFrame:
    return ProductFrame({a: tuple(range(size)) for a in actions}, cap)


def uniformize(U: ProductFrame) -> tuple[ProductFrame, PMorphism]:
    """Uniform product on a largest component with a surjective p-morphism onto U.

    The widest component (first in action order on ties) is used for every
    coordinate; each ``p_a`` is the identity on the shared prefix and sends
    the remaining positions to the last element of ``X_a``.
    """
    if not U.components:
        return U, PMorphism(U, U, {w: w for w in U.worlds})
    widest = max(U.components, key=lambda a: (len(U.components[a]), -U.actions.index(a)))
    X = U.components[widest]
    if all(len(xs) == len(X) and xs == X for xs in U.components.values()):
        return U, PMorphism(U, U, {w: w for w in U.worlds})
    V = ProductFrame({a: X for a in U.actions})
    pos = {x: i for i, x in enumerate(X)}

    def p(a, x):
        comp = U.components[a]
        return comp[min(pos[x], len(comp) - 1)]

    mapping = {w: tuple(p(a, x) for a, x in zip(U.actions, w)) for w in V.worlds}
    return V, PMorphism(V, U, mapping)
