"""Relational lattices R(D, A) as pairs (α, Y) with Y α-closed.

Tuples are functions ``A → {0..|D|-1}`` written as Python tuples in the
attribute order of the lattice.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Hashable, Sequence

import numpy as np

from .errors import (
    MethodDisagreement,
    NoInjectiveComponent,
    NotAnEmbedding,
    NotASubset,
    NotAtomistic,
    NotSI,
    NotTopPreserving,
    SizeCapExceeded,
)
from .frame_lattice import DEFAULT_LATTICE_CAP, FrameSubset, SetLattice
from .order_core import (
    FiniteLattice,
    LatticeMorphism,
    is_subdirectly_irreducible,
    ji_profile,
    principal_ideal,
    quotient_by_dclosed,
)

RelationalElement = FrameSubset


def relational_count(domain_size: int, n_attrs: int) -> int:
    """``Σ_α 2^(|D|^|A∖α|)``: one free choice per α-class of tuples."""
    from math import comb
    return sum(comb(n_attrs, k) * 2 ** (domain_size ** (n_attrs - k)) for k in range(n_attrs + 1))


class RelationalLattice(SetLattice):
    def __init__(self, domain_size: int, attrs: Sequence[Hashable], masks, closure):
        self.domain_size = domain_size
        tuples = list(product(range(domain_size), repeat=len(attrs)))
        super().__init__(attrs, tuples, masks, closure=closure)

    def __repr__(self):
        return f"RelationalLattice(D={self.domain_size}, A={list(self.attrs)}, n={self.n})"

    def ball(self, f: tuple, alpha) -> frozenset:
        """``B(f, α)``: tuples differing from f only inside α."""
        keep = [i for i, a in enumerate(self.attrs) if a not in set(alpha)]
        return frozenset(g for g in self.points if all(g[i] == f[i] for i in keep))


def _class_masks(domain_size: int, n_attrs: int, alpha: int) -> list[int]:
    """Point masks of the classes of "agree outside α"."""
    tuples = list(product(range(domain_size), repeat=n_attrs))
    keep = [i for i in range(n_attrs) if not alpha >> i & 1]
    classes = {}
    for p, t in enumerate(tuples):
        key = tuple(t[i] for i in keep)
        classes[key] = classes.get(key, 0) | (1 << p)
    return list(classes.values())


def relational_lattice(domain_size: int, attrs: Sequence[Hashable], cap: int = DEFAULT_LATTICE_CAP) -> RelationalLattice:
    attrs = tuple(attrs)
    size = relational_count(domain_size, len(attrs))
    if size > cap:
        raise SizeCapExceeded(f"R({domain_size},{len(attrs)}) has {size} elements (cap {cap})")
    return _relational_lattice(domain_size, attrs)


@lru_cache(maxsize=64)
def _relational_lattice(domain_size: int, attrs: tuple) -> RelationalLattice:
    k = len(attrs)
    per_alpha = {}
    masks = []
    for alpha in range(1 << k):
        classes = _class_masks(domain_size, k, alpha)
        owner = {}
        for c in classes:
            rest = c
            while rest:
                b = rest & -rest
                owner[b.bit_length() - 1] = c
                rest ^= b
        per_alpha[alpha] = owner
        for bits in product((0, 1), repeat=len(classes)):
            y = 0
            for c, on in zip(classes, bits):
                if on:
                    y |= c
            masks.append(alpha | (y << k))

    full = (1 << k) - 1

    def close(mask: int) -> int:
        alpha = mask & full
        owner = per_alpha[alpha]
        pts = mask >> k
        out = 0
        while pts:
            b = pts & -pts
            out |= owner[b.bit_length() - 1]
            pts ^= b
        return alpha | (out << k)

    return RelationalLattice(domain_size, attrs, masks, close)


def is_alpha_closed(R: RelationalLattice, alpha, Y) -> bool:
    Y = set(Y)
    return all(R.ball(f, alpha) <= Y for f in Y)


# ---------------------------------------------------------------- ψ_{A,B}

def _restriction(RA: RelationalLattice, RB: RelationalLattice):
    if RA.domain_size != RB.domain_size:
        raise NotASubset("lattices have different domains")
    if not set(RB.attrs) <= set(RA.attrs):
        raise NotASubset(f"{list(RB.attrs)} is not a subset of {list(RA.attrs)}")
    return [RA.attrs.index(b) for b in RB.attrs]


def psi_projection(RA: RelationalLattice, RB: RelationalLattice, e: int) -> int:
    """``ψ_{A,B}(α, X) = (α ∩ B, X↾B)``."""
    pos = _restriction(RA, RB)
    E = RA.labels[e]
    return RB.index_of(E.attrs & set(RB.attrs), {tuple(f[i] for i in pos) for f in E.points})


def adjoint_section(RA: RelationalLattice, RB: RelationalLattice, e: int) -> int:
    """``(β, Y) ↦ (β ∪ (A∖B), {f | f↾B ∈ Y})``."""
    pos = _restriction(RA, RB)
    E = RB.labels[e]
    attrs = set(E.attrs) | (set(RA.attrs) - set(RB.attrs))
    pts = [f for f in RA.points if tuple(f[i] for i in pos) in E.points]
    return RA.index_of(attrs, pts)


def psi_map(RA: RelationalLattice, RB: RelationalLattice) -> np.ndarray:
    return np.array([psi_projection(RA, RB, e) for e in range(RA.n)], dtype=np.intp)


def section_map(RA: RelationalLattice, RB: RelationalLattice) -> np.ndarray:
    return np.array([adjoint_section(RA, RB, e) for e in range(RB.n)], dtype=np.intp)


# ---------------------------------------------------------------- normalization

def _check_embedding(i: LatticeMorphism):
    if not i.is_embedding():
        raise NotAnEmbedding("input map is not a lattice embedding")


def _restrict_to_alpha(M: FiniteLattice, R: RelationalLattice, alpha: tuple):
    """``R(D, α)`` and the indices there of the elements of a quotient ``M_{A_f}``."""
    pos = [R.attrs.index(a) for a in alpha]
    target = relational_lattice(R.domain_size, alpha, cap=max(DEFAULT_LATTICE_CAP, M.n))
    out = []
    for E in M.labels:
        out.append(target.index_of(E.attrs, {tuple(f[i] for i in pos) for f in E.points}))
    return target, out


def normalize_top(L: FiniteLattice, i: LatticeMorphism):
    """Turn an embedding ``L → R(D, A)`` into a ⊤-preserving one into ``R(D, α)``.

    With ``i(⊤) = (α, Y)``, each tuple f in Y gives the D-closed set
    ``α ∪ B(f, α)`` of the ideal below ``i(⊤)``; the first f (in tuple
    order) whose quotient is injective on the image of L is used.
    Returns ``(α, embedding)``.
    """
    R = i.target
    _check_embedding(i)
    if not is_subdirectly_irreducible(L).si:
        raise NotSI("lattice is not subdirectly irreducible")
    if i(L.top) == R.top:
        return tuple(R.attrs), i
    T = R.labels[i(L.top)]
    alpha = tuple(a for a in R.attrs if a in T.attrs)
    if not T.points:
        # image inside the Boolean lattice of attribute sets: L distributive and SI,
        # so it is the 2-element chain
        if L.n != 2:
            raise MethodDisagreement("tuple-free top image for a lattice that is not 2-element")
        target = relational_lattice(R.domain_size, alpha)
        return alpha, LatticeMorphism(L, target, [target.bottom if x == L.bottom else target.top
                                                  for x in range(L.n)])
    M = principal_ideal(R, i(L.top))
    parent = {p: k for k, p in enumerate(M.parent_index)}
    into_M = LatticeMorphism(L, M, [parent[int(x)] for x in i.mapping])
    atom_of_attr = [parent[R.index_of([a], [])] for a in alpha]
    for f in sorted(T.points):
        S = atom_of_attr + [parent[R.index_of([], [g])] for g in sorted(R.ball(f, alpha))]
        MS, pi = quotient_by_dclosed(M, S)
        comp = into_M.then(pi)
        if comp.is_injective():
            target, idx = _restrict_to_alpha(MS, R, alpha)
            emb = LatticeMorphism(L, target, [idx[int(x)] for x in comp.mapping])
            _check_embedding(emb)
            if not emb.preserves_top():
                raise MethodDisagreement("normalized embedding misses the top")
            return alpha, emb
    raise NoInjectiveComponent("no injective component found for a subdirectly irreducible lattice")


def normalize_bot(L: FiniteLattice, i: LatticeMorphism):
    """Turn a ⊤-preserving embedding into a bound-preserving one into ``R(D, B)``.

    Returns ``(B, embedding)``.
    """
    R = i.target
    _check_embedding(i)
    if not is_subdirectly_irreducible(L).si:
        raise NotSI("lattice is not subdirectly irreducible")
    if not ji_profile(L).is_atomistic:
        raise NotAtomistic("lattice is not atomistic")
    if i(L.top) != R.top:
        raise NotTopPreserving("embedding must preserve the top")
    if i(L.bottom) == R.bottom:
        return tuple(R.attrs), i
    bottom = R.labels[i(L.bottom)]
    B = tuple(a for a in R.attrs if a not in bottom.attrs)
    RB = relational_lattice(R.domain_size, B, cap=max(DEFAULT_LATTICE_CAP, R.n))
    psi = psi_map(R, RB)
    j = LatticeMorphism(L, RB, psi[i.mapping])
    _check_embedding(j)
    jb = RB.labels[j(L.bottom)]
    if jb.points:
        if L.n != 2:
            raise MethodDisagreement("bottom image has tuples but the lattice is not 2-element")
        j = LatticeMorphism(L, RB, [RB.bottom if x == L.bottom else RB.top for x in range(L.n)])
    if not j.preserves_bounds():
        raise MethodDisagreement("normalized embedding does not preserve bounds")
    return B, j


def normalize_embedding(L: FiniteLattice, i: LatticeMorphism):
    """Both normalization steps; returns ``(B, bound-preserving embedding)``."""
    _, top = normalize_top(L, i)
    return normalize_bot(L, top)


# ---------------------------------------------------------------- ideal/filter lifts

def ideal_lift(R: RelationalLattice, extra: Hashable, value: int = 0, cap: int = DEFAULT_LATTICE_CAP):
    """Embedding ``R(D, A) → R(D, A + extra)`` onto the ideal where ``extra`` is fixed.

    ``(α, Y) ↦ (α, {f | f↾A ∈ Y, f(extra) = value})``. Preserves ⊥ but not ⊤.
    """
    big = relational_lattice(R.domain_size, tuple(R.attrs) + (extra,), cap=cap)
    image = [big.index_of(E.attrs, [f + (value,) for f in E.points]) for E in R.labels]
    return LatticeMorphism(R, big, image)


def filter_lift(R: RelationalLattice, extra: Hashable, cap: int = DEFAULT_LATTICE_CAP):
    """Embedding ``R(D, A) → R(D, A + extra)`` onto the filter above ``({extra}, ∅)``."""
    big = relational_lattice(R.domain_size, tuple(R.attrs) + (extra,), cap=cap)
    sec = section_map(big, R)
    return LatticeMorphism(R, big, sec)
