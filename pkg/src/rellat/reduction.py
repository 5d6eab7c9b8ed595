"""From bound-preserving embeddings into relational lattices back to covers.

Also a direct search for surjective p-morphisms from uniform product frames
and the frame of consistent atom triples of a finite relation algebra.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

import numpy as np

from .errors import (
    EmptyF0,
    FrameNotFull,
    FrameNotRooted,
    FrameNotS4,
    InvalidAtomStructure,
    LIsBoolean,
    MethodDisagreement,
    NotAnEmbedding,
    NotAtomistic,
    NotBoundPreserving,
    SizeCapExceeded,
)
from .frame_lattice import DEFAULT_LATTICE_CAP, SetLattice, lattice_of_frame
from .frames import (
    DEFAULT_PRODUCT_CAP,
    Frame,
    FrameProperties,
    PMorphism,
    ProductFrame,
    frame_properties,
    uniform_product_frame,
)
from .order_core import FiniteLattice, LatticeMorphism, ji_profile, left_adjoint
from .relational import RelationalLattice, normalize_embedding
from .ultrametric import UltraSpace, check_axioms, is_pairwise_complete, lattice_of_space, represent


def _is_boolean(L: FiniteLattice) -> bool:
    # finite lattice with every ji join-prime is distributive; atomistic + distributive is Boolean
    prof = ji_profile(L)
    return prof.is_atomistic and set(prof.join_primes) == set(prof.jis)


@dataclass
class ReducedSpace:
    """The space ``(F₀, δ_A)`` cut out of ``D^B`` by the left adjoint μ of an embedding."""

    lattice: FiniteLattice
    embedding: LatticeMorphism
    mu: np.ndarray
    attrs: tuple            # join-primes of L (indices), in index order
    points: tuple           # F₀, tuples of D^B in tuple order
    space: UltraSpace       # over attribute labels L.labels[a]
    mu_point: dict = field(default_factory=dict)   # f ∈ F₀ ↦ μ({f})


def reduced_space(L: FiniteLattice, j: LatticeMorphism) -> ReducedSpace:
    R = j.target
    if not isinstance(R, RelationalLattice):
        raise NotAnEmbedding("target must be a relational lattice")
    if not j.is_embedding():
        raise NotAnEmbedding("map is not a lattice embedding")
    if not j.preserves_bounds():
        raise NotBoundPreserving("embedding must preserve ⊥ and ⊤")
    prof = ji_profile(L)
    if not prof.is_atomistic:
        raise NotAtomistic("lattice is not atomistic")
    if _is_boolean(L):
        raise LIsBoolean("lattice is a Boolean algebra")
    mu = left_adjoint(j)
    primes = set(prof.join_primes)
    jis = set(prof.jis)

    attr_atom = {b: R.index_of([b], []) for b in R.attrs}
    point_atom = {f: R.index_of([], [f]) for f in R.points}
    for b, x in attr_atom.items():
        if int(mu[x]) not in primes:
            raise MethodDisagreement(f"μ({b}) is not join-prime")
    images = {int(mu[x]) for x in attr_atom.values()} | {int(mu[x]) for x in point_atom.values()}
    if not jis <= images:
        raise MethodDisagreement("some join-irreducible has no atom preimage")

    for g, x in point_atom.items():
        mg = int(mu[x])
        if mg in jis:
            continue
        if not any(_jreducible_witness(L, R, mu, g, h, attr_atom, point_atom, primes)
                   for h in R.points):
            raise MethodDisagreement(f"no interpolating h for join-reducible μ({g})")

    F0 = tuple(f for f in R.points if int(mu[point_atom[f]]) in jis - primes)
    if not F0:
        raise EmptyF0("no tuple is sent to a non-join-prime join-irreducible")
    attrs = tuple(sorted(primes))
    pos = {a: k for k, a in enumerate(attrs)}
    bmask = {b: 1 << pos[int(mu[attr_atom[b]])] for b in R.attrs}
    n = len(F0)
    d = np.zeros((n, n), dtype=np.int64)
    for p, f in enumerate(F0):
        for q, g in enumerate(F0):
            m = 0
            for k, b in enumerate(R.attrs):
                if f[k] != g[k]:
                    m |= bmask[b]
            d[p, q] = m
    space = UltraSpace([L.labels[a] for a in attrs], F0, d)
    check_axioms(space)
    if not is_pairwise_complete(space):
        raise MethodDisagreement("reduced space is not pairwise complete")
    return ReducedSpace(L, j, mu, attrs, F0, space, {f: int(mu[point_atom[f]]) for f in F0})


def _jreducible_witness(L, R, mu, g, h, attr_atom, point_atom, primes) -> bool:
    mh = int(mu[point_atom[h]])
    if mh not in L.lower_cover_of or mh in primes:
        return False
    diff = [b for k, b in enumerate(R.attrs) if g[k] != h[k]]
    rhs = L.join_all([int(mu[attr_atom[b]]) for b in diff] + [mh])
    return rhs == int(mu[point_atom[g]])


def regularize_embedding(L: FiniteLattice, j: LatticeMorphism):
    """Embedding ``j'(l) = {x ∈ A ∪ F₀ | ν(x) ≤ l}`` into the lattice of the reduced space.

    Returns ``(j', ν, reduced)`` where ν maps each ground element of the
    reduced space (attribute label or tuple) to an element index of L.
    """
    rs = reduced_space(L, j)
    M = lattice_of_space(rs.space, cap=max(DEFAULT_LATTICE_CAP, 4 * L.n))
    nu = {L.labels[a]: a for a in rs.attrs}
    nu.update(rs.mu_point)
    image = []
    for l in range(L.n):
        attrs = [L.labels[a] for a in rs.attrs if L.leq[a, l]]
        pts = [f for f in rs.points if L.leq[rs.mu_point[f], l]]
        image.append(M.index_of(attrs, pts))
    jr = LatticeMorphism(L, M, image)
    if not jr.is_embedding() or not jr.preserves_bounds():
        raise MethodDisagreement("regularized map is not a bound-preserving embedding")
    if set(nu.values()) != set(L.jis):
        raise MethodDisagreement("ν is not onto the join-irreducibles")
    return jr, nu, rs


# ---------------------------------------------------------------- extraction

def _require_cover_hypotheses(F: Frame) -> FrameProperties:
    props = frame_properties(F)
    if not props.s4:
        raise FrameNotS4("frame is not S4")
    if not props.rooted:
        raise FrameNotRooted("frame is not rooted")
    if not props.full:
        raise FrameNotFull("frame is not full")
    return props


def extract_pmorphism(F: Frame, j: LatticeMorphism, cap: int = DEFAULT_LATTICE_CAP):
    """Surjective p-morphism from a universal product frame onto F.

    ``j`` is any lattice embedding of ``L(F)`` into a relational lattice;
    bounds are normalized first. Returns ``(U, ψ)``.
    """
    _require_cover_hypotheses(F)
    L = j.source
    LF = L if isinstance(L, SetLattice) and L.attrs == F.actions and L.points == F.worlds \
        else lattice_of_frame(F, cap)
    if LF is not L and not L.same_as(LF):
        raise NotAnEmbedding("embedding does not start at the lattice of the frame")
    if not j.is_embedding():
        raise NotAnEmbedding("map is not a lattice embedding")
    if not j.preserves_bounds():
        _, j = normalize_embedding(L, j)
    if _is_boolean(L):
        # 2-element L(F): F is a single world
        U = ProductFrame({a: (0,) for a in F.actions})
        psi = PMorphism(U, F, {w: F.worlds[0] for w in U.worlds})
        return U, psi
    rs = reduced_space(L, j)
    action_of = {}
    for a in rs.attrs:
        Z = L.labels[a]
        if Z.points or len(Z.attrs) != 1:
            raise MethodDisagreement(f"join-prime {Z} is not an action singleton")
        action_of[L.labels[a]] = next(iter(Z.attrs))
    space = UltraSpace([action_of[x] for x in rs.space.attrs], rs.space.points, rs.space.dist)
    rep = represent(space)
    if not rep.surjective:
        raise MethodDisagreement("reduced space is not a full section space")
    fibers = {a: rep.section.fibers.get(a, (0,)) for a in F.actions}
    U = ProductFrame(fibers)
    world_of = {}
    for f in rs.points:
        Z = L.labels[rs.mu_point[f]]
        if Z.attrs or len(Z.points) != 1:
            raise MethodDisagreement(f"μ({f}) is not a world singleton")
        world_of[rep.mapping[f]] = next(iter(Z.points))
    order = [a for a in space.attrs]
    mapping = {}
    for u in U.worlds:
        key = tuple(u[F.actions.index(a)] for a in order)
        mapping[u] = world_of[key]
    psi = PMorphism(U, F, mapping)
    v = psi.validate()
    if not v or not psi.is_surjective():
        raise MethodDisagreement(f"extracted map is not a surjective p-morphism: {v.reason}")
    return U, psi


# ---------------------------------------------------------------- direct search

@dataclass(frozen=True)
class CoverResult:
    found: bool
    k: int | None = None
    frame: ProductFrame | None = None
    pmorphism: PMorphism | None = None
    reason: str = ""

    def __bool__(self):
        return self.found


def _equivalence_relations(F: Frame) -> bool:
    for k in range(len(F.actions)):
        R = F.adj[k]
        if not R.diagonal().all() or (R != R.T).any():
            return False
        if ((R.astype(np.int64) @ R.astype(np.int64) > 0) & ~R).any():
            return False
    return True


def cover_search(F: Frame, max_component: int, cap: int = DEFAULT_PRODUCT_CAP) -> CoverResult:
    """First surjective p-morphism ``{0..k-1}^A → F`` for k = 1..max_component.

    Worlds of the product are assigned in tuple order and candidate images in
    world order of F. Forth is checked on every assignment; back when an
    a-line is complete (its image must be a whole R_a-class); surjectivity is
    pruned by counting unassigned worlds.
    """
    if not _equivalence_relations(F):
        return CoverResult(False, reason="some relation is not an equivalence")
    n_act = len(F.actions)
    nX = len(F.worlds)
    if nX == 0:
        return CoverResult(False, reason="frame has no worlds")
    cls = [[frozenset(np.flatnonzero(F.adj[a][x]).tolist()) for x in range(nX)] for a in range(n_act)]
    for k in range(1, max_component + 1):
        N = k ** n_act
        if N > cap:
            raise SizeCapExceeded(f"product with {N} worlds exceeds cap {cap}")
        if N < nX:
            continue
        U = uniform_product_frame(F.actions, k, cap)
        coords = U.coords
        stride = [k ** (n_act - 1 - a) for a in range(n_act)]
        # members of the a-line through each world, and whether t is the line's last member
        lines = []
        for a in range(n_act):
            per = []
            for t in range(N):
                base = t - coords[t, a] * stride[a]
                per.append([base + i * stride[a] for i in range(k)])
            lines.append(per)
        img = [-1] * N
        hits = [0] * nX

        def ok_forth(t, x):
            for a in range(n_act):
                for s in lines[a][t]:
                    if s < t and not F.adj[a][x, img[s]]:
                        return False
            return True

        def ok_back(t):
            for a in range(n_act):
                line = lines[a][t]
                if line[-1] == t and {img[s] for s in line} != cls[a][img[t]]:
                    return False
            return True

        def search(t, missing):
            if missing > N - t:
                return False
            if t == N:
                return missing == 0
            for x in range(nX):
                if not ok_forth(t, x):
                    continue
                img[t] = x
                hits[x] += 1
                if ok_back(t) and search(t + 1, missing - (hits[x] == 1)):
                    return True
                hits[x] -= 1
                img[t] = -1
            return False

        if search(0, nX):
            psi = PMorphism(U, F, {w: F.worlds[img[t]] for t, w in enumerate(U.worlds)})
            v = psi.validate()
            if not v or not psi.is_surjective():
                raise MethodDisagreement(f"search produced an invalid cover: {v.reason}")
            return CoverResult(True, k, U, psi)
    return CoverResult(False, reason=f"no cover with components up to {max_component}")


# ---------------------------------------------------------------- relation algebras

@dataclass(frozen=True)
class RelAlgAtoms:
    """Atom structure of a finite relation algebra.

    ``comp[(x, y)]`` is the set of atoms below ``x ; y``.
    """

    atoms: tuple
    identity_atoms: frozenset
    converse: Mapping
    comp: Mapping

    def allowed(self, t0, t1, t2) -> bool:
        """``t2˘ ≤ t0 ; t1``."""
        return self.converse[t2] in self.comp.get((t0, t1), ())

    def validate(self) -> "RelAlgAtoms":
        atoms = set(self.atoms)
        if not set(self.identity_atoms) <= atoms:
            raise InvalidAtomStructure("identity atoms must be atoms")
        if set(self.converse) != atoms or not set(self.converse.values()) <= atoms:
            raise InvalidAtomStructure("converse must be a map on the atoms")
        for x in self.atoms:
            if self.converse[self.converse[x]] != x:
                raise InvalidAtomStructure(f"converse is not an involution at {x!r}")
        for (x, y), zs in self.comp.items():
            if x not in atoms or y not in atoms or not set(zs) <= atoms:
                raise InvalidAtomStructure(f"composition entry ({x!r}, {y!r}) uses unknown atoms")
        c = self.converse
        for x, y, z in product(self.atoms, repeat=3):
            a = self.allowed(x, y, z)
            if a != self.allowed(y, z, x) or a != self.allowed(c[z], c[y], c[x]):
                raise InvalidAtomStructure(f"cycle law fails at ({x!r}, {y!r}, {z!r})")
        return self


def ra_frame(ra: RelAlgAtoms) -> Frame:
    """Worlds are allowed triples; ``t R_i t'`` iff they agree at coordinate i."""
    ra.validate()
    worlds = [t for t in product(ra.atoms, repeat=3) if ra.allowed(*t)]
    if not worlds:
        raise InvalidAtomStructure("no consistent triple")
    rel = {i: [(s, t) for s in worlds for t in worlds if s[i] == t[i]] for i in range(3)}
    return Frame((0, 1, 2), worlds, rel)


def two_atom_algebra() -> RelAlgAtoms:
    """Atoms e (identity) and d = d˘ with ``d ; d = e + d``."""
    comp = {("e", "e"): {"e"}, ("e", "d"): {"d"}, ("d", "e"): {"d"}, ("d", "d"): {"e", "d"}}
    return RelAlgAtoms(("e", "d"), frozenset({"e"}), {"e": "e", "d": "d"},
                       {k: frozenset(v) for k, v in comp.items()})
