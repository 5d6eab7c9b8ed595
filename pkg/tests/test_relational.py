import random

import pytest

from rellat.catalog import boolean, chain
from rellat.errors import NotASubset, NotAtomistic, NotSI, NotTopPreserving
from rellat.frame_lattice import lattice_of_frame
from rellat.frames import uniform_product_frame
from rellat.order_core import LatticeMorphism, find_embedding, is_isomorphic, is_subdirectly_irreducible
from rellat.relational import (
    adjoint_section, filter_lift, ideal_lift, is_alpha_closed, normalize_bot, normalize_embedding,
    normalize_top, psi_map, psi_projection, relational_count, relational_lattice, section_map,
)
from rellat.ultrametric import hamming_space, lattice_of_space

import oracles

R2 = relational_lattice(2, "ab")
R1 = relational_lattice(2, "a")


@pytest.mark.parametrize("D,k", [(1, 1), (2, 1), (3, 1), (2, 2), (4, 1), (3, 2)])
def test_count_against_exhaustive_pairs(D, k):
    attrs = "abc"[:k]
    pts = oracles.all_functions(D, k)
    brute = oracles.space_closed_sets(pts, attrs, lambda f, g: oracles.hamming(f, g, attrs))
    assert relational_lattice(D, attrs).n == len(brute) == relational_count(D, k)


def test_known_sizes():
    assert R1.n == 6 and R2.n == 26
    assert relational_count(3, 2) == 530 and relational_count(2, 3) == 318


@pytest.mark.parametrize("D,k", [(d, k) for d in range(1, 9) for k in range(1, 7) if d ** k <= 64])
def test_count_formula(D, k):
    assert relational_count(D, k) == oracles.relational_count_formula(D, k)


def test_bounds():
    assert R2.labels[R2.top].attrs == {"a", "b"} and len(R2.labels[R2.top].points) == 4
    assert R2.labels[R2.bottom].attrs == frozenset() and not R2.labels[R2.bottom].points


def test_equals_space_lattice():
    assert sorted(R2.masks) == sorted(lattice_of_space(hamming_space(2, "ab")).masks)
    R3 = relational_lattice(3, "ab")
    assert sorted(R3.masks) == sorted(lattice_of_space(hamming_space(3, "ab")).masks)


def test_meet_and_join():
    for x in range(R2.n):
        for y in range(R2.n):
            X, Y = R2.labels[x], R2.labels[y]
            M = R2.labels[R2.meet[x, y]]
            assert (M.attrs, M.points) == (X.attrs & Y.attrs, X.points & Y.points)
            J = R2.labels[R2.join[x, y]]
            assert J.attrs == X.attrs | Y.attrs and X.points | Y.points <= J.points
            assert is_alpha_closed(R2, J.attrs, J.points)


# ---------------------------------------------------------------- ψ and its adjoint

def test_psi_top_and_round_trip():
    assert psi_projection(R2, R1, R2.top) == R1.top
    psi, sec = psi_map(R2, R1), section_map(R2, R1)
    assert [psi[sec[e]] for e in range(R1.n)] == list(range(R1.n))


def test_psi_example():
    e = R2.index_of("b", R2.ball((0, 0), "b"))
    out = R1.labels[psi_projection(R2, R1, e)]
    assert out.attrs == frozenset() and out.points == {(0,)}


def test_psi_adjunction():
    psi, sec = psi_map(R2, R1), section_map(R2, R1)
    for x in range(R2.n):
        for y in range(R1.n):
            assert R1.leq[psi[x], y] == R2.leq[x, sec[y]]


def test_psi_iso_on_filter():
    psi = psi_map(R2, R1)
    base = R2.index_of("b", [])
    up = [x for x in range(R2.n) if R2.leq[base, x]]
    assert sorted(psi[up]) == list(range(R1.n))
    h = LatticeMorphism(R2.sublattice(up), R1, psi[up])
    assert h.is_embedding() and h.is_surjective()


def test_psi_not_subset():
    with pytest.raises(NotASubset):
        psi_projection(R1, R2, 0)
    with pytest.raises(NotASubset):
        adjoint_section(R2, relational_lattice(3, "a"), 0)


# ---------------------------------------------------------------- normalization

def test_top_already_preserved():
    c2 = chain(2)
    i = LatticeMorphism(c2, R2, [R2.index_of("a"), R2.top])
    alpha, j = normalize_top(c2, i)
    assert j is i and alpha == ("a", "b")


def test_top_chain_into_ball():
    c2 = chain(2)
    e = R2.index_of("a", R2.ball((0, 0), "a"))
    i = LatticeMorphism(c2, R2, [R2.bottom, e])
    alpha, j = normalize_top(c2, i)
    assert alpha == ("a",)
    assert is_isomorphic(j.target, R1)
    assert j.is_embedding() and j.preserves_top()


def test_top_rejects_non_si():
    B = boolean(2)
    i = find_embedding(B, R2)
    with pytest.raises(NotSI):
        normalize_top(B, i)


def test_bot_examples():
    L = lattice_of_frame(uniform_product_frame("ab", 2))
    i = LatticeMorphism(L, R2, [R2.index_of_mask(m) for m in L.masks])
    B, j = normalize_bot(L, i)
    assert j is i and B == ("a", "b")
    # 2-chain sent to ({a}, all) < ⊤: after ψ the bottom still holds tuples
    c2 = chain(2)
    k = LatticeMorphism(c2, R2, [R2.index_of("a", R2.points), R2.top])
    B, j = normalize_bot(c2, k)
    assert j.preserves_bounds() and j.target.n == relational_lattice(2, B).n


def test_bot_needs_top():
    c2 = chain(2)
    with pytest.raises(NotTopPreserving):
        normalize_bot(c2, LatticeMorphism(c2, R2, [R2.bottom, R2.index_of("a")]))


def test_bot_needs_atomistic():
    from rellat.catalog import n5
    N = n5()
    i = find_embedding(N, R2, bound_preserving=True)
    with pytest.raises(NotAtomistic):
        normalize_bot(N, i)


def _check(L, i):
    B, j = normalize_embedding(L, i)
    assert j.is_embedding() and j.preserves_bounds()
    assert j.target.n == relational_lattice(i.target.domain_size, B).n
    return B


def test_normalize_all_two_chains_in_r2():
    c2 = chain(2)
    for x in range(R2.n):
        for y in range(R2.n):
            if R2.leq[x, y] and x != y:
                _check(c2, LatticeMorphism(c2, R2, [x, y]))


@pytest.mark.parametrize("name", ["F2", "S5sq", "chain"])
def test_normalize_lifted_embeddings(name):
    if name == "chain":
        L = chain(2)
        base = LatticeMorphism(L, R2, [R2.bottom, R2.top])
    else:
        from rellat.frame_lattice import embedding_from_cover
        from rellat.frames import Frame, PMorphism
        U = uniform_product_frame("ab", 2)
        if name == "F2":
            tot = [(x, y) for x in "xy" for y in "xy"]
            F = Frame("ab", "xy", {"a": tot, "b": tot})
            psi = PMorphism(U, F, {w: "x" if w[0] == w[1] else "y" for w in U.worlds})
        else:
            psi = PMorphism(U, U, {w: w for w in U.worlds})
        base = embedding_from_cover(psi)
        L = base.source
    assert is_subdirectly_irreducible(L).si
    for lift in (lambda R: ideal_lift(R, "c"), lambda R: filter_lift(R, "c"),
                 lambda R: ideal_lift(R, "c", value=1)):
        up = lift(base.target)
        assert up.is_embedding()
        i = base.then(up)
        _check(L, i)


def test_lifts_bounds():
    up, down = ideal_lift(R1, "b"), filter_lift(R1, "b")
    assert up.is_embedding() and up.preserves_bottom() and not up.preserves_top()
    assert down.is_embedding() and down.preserves_top() and not down.preserves_bottom()


def test_normalize_sampled_pairs_in_r3():
    R3 = relational_lattice(2, "abc")
    c2 = chain(2)
    rng = random.Random(7)
    pairs = [(x, y) for x in range(R3.n) for y in range(R3.n) if R3.leq[x, y] and x != y]
    for x, y in rng.sample(pairs, 150):
        _check(c2, LatticeMorphism(c2, R3, [x, y]))
