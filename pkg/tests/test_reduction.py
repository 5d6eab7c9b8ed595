import pytest

from rellat.catalog import chain
from rellat.errors import (FrameNotFull, FrameNotRooted, FrameNotS4, InvalidAtomStructure, LIsBoolean,
                           NotBoundPreserving)
from rellat.frame_lattice import embedding_from_cover, lattice_of_frame
from rellat.frames import Frame, PMorphism, frame_properties, uniform_product_frame
from rellat.order_core import LatticeMorphism, find_embedding, ji_profile
from rellat.reduction import (
    RelAlgAtoms, cover_search, extract_pmorphism, ra_frame, reduced_space, regularize_embedding,
    two_atom_algebra,
)
from rellat.relational import filter_lift, ideal_lift, relational_lattice
from rellat.ultrametric import is_pairwise_complete

R2 = relational_lattice(2, "ab")
U2 = uniform_product_frame("ab", 2)


def total(ws):
    return [(x, y) for x in ws for y in ws]


def loops(ws):
    return [(w, w) for w in ws]


F2 = Frame("ab", "xy", {"a": total("xy"), "b": total("xy")})
COVER = PMorphism(U2, F2, {w: "x" if w[0] == w[1] else "y" for w in U2.worlds})


def identity_embedding():
    L = lattice_of_frame(U2)
    return L, LatticeMorphism(L, R2, [R2.index_of_mask(m) for m in L.masks])


# ---------------------------------------------------------------- reduced space

def test_reduced_space_identity():
    L, j = identity_embedding()
    rs = reduced_space(L, j)
    assert set(rs.points) == set(R2.points)
    for f in rs.points:
        for g in rs.points:
            labels = {str(x) for x in rs.space.delta(f, g)}
            assert labels == {"{" + a + "|}" for a in "ab" if f["ab".index(a)] != g["ab".index(a)]}


def test_reduced_space_of_cover():
    e = embedding_from_cover(COVER)
    rs = reduced_space(e.source, e)
    worlds = {next(iter(e.source.labels[rs.mu_point[f]].points)) for f in rs.points}
    assert worlds == {"x", "y"}
    assert is_pairwise_complete(rs.space)
    for b in R2.attrs:
        assert int(rs.mu[R2.index_of([b])]) in ji_profile(e.source).join_primes


def test_reduced_space_needs_bounds():
    e = embedding_from_cover(COVER)
    lifted = e.then(ideal_lift(R2, "c"))
    with pytest.raises(NotBoundPreserving):
        reduced_space(e.source, lifted)


def test_reduced_space_boolean():
    c2 = chain(2)
    with pytest.raises(LIsBoolean):
        reduced_space(c2, LatticeMorphism(c2, R2, [R2.bottom, R2.top]))


def test_regularize():
    for L, j in (identity_embedding(), (embedding_from_cover(COVER).source, embedding_from_cover(COVER))):
        jr, nu, rs = regularize_embedding(L, j)
        assert jr.is_embedding() and jr.preserves_bounds()
        primes = set(ji_profile(L).join_primes)
        assert all(nu[f] in set(L.jis) - primes for f in rs.points)
        assert set(nu.values()) == set(L.jis)
    L, j = identity_embedding()
    jr, _, _ = regularize_embedding(L, j)
    assert jr.is_surjective()


# ---------------------------------------------------------------- extraction

def test_extract_identity_is_bijective():
    L, j = identity_embedding()
    U, psi = extract_pmorphism(U2, j)
    assert psi.validate() and psi.is_surjective()
    assert len(U.worlds) == 4 and len(set(psi.mapping.values())) == 4


def test_extract_from_cover():
    e = embedding_from_cover(COVER)
    U, psi = extract_pmorphism(F2, e)
    assert psi.validate() and psi.is_surjective()
    assert all(U.related(a, u, v) == (all(u[k] == v[k] for k in range(2) if "ab"[k] != a))
               for a in "ab" for u in U.worlds for v in U.worlds)


@pytest.mark.parametrize("lift", ["ideal", "filter"])
def test_extract_normalizes_bounds(lift):
    e = embedding_from_cover(COVER)
    up = ideal_lift(R2, "c") if lift == "ideal" else filter_lift(R2, "c")
    U, psi = extract_pmorphism(F2, e.then(up))
    assert psi.validate() and psi.is_surjective()


def test_extract_hypotheses():
    single = Frame("ab", "x", {"a": loops("x"), "b": loops("x")})
    L = lattice_of_frame(single)
    j = find_embedding(L, R2)
    with pytest.raises(FrameNotFull):
        extract_pmorphism(single, j)
    two = Frame("ab", "xy", {"a": total("xy"), "b": loops("xy")})
    with pytest.raises(FrameNotFull):
        extract_pmorphism(two, j)
    split = Frame("a", "xyzw", {"a": total("xy") + total("zw")})
    with pytest.raises(FrameNotRooted):
        extract_pmorphism(split, j)
    bad = Frame("a", "xy", {"a": [("x", "y")]})
    with pytest.raises(FrameNotS4):
        extract_pmorphism(bad, j)


# ---------------------------------------------------------------- cover search

def test_cover_search_square():
    res = cover_search(U2, 3)
    assert res and res.k == 2
    assert all(res.pmorphism(w) == w for w in U2.worlds)


def test_cover_search_two_worlds():
    res = cover_search(F2, 3)
    assert res and res.k == 2
    assert res.pmorphism.validate() and res.pmorphism.is_surjective()
    # the diagonal map passes both clauses as well
    assert COVER.validate()


def test_cover_search_non_s4():
    bad = Frame("a", "xy", {"a": [("x", "y"), ("y", "x")]})
    assert not frame_properties(bad).s4
    res = cover_search(bad, 3)
    assert not res and res.reason


def test_cover_search_preorder_not_equivalence():
    # S4 but not symmetric: no S5 product maps onto it
    F = Frame("a", "xy", {"a": loops("xy") + [("x", "y")]})
    assert frame_properties(F).s4
    assert not cover_search(F, 3)
    L = lattice_of_frame(F)
    for k in (1, 2, 3):
        assert find_embedding(L, relational_lattice(k, "a"), bound_preserving=True) is None


def test_cover_search_exhausted_consistency():
    # rooted full S5 frame x -a- y -b- z; x R_a y R_b z has no w with x R_b w R_a z,
    # and product frames (hence their p-morphic images) commute
    F = Frame("ab", "xyz", {"a": total("xy") + loops("z"), "b": total("yz") + loops("x")})
    assert not cover_search(F, 2)
    L = lattice_of_frame(F)
    assert find_embedding(L, relational_lattice(2, "ab"), bound_preserving=True) is None


# ---------------------------------------------------------------- relation algebra frame

def test_two_atom_frame():
    F = ra_frame(two_atom_algebra())
    assert set(F.worlds) == {("e", "e", "e"), ("e", "d", "d"), ("d", "e", "d"), ("d", "d", "e"),
                             ("d", "d", "d")}
    p = frame_properties(F)
    assert p.s4 and p.rooted and p.full
    assert F.related(2, ("e", "d", "d"), ("d", "e", "d"))
    for i in range(3):
        R = F.adj[i]
        assert R.diagonal().all() and (R == R.T).all()


def test_ra_validation():
    with pytest.raises(InvalidAtomStructure):
        RelAlgAtoms(("e", "d"), frozenset("e"), {"e": "e", "d": "e"}, {}).validate()


def test_boolean_lattice_has_no_reduced_space():
    R = relational_lattice(1, "ab")      # the Boolean lattice on {a, b, ()}
    with pytest.raises(LIsBoolean):
        reduced_space(R, LatticeMorphism(R, R, range(R.n)))
