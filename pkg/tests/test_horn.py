import pytest
from hypothesis import given, settings, strategies as st

from rellat.catalog import boolean, chain, m3, n5, small_lattices
from rellat.errors import NotSI, ParseError, SizeCapExceeded
from rellat.horn import (
    Equation, Join, Meet, Quasiequation, Var, build_phi, eval_naive, eval_quasiequation, parse_equation,
    parse_term,
)
from rellat.order_core import find_embedding, is_subdirectly_irreducible

SI_SMALL = [L for L in small_lattices(5) if is_subdirectly_irreducible(L).si]


def test_phi_chain():
    phi = build_phi(chain(2))
    assert phi.premise_count() == 8 and phi.pair == (0, 1)
    q = phi.to_quasiequation()
    assert len(q.premises) == 8 and str(q.conclusion) == "x0 = x1"


def test_phi_m3():
    phi = build_phi(m3())
    assert phi.premise_count() == 50 and len(phi.variables) == 5
    assert phi.pair == is_subdirectly_irreducible(m3()).monolith_pair


def test_phi_not_si():
    with pytest.raises(NotSI):
        build_phi(boolean(2))


def test_eval_examples():
    phi = build_phi(chain(2))
    assert eval_quasiequation(chain(1), phi)
    r = eval_quasiequation(chain(2), phi)
    assert not r and r.valuation == {"x0": 0, "x1": 1}


@pytest.mark.parametrize("L", SI_SMALL, ids=lambda L: f"L{L.n}")
@pytest.mark.parametrize("K", small_lattices(4) + [m3(), n5()], ids=lambda K: f"K{K.n}")
def test_table_eval_matches_naive_scan(L, K):
    phi = build_phi(L)
    fast, slow = eval_quasiequation(K, phi), eval_naive(K, phi)
    assert fast.holds == slow.holds
    assert fast.holds == (find_embedding(L, K) is None)


def test_naive_cap():
    with pytest.raises(SizeCapExceeded):
        eval_naive(boolean(3), build_phi(m3()), cap=1000)


def value(t, K, v):
    if isinstance(t, Var):
        return v[t.name]
    table = K.meet if isinstance(t, Meet) else K.join
    return table[value(t.left, K, v), value(t.right, K, v)]


terms = st.recursive(st.sampled_from(["x", "y", "z"]).map(Var),
                     lambda t: st.one_of(st.builds(Meet, t, t), st.builds(Join, t, t)), max_leaves=6)


@settings(max_examples=100, deadline=None)
@given(terms, terms, terms, terms)
def test_general_quasiequation_eval(a, b, c, d):
    q = Quasiequation(("x", "y", "z"), (Equation(a, b),), Equation(c, d))
    for K in (chain(3), m3(), n5()):
        fast, slow = eval_quasiequation(K, q), eval_naive(K, q)
        assert fast.holds == slow.holds
        if not fast.holds:
            v = fast.valuation
            assert all(value(e.lhs, K, v) == value(e.rhs, K, v) for e in q.premises)
            assert value(c, K, v) != value(d, K, v)


@settings(max_examples=100, deadline=None)
@given(terms)
def test_term_text_round_trip(t):
    assert parse_term(str(t)) == t


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_term("(meet x)")
    with pytest.raises(ParseError):
        parse_term("(nand x y)")
    with pytest.raises(ParseError):
        parse_equation("x = y = z")
    with pytest.raises(ParseError):
        Quasiequation(("x",), (), Equation(Var("x"), Var("y")))


def test_distributive_law_as_quasiequation():
    # x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z) with no premises: fails exactly on the non-distributive ones
    x, y, z = Var("x"), Var("y"), Var("z")
    q = Quasiequation(("x", "y", "z"), (), Equation(Meet(x, Join(y, z)), Join(Meet(x, y), Meet(x, z))))
    assert eval_quasiequation(boolean(3), q)
    assert not eval_quasiequation(m3(), q)
    assert not eval_quasiequation(n5(), q)
