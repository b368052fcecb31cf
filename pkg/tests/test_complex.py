import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from conftest import grids
from gridhfk import TREFOIL, UNKNOT, FormalChain, boundary, chain_boundary, maslov, trace_components
from gridhfk.complex import (
    all_generators,
    alexander,
    alexander2,
    check_size,
    empty_rectangles,
    enumerate_generators,
    generator_codes,
    generator_index,
    grading_table,
    hat_columns,
    jfun,
    monomial_grading,
    rectangle_table,
    rectangles,
    rectangles_in,
    rectangles_out,
)
from gridhfk.errors import LimitExceeded


def _perm(draw_n, seed):
    rng = random.Random(seed)
    return tuple(rng.sample(range(draw_n), draw_n))


# -- gradings ---------------------------------------------------------------


def test_jfun_small_cases():
    assert jfun([(0, 0)], [(1, 1)]) == 0.5
    assert jfun([(0, 1)], [(1, 0)]) == 0
    assert jfun([(0, 0), (2, 2)], [(1, 1)]) == 1


def test_unknot_gradings():
    # the two generators of the 2x2 grid
    assert maslov(UNKNOT, (1, 0)) == 0 and alexander(UNKNOT, (1, 0)) == 0
    assert maslov(UNKNOT, (0, 1)) == -1 and alexander(UNKNOT, (0, 1)) == -1


def test_trefoil_canonical_generator_gradings():
    assert maslov(TREFOIL, (2, 3, 4, 0, 1)) == 2
    assert alexander(TREFOIL, (2, 3, 4, 0, 1)) == 1


@given(grids(max_n=6), st.integers(0, 10**6))
def test_gradings_match_fraction_oracle(G, seed):
    g = _perm(G.n, seed)
    assert maslov(G, g) == oracle.maslov(G, g)
    assert maslov(G, g, marks="X") == oracle.maslov(G, g, "X")
    assert alexander2(G, g) == tuple(int(2 * a) for a in oracle.alexander(G, g))


@given(grids(max_n=6), st.integers(0, 10**6))
def test_fundamental_domains_agree(G, seed):
    g = _perm(G.n, seed)
    assert maslov(G, g, domain="lower") == maslov(G, g, domain="upper")
    assert alexander2(G, g, domain="lower") == alexander2(G, g, domain="upper")


@given(grids(max_n=6), st.integers(0, 10**6))
def test_knot_alexander_from_two_maslovs(G, seed):
    """For knots, A = (M_O - M_X)/2 - (n-1)/2."""
    from gridhfk import trace_components

    if trace_components(G).count != 1:
        return
    g = _perm(G.n, seed)
    assert 2 * alexander(G, g) == maslov(G, g, "O") - maslov(G, g, "X") - (G.n - 1)


def test_grading_table_matches_scalar():
    t = grading_table(TREFOIL)
    for i in (0, 17, 63, 119):
        g = tuple(int(v) for v in t.P[i])
        assert t.M[i] == maslov(TREFOIL, g)
        assert tuple(t.A2[i]) == alexander2(TREFOIL, g)


# -- generators -------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_generator_order_and_index(n):
    P = all_generators(n)
    assert [tuple(r) for r in P] == list(itertools.permutations(range(n)))
    assert np.all(np.diff(generator_codes(n)) > 0)
    for i in range(0, len(P), 7):
        assert generator_index(tuple(int(v) for v in P[i])) == i


def test_enumerate_generators_filters():
    gens = list(enumerate_generators(TREFOIL, m=2))
    assert (2, 3, 4, 0, 1) in gens and gens == sorted(gens)
    assert all(maslov(TREFOIL, g) == 2 for g in gens)
    assert len(gens) == int((grading_table(TREFOIL).M == 2).sum())
    assert len(list(enumerate_generators(TREFOIL))) == 120
    assert all(maslov(TREFOIL, g) == 0 for g in enumerate_generators(TREFOIL, m=0, a2=(-2,)))


def test_size_limit():
    with pytest.raises(LimitExceeded, match="exceeds"):
        check_size(11)
    with pytest.raises(LimitExceeded):
        list(enumerate_generators(TREFOIL, max_n=4))


# -- rectangles -------------------------------------------------------------


@given(grids(max_n=6), st.integers(0, 10**6))
def test_empty_rectangles_match_brute_force(G, seed):
    g = _perm(G.n, seed)
    lib = {(r.target, frozenset(r.o_cols), frozenset(r.x_cols)) for r in rectangles_out(G, g) if r.empty}
    assert lib == set(oracle.empty_rectangles_from(G, g))


@given(grids(max_n=5), st.integers(0, 10**6))
def test_rectangles_in_reverse_rectangles_out(G, seed):
    g = _perm(G.n, seed)
    for r in rectangles_in(G, g):
        assert r.target == g
        assert any(s.target == g for s in rectangles_out(G, r.source) if s.empty) == r.empty


def test_two_torus_rectangles_between_transposition_neighbours():
    x = (0, 1, 2, 3, 4)
    y = (1, 0, 2, 3, 4)
    rs = rectangles(TREFOIL, x, y)
    assert len(rs) == 2
    assert sum(r.width for r in rs) == TREFOIL.n
    assert rectangles(TREFOIL, x, (2, 1, 0, 4, 3)) == []
    assert all(r.empty for r in empty_rectangles(TREFOIL, x, y))


@pytest.mark.parametrize("seed", range(6))
def test_rectangle_table_matches_scalar(seed):
    rng = random.Random(seed)
    G = oracle.random_grid(rng.choice([4, 5, 6]), rng)
    T = rectangle_table(G)
    P = all_generators(G.n)
    for i in rng.sample(range(len(P)), min(25, len(P))):
        g = tuple(int(v) for v in P[i])
        sl = T.rows_of(i)
        got = sorted(
            (int(d), int(nx), int(b))
            for d, nx, b in zip(T.dst[sl], T.n_x[sl], T.o_bits[sl])
        )
        want = sorted(
            (generator_index(y), len(xs), sum(1 << c for c in os_))
            for y, os_, xs in oracle.empty_rectangles_from(G, g)
        )
        assert got == want


def test_rectangle_table_size_guard():
    with pytest.raises(LimitExceeded):
        rectangle_table(TREFOIL, max_n=4)


# -- boundary and d^2 -------------------------------------------------------


@pytest.mark.parametrize("variant", ["tilde", "hat", "minus"])
@pytest.mark.parametrize("seed", range(5))
def test_d_squared_scalar(variant, seed):
    rng = random.Random(100 + seed)
    G = oracle.random_grid(rng.choice([5, 6]), rng)
    for _ in range(6):
        g = _perm(G.n, rng.randrange(10**6))
        db = boundary(G, g, variant)
        assert not chain_boundary(G, db, variant)


def test_boundary_is_homogeneous_of_degree_minus_one():
    rng = random.Random(7)
    G = oracle.random_grid(5, rng)
    for _ in range(20):
        g = _perm(5, rng.randrange(10**6))
        db = boundary(G, g, "minus")
        if db:
            assert db.m == maslov(G, g) - 1 and db.a2 == alexander2(G, g)


def test_filtered_boundary_lowers_alexander():
    rng = random.Random(3)
    G = oracle.random_grid(5, rng)
    for _ in range(20):
        g = _perm(5, rng.randrange(10**6))
        for y, _u in boundary(G, g, "filtered").terms:
            assert alexander2(G, y)[0] <= alexander2(G, g)[0]
            assert maslov(G, y) == maslov(G, g) - 1


def test_checker_detects_a_broken_differential():
    from dataclasses import replace

    G = oracle.random_grid(5, random.Random(11))
    T = rectangle_table(G)
    assert oracle.d_squared_defects(T, 5, "tilde") == 0
    # drop one tilde rectangle with a nonzero boundary-of-boundary partner
    sel = np.nonzero(T.mask("tilde"))[0]
    broken = None
    for k in sel[:200]:
        keep = np.ones(len(T.src), dtype=bool)
        keep[k] = False
        src = T.src[keep]
        cand = replace(
            T, src=src, dst=T.dst[keep], n_x=T.n_x[keep], o_bits=T.o_bits[keep],
            offsets=np.searchsorted(src, np.arange(len(T.offsets))),
        )
        if oracle.d_squared_defects(cand, 5, "tilde"):
            broken = cand
            break
    assert broken is not None


def test_formal_chain_arithmetic():
    a = FormalChain.of(UNKNOT, [((1, 0), (0, 0))])
    assert a.m == 0 and a.a2 == (0,)
    assert not (a + a)
    assert (a + FormalChain(frozenset())) == a
    b = FormalChain.of(UNKNOT, [((0, 1), (0, 0))])
    with pytest.raises(ValueError):
        a + b
    with pytest.raises(ValueError):
        FormalChain.of(UNKNOT, [((0, 1), (0, 0)), ((1, 0), (0, 0))])


def test_monomial_grading_u_shifts():
    m, a2 = monomial_grading(TREFOIL, ((2, 3, 4, 0, 1), (1, 0, 0, 0, 1)))
    assert m == 2 - 4 and a2 == (2 - 4,)


def test_hat_columns_one_per_component():
    from gridhfk import G3

    assert len(hat_columns(G3)) == 2
    assert hat_columns(UNKNOT) == (0,)


@pytest.mark.parametrize("seed", range(6))
def test_hat_differential_squares_to_zero_for_any_choice_of_o(seed):
    # the designated O per component is a convention; every choice gives a complex
    G = oracle.random_grid(5, random.Random(300 + seed))
    T = rectangle_table(G)
    for cols in itertools.product(*trace_components(G).columns):
        bits = sum(1 << c for c in cols)
        assert oracle.d_squared_defects(T, 5, "hat", bits) == 0
