import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from conftest import grids
from gridhfk import (
    G1,
    G2,
    G3,
    G4,
    TREFOIL,
    UNKNOT,
    CommuteCols,
    CommuteRows,
    GridDiagram,
    Stabilize,
    apply_move,
    canonical_cycles,
    classes_equal,
    classical_invariants,
    destabilization_transport,
    isolated,
    lambda_report,
    maslov,
    pentagon_transport,
    symmetry_transport,
    x_minus,
    x_plus,
)
from gridhfk.complex import FormalChain, alexander2, chain_boundary
from gridhfk.errors import CycleCheckFailed, NotACommutationPair, UnsupportedType
from gridhfk.grid import apply_symmetry, commutation_legal, transpose
from gridhfk.legendrian import (
    U_POWER_TABLE,
    canonical_chain,
    is_cycle,
    map_generator,
    nonvanishing_depth,
    pentagon_map,
    pentagons_out,
    predicted_gradings,
)


def test_canonical_generators_of_unknot():
    assert x_minus(UNKNOT) == (1, 0)
    assert x_plus(UNKNOT) == (1, 0)


def test_canonical_generators_of_trefoil():
    assert x_plus(TREFOIL) == x_minus(TREFOIL) == (2, 3, 4, 0, 1)


@settings(max_examples=80)
@given(grids(max_n=7))
def test_canonical_generators_are_cycles_with_predicted_gradings(G):
    cc = canonical_cycles(G)
    inv = classical_invariants(G)
    assert is_cycle(G, cc.x_plus) and is_cycle(G, cc.x_minus)
    ell = inv.components
    a2p = tuple(t - r + 1 for t, r in zip(inv.tb, inv.rot))
    a2m = tuple(t + r + 1 for t, r in zip(inv.tb, inv.rot))
    assert cc.a2_plus == a2p and cc.a2_minus == a2m
    assert cc.m_plus == sum(a2p) + 1 - ell
    assert cc.m_minus == sum(a2m) + 1 - ell
    assert predicted_gradings(inv) == (cc.m_plus, cc.m_minus, a2p, a2m)


def test_wrong_prediction_is_reported():
    from gridhfk.grid import ClassicalInvariants

    fake = ClassicalInvariants(0, (1,), (1,), (0,), (0,))
    with pytest.raises(CycleCheckFailed, match="prediction"):
        canonical_cycles(UNKNOT, fake)


# -- reports on the example diagrams ----------------------------------------


def test_unknot_report():
    d = lambda_report(UNKNOT).as_dict()
    assert d["tb"] == -1 and d["rot"] == 0
    assert d["M_plus"] == d["M_minus"] == 0 and d["A_plus"] == d["A_minus"] == 0
    assert d["isolated_plus"] and d["isolated_minus"]
    assert d["classes_equal"] is True and d["nonvanishing_depth"] == 3
    assert d["theta"] == {
        "invariant": "transverse", "from": "lambda_plus", "M": 0, "A": 0,
        "nonvanishing_depth": 3, "sl": -1,
    }


@pytest.mark.parametrize("G, equal, iso", [(G1, False, True), (G2, True, False)])
def test_five_two_reports(G, equal, iso):
    d = lambda_report(G, depth=1).as_dict()
    assert (d["tb"], d["rot"]) == (1, 0)
    assert (d["M_plus"], d["A_plus"], d["M_minus"], d["A_minus"]) == (2, 1, 2, 1)
    assert d["classes_equal"] is equal
    assert d["isolated_plus"] is iso and d["isolated_minus"] is iso
    assert d["theta"]["sl"] == 1


@pytest.mark.parametrize("G, equal", [(G3, False), (G4, True)])
def test_six_two_three_reports(G, equal):
    d = lambda_report(G, depth=0).as_dict()
    assert d["tb"] == [1, 1] and d["rot"] == [0, 0]
    assert d["A_plus"] == [1, 1] and d["A_minus"] == [1, 1]
    assert d["M_plus"] == d["M_minus"] == 3
    assert d["classes_equal"] is equal
    assert "sl" not in d["theta"]


def test_isolated_generator_is_not_a_boundary_of_a_single_rectangle():
    assert isolated(G1, x_plus(G1)) and isolated(G1, x_minus(G1))
    assert not isolated(G2, x_plus(G2))


def test_classes_with_different_gradings():
    H = apply_move(UNKNOT, Stabilize("X", 0, "SW"))
    assert classical_invariants(H).rot == (-1,)
    assert classes_equal(H) is None


def test_nonvanishing_depth_examples():
    assert nonvanishing_depth(TREFOIL, 3) == 3
    assert nonvanishing_depth(G1, 2) == 2


# -- pentagon maps ----------------------------------------------------------


def _legal_commutation(G: GridDiagram, rng: random.Random):
    cols = [c for c in range(G.n) if commutation_legal(G, c)[0]]
    rows = [r for r in range(G.n) if commutation_legal(transpose(G), r)[0]]
    moves = [CommuteCols(c) for c in cols] + [CommuteRows(r) for r in rows]
    return rng.choice(moves) if moves else None


def _is_chain_map(G, H, chain, placement):
    d = chain_boundary(G, chain)
    lhs = pentagon_transport(G, H, d, placement) if d else FormalChain(frozenset())
    rhs = chain_boundary(H, pentagon_transport(G, H, chain, placement))
    return lhs.terms == rhs.terms


@pytest.mark.parametrize("seed", range(30))
def test_pentagon_transport_fixes_canonical_generators(seed):
    rng = random.Random(seed)
    for _ in range(50):
        G = oracle.random_grid(rng.choice([3, 4, 5, 6]), rng)
        m = _legal_commutation(G, rng)
        if m is not None:
            break
    H = apply_move(G, m)
    for which in ("plus", "minus"):
        img = pentagon_transport(G, H, canonical_chain(G, which), which)
        assert img == canonical_chain(H, which)


@pytest.mark.parametrize("seed", range(20))
def test_pentagon_transport_is_chain_map(seed):
    rng = random.Random(1000 + seed)
    for _ in range(50):
        G = oracle.random_grid(rng.choice([4, 5]), rng)
        m = _legal_commutation(G, rng)
        if m is not None:
            break
    H = apply_move(G, m)
    for _ in range(4):
        g = tuple(rng.sample(range(G.n), G.n))
        u = tuple(rng.choice([0, 0, 1]) for _ in range(G.n))
        chain = FormalChain.of(G, [(g, u)])
        for placement in ("plus", "minus"):
            assert _is_chain_map(G, H, chain, placement)


@pytest.mark.parametrize("seed", range(4))
def test_pentagon_transport_is_chain_map_on_every_generator(seed):
    import itertools

    rng = random.Random(2000 + seed)
    while True:
        G = oracle.random_grid(4, rng)
        m = _legal_commutation(G, rng)
        if m is not None:
            break
    H = apply_move(G, m)
    for g in itertools.permutations(range(4)):
        chain = FormalChain.of(G, [(g, (0,) * 4)])
        for placement in ("plus", "minus"):
            assert _is_chain_map(G, H, chain, placement)


def test_pentagon_map_preserves_gradings():
    rng = random.Random(5)
    G = oracle.random_grid(5, rng)
    c = next(c for c in range(5) if commutation_legal(G, c)[0])
    H = apply_move(G, CommuteCols(c))
    for _ in range(10):
        g = tuple(rng.sample(range(5), 5))
        src = FormalChain.of(G, [(g, (0,) * 5)])
        img = FormalChain.of(H, pentagon_map(G, c, src))
        if img:
            assert (img.m, img.a2) == (src.m, src.a2)


def test_single_placement_cannot_fix_both():
    # here x+ = x- in G but not in the commuted diagram
    G = GridDiagram((0, 1, 2, 3), (3, 2, 0, 1))
    H = apply_move(G, CommuteCols(0))
    assert x_plus(G) == x_minus(G) and x_plus(H) != x_minus(H)
    for placement in ("plus", "minus"):
        chain = canonical_chain(G, "plus")
        img = pentagon_transport(G, H, chain, placement)
        assert img == canonical_chain(H, placement)


def test_pentagons_start_at_their_source():
    G = oracle.random_grid(5, random.Random(2))
    c = next(c for c in range(5) if commutation_legal(G, c)[0])
    ps = pentagons_out(G, c, x_plus(G))
    assert all(p.source == x_plus(G) for p in ps)


def test_not_a_commutation():
    with pytest.raises(NotACommutationPair):
        pentagon_transport(TREFOIL, G1, canonical_chain(TREFOIL, "plus"))


# -- destabilization and symmetries -----------------------------------------


def test_u_power_table():
    assert U_POWER_TABLE == {"X:NW": (0, 0), "X:SE": (0, 0), "X:SW": (0, 1), "X:NE": (1, 0)}


@pytest.mark.parametrize("typ", ["X:NW", "X:SE", "X:SW", "X:NE"])
def test_destabilization_transport_on_stabilized_unknot(typ):
    H = apply_move(UNKNOT, Stabilize("X", 0, typ[2:]))
    rec = destabilization_transport(H, UNKNOT, typ)
    assert (rec.u_power_plus, rec.u_power_minus) == U_POWER_TABLE[typ]
    assert rec.image_plus == x_plus(UNKNOT) and rec.image_minus == x_minus(UNKNOT)
    # x-(H) goes to U^u x-(G), and U^u lowers M by 2u
    assert maslov(H, x_minus(H)) == maslov(UNKNOT, x_minus(UNKNOT)) - 2 * rec.u_power_minus
    assert maslov(H, x_plus(H)) == maslov(UNKNOT, x_plus(UNKNOT)) - 2 * rec.u_power_plus
    assert rec.as_dict()["type"] == typ


def test_o_type_transport_is_unsupported():
    H = apply_move(UNKNOT, Stabilize("O", 0, "NW"))
    with pytest.raises(UnsupportedType):
        destabilization_transport(H, UNKNOT, "O:NW")


def test_wrong_pair_fails_the_grading_check():
    H = apply_move(UNKNOT, Stabilize("X", 0, "SW"))
    with pytest.raises(CycleCheckFailed):
        destabilization_transport(H, UNKNOT, "X:NE")


@settings(max_examples=40)
@given(grids(max_n=6), st.sampled_from(["reflect-ad", "rot180"]))
def test_symmetries_swap_canonical_generators(G, kind):
    rep = symmetry_transport(G, kind)
    assert rep.plus_to_minus and rep.minus_to_plus and rep.gradings_match
    if len(rep.rot_before) == 1:
        assert rep.ok


def test_reflect_d_has_no_symmetry_transport():
    with pytest.raises(UnsupportedType):
        symmetry_transport(TREFOIL, "reflect-d")


@given(grids(max_n=6))
def test_transpose_preserves_canonical_generators(G):
    H = apply_symmetry(G, "reflect-d")
    assert map_generator(x_plus(G), "reflect-d") == x_plus(H)
    assert map_generator(x_minus(G), "reflect-d") == x_minus(H)


def test_map_generator_rejects_unknown():
    with pytest.raises(ValueError):
        map_generator((0, 1), "spin")


def test_alexander_of_canonical_generators_on_links():
    for G in (G3, G4):
        assert alexander2(G, x_plus(G)) == (2, 2)
