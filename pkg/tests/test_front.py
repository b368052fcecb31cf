import re

import pytest
from hypothesis import given, settings

from conftest import grids
from gridhfk import G1, G3, TREFOIL, UNKNOT, classical_invariants, crossings
from gridhfk.front import _tilt, front_model, render_front


def _cusp_ids(svg: str) -> list[str]:
    return re.findall(r'id="(cusp-\d+-(?:left|right))"', svg)


def test_unknot_has_one_left_and_one_right_cusp():
    model = front_model(UNKNOT)
    assert sorted(side for _, _, side in model.cusps) == ["left", "right"]
    svg = render_front(UNKNOT)
    ids = _cusp_ids(svg)
    assert len(ids) == 2 and {i.split("-")[-1] for i in ids} == {"left", "right"}


def test_left_cusp_is_left_after_tilting():
    model = front_model(UNKNOT)
    by_side = {side: _tilt(tip)[0] for _, tip, side in model.cusps}
    assert by_side["left"] < by_side["right"]


@settings(max_examples=30)
@given(grids(max_n=7))
def test_cusp_count_matches_invariants(G):
    inv = classical_invariants(G)
    assert len(front_model(G).cusps) == sum(inv.cusps_up) + sum(inv.cusps_down)


@pytest.mark.parametrize("G", [TREFOIL, G1, G3])
def test_crossings_in_model(G):
    model = front_model(G)
    xs = crossings(G)
    assert len(model.crossings) == len(xs)
    # the front writhe is minus the grid writhe: same crossings, opposite signs
    assert classical_invariants(G).writhe_front == -sum(x.sign for x in xs)


def test_five_two_writhe_parity():
    inv = classical_invariants(G1)
    assert inv.writhe_front == -inv.writhe_grid
    assert len(crossings(G1)) % 2 == inv.writhe_front % 2


def test_render_is_byte_deterministic():
    assert render_front(G3) == render_front(G3)
    assert render_front(TREFOIL) == render_front(TREFOIL)


def test_legend_and_colours():
    svg = render_front(G3)
    assert "K1: tb=1, rot=0" in svg and "K2: tb=1, rot=0" in svg
    assert "#1f77b4" in svg and "#ff7f0e" in svg
    assert "<dc:date>" not in svg


def test_svg_only():
    assert render_front(UNKNOT).lstrip().startswith("<?xml")
