import os
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from gridhfk import GridDiagram  # noqa: E402

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def grids(draw, min_n: int = 2, max_n: int = 6):
    n = draw(st.integers(min_n, max_n))
    x = draw(st.permutations(range(n)))
    o = draw(st.permutations(range(n)).filter(lambda o: all(a != b for a, b in zip(x, o))))
    return GridDiagram(tuple(x), tuple(o))


@st.composite
def knot_grids(draw, min_n: int = 2, max_n: int = 6):
    from gridhfk import trace_components

    G = draw(grids(min_n, max_n).filter(lambda G: trace_components(G).count == 1))
    return G


@pytest.fixture
def tmp_grid_file(tmp_path):
    def write(G, name="g.grid"):
        p = tmp_path / name
        p.write_text(G.to_text() + "\n")
        return str(p)

    return write


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
