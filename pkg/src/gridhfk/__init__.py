"""Combinatorial knot Floer homology from grid diagrams, with the canonical
Legendrian classes x+ / x- and the transverse class they induce."""

from .complex import (
    FormalChain,
    alexander,
    alexander2,
    boundary,
    chain_boundary,
    empty_rectangles,
    enumerate_generators,
    maslov,
    rectangles,
)
from .errors import (
    CycleCheckFailed,
    DimensionMismatch,
    GridHFKError,
    GridSyntaxError,
    IllegalMove,
    LimitExceeded,
    NotACommutationPair,
    NotAKnot,
    UnsupportedType,
    ValidationError,
)
from .gf2 import SparseGF2Matrix
from .grid import (
    ClassicalInvariants,
    CommuteCols,
    CommuteRows,
    CyclicCol,
    CyclicRow,
    Destabilize,
    GridDiagram,
    Stabilize,
    Symmetry,
    apply_move,
    apply_moves,
    classical_invariants,
    crossings,
    format_script,
    inverse_moves,
    parse_grid,
    parse_script,
    trace_components,
)
from .homology import (
    BigradedTable,
    TauResult,
    bounds_witness,
    reduced_ranks,
    tau,
    tilde_homology_table,
)
from .legendrian import (
    LambdaReport,
    canonical_cycles,
    classes_equal,
    destabilization_transport,
    isolated,
    lambda_report,
    pentagon_transport,
    symmetry_transport,
    x_minus,
    x_plus,
)

__version__ = "0.1.0"

# Example diagrams.  G1/G2 are Legendrian 5_2 knots with equal classical
# invariants that the canonical classes tell apart; G3/G4 are the analogous
# pair of two-component 6^2_3 links.
UNKNOT = GridDiagram((1, 0), (0, 1))
TREFOIL = parse_grid("n=5;X=2,3,4,0,1;O=0,1,2,3,4")
G1 = parse_grid("n=7;X=6,0,3,4,1,2,5;O=4,5,6,2,3,0,1")
G2 = parse_grid("n=7;X=5,6,0,2,1,3,4;O=0,1,3,5,4,6,2")
G3 = parse_grid("n=8;X=4,5,6,1,2,3,7,0;O=7,2,4,3,5,0,1,6")
G4 = parse_grid("n=8;X=4,5,6,7,0,1,3,2;O=0,3,1,4,2,6,7,5")

__all__ = [
    "BigradedTable",
    "ClassicalInvariants",
    "CommuteCols",
    "CommuteRows",
    "CycleCheckFailed",
    "CyclicCol",
    "CyclicRow",
    "Destabilize",
    "DimensionMismatch",
    "FormalChain",
    "G1",
    "G2",
    "G3",
    "G4",
    "GridDiagram",
    "GridHFKError",
    "GridSyntaxError",
    "IllegalMove",
    "LambdaReport",
    "LimitExceeded",
    "NotACommutationPair",
    "NotAKnot",
    "SparseGF2Matrix",
    "Stabilize",
    "Symmetry",
    "TREFOIL",
    "TauResult",
    "UNKNOT",
    "UnsupportedType",
    "ValidationError",
    "alexander",
    "alexander2",
    "apply_move",
    "apply_moves",
    "boundary",
    "bounds_witness",
    "canonical_cycles",
    "chain_boundary",
    "classes_equal",
    "classical_invariants",
    "crossings",
    "destabilization_transport",
    "empty_rectangles",
    "enumerate_generators",
    "format_script",
    "inverse_moves",
    "isolated",
    "lambda_report",
    "maslov",
    "parse_grid",
    "parse_script",
    "pentagon_transport",
    "rectangles",
    "reduced_ranks",
    "symmetry_transport",
    "tau",
    "tilde_homology_table",
    "trace_components",
    "x_minus",
    "x_plus",
]
