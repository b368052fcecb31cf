"""Canonical cycles x+ / x-, the Legendrian and transverse invariant reports,
class comparison, and transport of the canonical classes through grid moves."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

from .complex import (
    DEFAULT_MAX_N,
    FormalChain,
    Generator,
    alexander2,
    maslov,
    rectangles_in,
    rectangles_out,
)
from .errors import CycleCheckFailed, NotACommutationPair, UnsupportedType
from .grid import (
    ClassicalInvariants,
    CommuteCols,
    CommuteRows,
    GridDiagram,
    apply_move,
    classical_invariants,
    commutation_legal,
    trace_components,
    transpose,
)
from .homology import DEFAULT_MAX_BUCKET, bounds_witness, half

# ---------------------------------------------------------------------------
# canonical generators


def x_plus(G: GridDiagram) -> Generator:
    """Upper-right corners of the X cells."""
    n = G.n
    rows = [0] * n
    for c, r in enumerate(G.x_rows):
        rows[(c + 1) % n] = (r + 1) % n
    return tuple(rows)


def x_minus(G: GridDiagram) -> Generator:
    """Lower-left corners of the X cells."""
    return tuple(G.x_rows)


def is_cycle(G: GridDiagram, g: Sequence[int]) -> bool:
    """Every empty rectangle out of ``g`` contains an X."""
    return all(r.x_cols for r in rectangles_out(G, g))


def isolated(G: GridDiagram, g: Sequence[int]) -> bool:
    """No empty rectangle free of all marks ends at ``g``."""
    return all(r.x_cols or r.o_cols for r in rectangles_in(G, g))


@dataclass(frozen=True)
class CanonicalCycles:
    x_plus: Generator
    x_minus: Generator
    m_plus: int
    m_minus: int
    a2_plus: tuple[int, ...]
    a2_minus: tuple[int, ...]


def predicted_gradings(inv: ClassicalInvariants) -> tuple[int, int, tuple[int, ...], tuple[int, ...]]:
    """(M+, M-, 2A+, 2A-) predicted from tb and rot of each component."""
    ell = inv.components
    a2p = tuple(t - r + 1 for t, r in zip(inv.tb, inv.rot))
    a2m = tuple(t + r + 1 for t, r in zip(inv.tb, inv.rot))
    return sum(a2p) + 1 - ell, sum(a2m) + 1 - ell, a2p, a2m


def canonical_cycles(G: GridDiagram, inv: ClassicalInvariants | None = None) -> CanonicalCycles:
    """x+ and x- with their gradings, checked against tb and rot.

    A failure here means the implementation's conventions are inconsistent,
    never that the input is bad.
    """
    inv = inv or classical_invariants(G)
    xp, xm = x_plus(G), x_minus(G)
    for name, g in (("x+", xp), ("x-", xm)):
        if not is_cycle(G, g):
            raise CycleCheckFailed(f"{name} = {g} has an X-free outgoing rectangle")
    cc = CanonicalCycles(xp, xm, maslov(G, xp), maslov(G, xm), alexander2(G, xp), alexander2(G, xm))
    mp, mm, ap, am = predicted_gradings(inv)
    if (cc.m_plus, cc.m_minus, cc.a2_plus, cc.a2_minus) != (mp, mm, ap, am):
        raise CycleCheckFailed(
            f"canonical gradings {(cc.m_plus, cc.m_minus, cc.a2_plus, cc.a2_minus)} "
            f"differ from the tb/rot prediction {(mp, mm, ap, am)}"
        )
    return cc


def canonical_chain(G: GridDiagram, which: str, u_power: int = 0, u_col: int = 0) -> FormalChain:
    """U_{u_col}^d * x+ (or x-) as a one-term chain."""
    g = x_plus(G) if which == "plus" else x_minus(G)
    u = [0] * G.n
    u[u_col] = u_power
    return FormalChain.of(G, [(g, u)])


# ---------------------------------------------------------------------------
# class comparisons


def classes_equal(
    G: GridDiagram, max_bucket: int = DEFAULT_MAX_BUCKET, max_n: int = DEFAULT_MAX_N
) -> bool | None:
    """Whether x+ and x- are homologous; None when their gradings differ."""
    xp, xm = x_plus(G), x_minus(G)
    if xp == xm:
        return True
    if (maslov(G, xp), alexander2(G, xp)) != (maslov(G, xm), alexander2(G, xm)):
        return None
    target = canonical_chain(G, "plus") + canonical_chain(G, "minus")
    return bounds_witness(G, target, max_bucket=max_bucket, max_n=max_n) is not None


def nonvanishing_depth(
    G: GridDiagram, depth: int, max_bucket: int = DEFAULT_MAX_BUCKET, max_n: int = DEFAULT_MAX_N
) -> int:
    """Largest d <= depth with U^j x+ and U^j x- non-bounding for all j <= d.

    Returns -1 if x+ or x- is itself a boundary.
    """
    for d in range(depth + 1):
        for which in ("plus", "minus"):
            target = canonical_chain(G, which, d)
            if bounds_witness(G, target, max_bucket=max_bucket, max_n=max_n) is not None:
                return d - 1
    return depth


@dataclass(frozen=True)
class LambdaReport:
    tb: tuple[int, ...]
    rot: tuple[int, ...]
    m_plus: int
    a2_plus: tuple[int, ...]
    m_minus: int
    a2_minus: tuple[int, ...]
    predicted_ok: bool
    is_cycle_plus: bool
    is_cycle_minus: bool
    isolated_plus: bool
    isolated_minus: bool
    classes_equal: bool | None
    nonvanishing_depth: int
    depth_requested: int

    def as_dict(self) -> dict:
        knot = len(self.tb) == 1

        def shape(vals):
            return vals[0] if knot else list(vals)

        a_plus = shape(tuple(half(v) for v in self.a2_plus))
        a_minus = shape(tuple(half(v) for v in self.a2_minus))
        theta = {
            "invariant": "transverse",
            "from": "lambda_plus",
            "M": self.m_plus,
            "A": a_plus,
            "nonvanishing_depth": self.nonvanishing_depth,
        }
        if knot:
            theta["sl"] = self.tb[0] - self.rot[0]
        return {
            "tb": shape(self.tb),
            "rot": shape(self.rot),
            "M_plus": self.m_plus,
            "A_plus": a_plus,
            "M_minus": self.m_minus,
            "A_minus": a_minus,
            "gradings_match_prediction": self.predicted_ok,
            "is_cycle_plus": self.is_cycle_plus,
            "is_cycle_minus": self.is_cycle_minus,
            "isolated_plus": self.isolated_plus,
            "isolated_minus": self.isolated_minus,
            "classes_equal": self.classes_equal,
            "nonvanishing_depth": self.nonvanishing_depth,
            "theta": theta,
        }


def lambda_report(
    G: GridDiagram, depth: int = 3, max_bucket: int = DEFAULT_MAX_BUCKET, max_n: int = DEFAULT_MAX_N
) -> LambdaReport:
    inv = classical_invariants(G)
    cc = canonical_cycles(G, inv)
    return LambdaReport(
        tb=inv.tb,
        rot=inv.rot,
        m_plus=cc.m_plus,
        a2_plus=cc.a2_plus,
        m_minus=cc.m_minus,
        a2_minus=cc.a2_minus,
        predicted_ok=True,
        is_cycle_plus=True,
        is_cycle_minus=True,
        isolated_plus=isolated(G, cc.x_plus),
        isolated_minus=isolated(G, cc.x_minus),
        classes_equal=classes_equal(G, max_bucket, max_n),
        nonvanishing_depth=nonvanishing_depth(G, depth, max_bucket, max_n),
        depth_requested=depth,
    )


# ---------------------------------------------------------------------------
# commutation: pentagon maps
#
# Heights are measured in quarter units: lattice row j sits at 4j, mark
# centres at 4r + 2.  The new circle gamma runs left of the old circle beta
# across the mark rows of the left column and right of it across those of the
# right column; ``a`` is the crossing where gamma passes from left to right
# going up, and it is a corner of every pentagon.  Any height for ``a`` in the
# gap above the left column's marks gives a chain map; the lowest one carries
# x- to x-, the highest carries x+ to x+.


def _in_arc(h: int, lo: int, hi: int, n4: int) -> bool:
    return 0 < (h - lo) % n4 < (hi - lo) % n4


def _left_arc(G: GridDiagram, c: int) -> tuple[int, int]:
    """(bottom, top) rows of column c's marks along the arc avoiding column c+1's."""
    n = G.n
    B = (c + 1) % n
    p = (G.x_rows[c], G.o_rows[c])
    q = (G.x_rows[B], G.o_rows[B])
    for lo, hi in (p, p[::-1]):
        span = (hi - lo) % n
        if not any(0 < (r - lo) % n < span for r in q):
            return lo, hi
    raise NotACommutationPair(f"mark rows of columns {c} and {B} interleave")


def crossing_height(G: GridDiagram, c: int, placement: str) -> int:
    n = G.n
    _, hi = _left_arc(G, c)
    if placement == "minus":
        return 4 * hi + 3
    if placement == "plus":
        B = (c + 1) % n
        nxt = min((G.x_rows[B], G.o_rows[B]), key=lambda r: (r - hi) % n)
        return (4 * nxt + 1) % (4 * n)
    raise ValueError(f"placement must be 'plus' or 'minus', got {placement!r}")


@dataclass(frozen=True)
class Pentagon:
    source: Generator
    target: Generator
    x_cols: tuple[int, ...]
    o_cols: tuple[int, ...]


def pentagons_out(G: GridDiagram, c: int, x: Sequence[int], placement: str = "plus") -> list[Pentagon]:
    """Empty pentagons from ``x`` in G to generators of G with columns c, c+1 commuted."""
    n, n4 = G.n, 4 * G.n
    B = (c + 1) % n
    a = crossing_height(G, c, placement)
    xr, orr = G.x_rows, G.o_rows
    out = []

    def marks_in(cols, lo, hi):
        xs = [k for k in cols if _in_arc(4 * xr[k] + 2, lo, hi, n4)]
        os_ = [k for k in cols if _in_arc(4 * orr[k] + 2, lo, hi, n4)]
        return xs, os_

    # region left of beta/gamma: corners x at (B, t) and (v, r)
    t = x[B]
    for v in range(n):
        if v == B or not _in_arc(a, 4 * x[v], 4 * t, n4):
            continue
        r = x[v]
        between = [(v + k) % n for k in range(1, (B - v) % n)]
        if any(_in_arc(4 * x[w], 4 * r, 4 * t, n4) for w in between):
            continue
        xs, os_ = marks_in([(v + k) % n for k in range((c - v) % n)], 4 * r, 4 * t)
        x1, o1 = marks_in([c], a, 4 * t)
        x2, o2 = marks_in([B], 4 * r, a)
        y = list(x)
        y[v], y[B] = t, r
        out.append(Pentagon(tuple(x), tuple(y), tuple(sorted(xs + x1 + x2)), tuple(sorted(os_ + o1 + o2))))

    # region right of beta/gamma: corners x at (B, s) and (v, t)
    s = x[B]
    for v in range(n):
        if v == B or not _in_arc(a, 4 * s, 4 * x[v], n4):
            continue
        t = x[v]
        between = [(B + k) % n for k in range(1, (v - B) % n)]
        if any(_in_arc(4 * x[w], 4 * s, 4 * t, n4) for w in between):
            continue
        xs, os_ = marks_in(between, 4 * s, 4 * t)
        x1, o1 = marks_in([B], 4 * s, a)
        x2, o2 = marks_in([c], a, 4 * t)
        y = list(x)
        y[v], y[B] = s, t
        out.append(Pentagon(tuple(x), tuple(y), tuple(sorted(xs + x1 + x2)), tuple(sorted(os_ + o1 + o2))))
    return out


def pentagon_map(
    G: GridDiagram, c: int, chain: FormalChain, placement: str = "plus"
) -> set[tuple[Generator, tuple[int, ...]]]:
    """Image monomials of ``chain`` under the X-free pentagon count.

    U exponents are relabelled to the commuted diagram, where the O of
    column c sits in column c+1 and vice versa.
    """
    n = G.n
    B = (c + 1) % n
    relabel = [B if k == c else c if k == B else k for k in range(n)]
    acc: set[tuple[Generator, tuple[int, ...]]] = set()
    for g, u in chain.terms:
        for p in pentagons_out(G, c, g, placement):
            if p.x_cols:
                continue
            ue = list(u)
            for k in p.o_cols:
                ue[k] += 1
            acc ^= {(p.target, tuple(ue[relabel[k]] for k in range(n)))}
    return acc


def find_commutation(G: GridDiagram, H: GridDiagram) -> CommuteCols | CommuteRows:
    if G.n == H.n:
        for c in range(G.n):
            if commutation_legal(G, c)[0] and apply_move(G, CommuteCols(c)) == H:
                return CommuteCols(c)
        Gt = transpose(G)
        for r in range(G.n):
            if commutation_legal(Gt, r)[0] and apply_move(G, CommuteRows(r)) == H:
                return CommuteRows(r)
    raise NotACommutationPair(f"{H} is not a single commutation of {G}")


def _transpose_chain(chain: FormalChain, G: GridDiagram) -> FormalChain:
    terms = []
    for g, u in chain.terms:
        inv = [0] * len(g)
        for c, r in enumerate(g):
            inv[r] = c
        # O in column k sits in row o_rows[k]; after transposing it is column o_rows[k]
        ut = [0] * len(u)
        for k, e in enumerate(u):
            ut[G.o_rows[k]] = e
        terms.append((tuple(inv), tuple(ut)))
    return FormalChain.of(transpose(G), terms)


def pentagon_transport(
    G: GridDiagram, H: GridDiagram, chain: FormalChain, placement: str = "plus"
) -> FormalChain:
    """Push ``chain`` from G to the commuted diagram H.

    ``placement`` selects the crossing of the old and new circles: "plus"
    fixes x+, "minus" fixes x-; both are chain maps.
    """
    move = find_commutation(G, H)
    if isinstance(move, CommuteCols):
        return FormalChain.of(H, pentagon_map(G, move.col, chain, placement))
    Gt, Ht = transpose(G), transpose(H)
    img = FormalChain.of(Ht, pentagon_map(Gt, move.row, _transpose_chain(chain, G), placement))
    return _transpose_chain(img, Ht)


# ---------------------------------------------------------------------------
# destabilization and symmetries

# (u power on x+, u power on x-) for each X-type destabilization
U_POWER_TABLE = {"X:NW": (0, 0), "X:SE": (0, 0), "X:SW": (0, 1), "X:NE": (1, 0)}


@dataclass(frozen=True)
class TransportRecord:
    type: str
    image_plus: Generator
    image_minus: Generator
    u_power_plus: int
    u_power_minus: int

    def as_dict(self) -> dict:
        d = asdict(self)
        d["image_plus"] = list(self.image_plus)
        d["image_minus"] = list(self.image_minus)
        return d


def destabilization_transport(H: GridDiagram, G: GridDiagram, type_: str) -> TransportRecord:
    """Images of x+(H), x-(H) in the destabilized diagram G.

    x(H) maps to U^u * x(G) with u from the sign of the stabilization; the
    grading drop (2u in M, u in the stabilized component's A) is verified.
    """
    if type_ not in U_POWER_TABLE:
        raise UnsupportedType(f"no direct transport for {type_}; commute it to an X-type first")
    up, um = U_POWER_TABLE[type_]
    ch_H, ch_G = canonical_cycles(H), canonical_cycles(G)
    if trace_components(H).count != trace_components(G).count:
        raise CycleCheckFailed("destabilization changed the number of components")
    for name, mh, mg, ah, ag, u in (
        ("x+", ch_H.m_plus, ch_G.m_plus, ch_H.a2_plus, ch_G.a2_plus, up),
        ("x-", ch_H.m_minus, ch_G.m_minus, ch_H.a2_minus, ch_G.a2_minus, um),
    ):
        drops = sorted(g - h for h, g in zip(ah, ag))
        expected = sorted([0] * (len(ah) - 1) + [2 * u])
        if mg - mh != 2 * u or drops != expected:
            raise CycleCheckFailed(
                f"{name}: grading change M {mh}->{mg}, 2A {ah}->{ag} does not match U^{u}"
            )
    return TransportRecord(type_, ch_G.x_plus, ch_G.x_minus, up, um)


def map_generator(g: Sequence[int], kind: str) -> Generator:
    """Image of a generator under a lattice symmetry of the torus."""
    n = len(g)
    out = [0] * n
    for i, j in enumerate(g):
        if kind == "reflect-ad":
            ni, nj = (-j) % n, (-i) % n
        elif kind == "reflect-d":
            ni, nj = j, i
        elif kind == "rot180":
            ni, nj = (-i) % n, (-j) % n
        else:
            raise ValueError(f"unknown symmetry {kind!r}")
        out[ni] = nj
    return tuple(out)


@dataclass(frozen=True)
class SymmetryReport:
    kind: str
    plus_to_minus: bool
    minus_to_plus: bool
    gradings_match: bool
    rot_before: tuple[int, ...]
    rot_after: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return (
            self.plus_to_minus and self.minus_to_plus and self.gradings_match
            and self.rot_after == tuple(-r for r in self.rot_before)
        )


def symmetry_transport(G: GridDiagram, kind: str) -> SymmetryReport:
    """Check that the symmetry swaps x+ and x- with matching gradings."""
    if kind not in ("reflect-ad", "rot180"):
        raise UnsupportedType(f"symmetry transport covers reflect-ad and rot180, not {kind}")
    from .grid import apply_symmetry

    H = apply_symmetry(G, kind)
    cg, ch = canonical_cycles(G), canonical_cycles(H)
    return SymmetryReport(
        kind,
        map_generator(cg.x_plus, kind) == ch.x_minus,
        map_generator(cg.x_minus, kind) == ch.x_plus,
        (cg.m_plus, cg.m_minus) == (ch.m_minus, ch.m_plus),
        classical_invariants(G).rot,
        classical_invariants(H).rot,
    )
