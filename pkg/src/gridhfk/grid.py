"""Grid diagrams: data model, parsing, components, classical invariants and moves.

Coordinates: columns 0..n-1 run left to right, rows 0..n-1 bottom to top.
Marks sit at cell centres (c + 1/2, r + 1/2); generator points sit on the
lattice corners.  ``x_rows[c]`` is the row of the X in column ``c``.

The knot drawn from a grid has horizontal segments O -> X inside each row and
vertical segments X -> O inside each column, the vertical strand always on top.
Smoothing NW/SE corners and turning NE/SW corners into cusps, then tilting by
45 degrees clockwise, gives the Legendrian front of the mirror knot.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, Union

from .errors import GridSyntaxError, IllegalMove, ValidationError

DIRECTIONS = ("NW", "NE", "SW", "SE")
_OPPOSITE = {"NW": "SE", "SE": "NW", "NE": "SW", "SW": "NE"}


@dataclass(frozen=True)
class GridDiagram:
    x_rows: tuple[int, ...]
    o_rows: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "x_rows", tuple(int(v) for v in self.x_rows))
        object.__setattr__(self, "o_rows", tuple(int(v) for v in self.o_rows))
        _validate(self.x_rows, self.o_rows)

    @property
    def n(self) -> int:
        return len(self.x_rows)

    @cached_property
    def x_cols(self) -> tuple[int, ...]:
        """Column of the X in each row."""
        return _inverse(self.x_rows)

    @cached_property
    def o_cols(self) -> tuple[int, ...]:
        """Column of the O in each row."""
        return _inverse(self.o_rows)

    def mark_at(self, col: int, row: int) -> str | None:
        col %= self.n
        row %= self.n
        if self.x_rows[col] == row:
            return "X"
        if self.o_rows[col] == row:
            return "O"
        return None

    def to_text(self) -> str:
        xs = ",".join(map(str, self.x_rows))
        os_ = ",".join(map(str, self.o_rows))
        return f"n={self.n};X={xs};O={os_}"

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "x": list(self.x_rows), "o": list(self.o_rows)})

    def __str__(self) -> str:
        return self.to_text()

    def picture(self) -> str:
        """ASCII rendering, top row first."""
        lines = []
        for r in reversed(range(self.n)):
            lines.append(" ".join(self.mark_at(c, r) or "." for c in range(self.n)))
        return "\n".join(lines)


def _inverse(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, v in enumerate(perm):
        inv[v] = i
    return tuple(inv)


def _validate(x_rows: Sequence[int], o_rows: Sequence[int]) -> None:
    n = len(x_rows)
    if len(o_rows) != n:
        raise ValidationError(f"X has {n} entries but O has {len(o_rows)}")
    if n < 2:
        raise ValidationError(f"grid number must be at least 2, got {n}")
    for name, rows in (("X", x_rows), ("O", o_rows)):
        seen: dict[int, int] = {}
        for c, r in enumerate(rows):
            if not 0 <= r < n:
                raise ValidationError(f"{name} in column {c} has row {r} outside [0,{n})")
            if r in seen:
                raise ValidationError(
                    f"duplicate {name} row {r} (columns {seen[r]} and {c})"
                )
            seen[r] = c
    for c in range(n):
        if x_rows[c] == o_rows[c]:
            raise ValidationError(f"X and O coincide in column {c}, row {x_rows[c]}")


_TEXT_RE = re.compile(
    r"^\s*n\s*=\s*(-?\d+)\s*;\s*X\s*=\s*([^;]*?)\s*;\s*O\s*=\s*([^;]*?)\s*;?\s*$",
    re.IGNORECASE,
)


def _int_list(chunk: str, what: str) -> list[int]:
    chunk = chunk.strip()
    if not chunk:
        return []
    try:
        return [int(tok) for tok in chunk.split(",")]
    except ValueError:
        raise GridSyntaxError(f"malformed {what} list: {chunk!r}") from None


def parse_grid(text: str) -> GridDiagram:
    """Parse ``n=..;X=..;O=..`` or the JSON form ``{"n":..,"x":[..],"o":[..]}``.

    Blank lines and ``#`` comments are ignored.
    """
    body = "\n".join(
        line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")
    ).strip()
    if not body:
        raise GridSyntaxError("empty diagram text")
    if body.startswith("{"):
        try:
            data = json.loads(body)
            n, xs, os_ = int(data["n"]), list(data["x"]), list(data["o"])
        except (ValueError, KeyError, TypeError) as exc:
            raise GridSyntaxError(f"malformed JSON diagram: {exc}") from None
    else:
        m = _TEXT_RE.match(body.replace("\n", ""))
        if not m:
            raise GridSyntaxError(f"expected 'n=<int>;X=<rows>;O=<rows>', got {body!r}")
        n = int(m.group(1))
        xs = _int_list(m.group(2), "X")
        os_ = _int_list(m.group(3), "O")
    if len(xs) != n or len(os_) != n:
        raise ValidationError(f"n={n} but X has {len(xs)} and O has {len(os_)} entries")
    return GridDiagram(tuple(xs), tuple(os_))


# ---------------------------------------------------------------------------
# components


@dataclass(frozen=True)
class ComponentPartition:
    component_of_column: tuple[int, ...]
    columns: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.columns)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(cs) for cs in self.columns)

    def o_set(self, i: int) -> tuple[int, ...]:
        """Columns of the O marks on component ``i`` (O and X share columns)."""
        return self.columns[i]

    x_set = o_set


def trace_components(G: GridDiagram) -> ComponentPartition:
    # X(c) -> O in the same column -> X in that O's row
    step = [G.x_cols[G.o_rows[c]] for c in range(G.n)]
    comp = [-1] * G.n
    groups: list[tuple[int, ...]] = []
    for start in range(G.n):
        if comp[start] >= 0:
            continue
        cyc = []
        c = start
        while comp[c] < 0:
            comp[c] = len(groups)
            cyc.append(c)
            c = step[c]
        groups.append(tuple(sorted(cyc)))
    return ComponentPartition(tuple(comp), tuple(groups))


# ---------------------------------------------------------------------------
# corners, crossings and classical invariants


def corner_type(G: GridDiagram, kind: str, col: int) -> str:
    """Which corner of the knot projection the mark in ``col`` sits at."""
    if kind == "X":
        row = G.x_rows[col]
        partner_col = G.o_cols[row]
        partner_row = G.o_rows[col]
    else:
        row = G.o_rows[col]
        partner_col = G.x_cols[row]
        partner_row = G.x_rows[col]
    goes_left = partner_col < col
    goes_down = partner_row < row
    return ("N" if goes_down else "S") + ("E" if goes_left else "W")


def cusp_orientation(kind: str, corner: str) -> str | None:
    """'down', 'up' or None (smoothed corner) for a mark of the given kind."""
    if corner == "NE":
        return "down" if kind == "X" else "up"
    if corner == "SW":
        return "up" if kind == "X" else "down"
    return None


@dataclass(frozen=True)
class Crossing:
    col: int
    row: int
    sign: int  # sign in the grid projection, vertical strand over
    over_component: int
    under_component: int


def crossing_sign(vertical_dir: int, horizontal_dir: int) -> int:
    # over strand (0, v), under strand (h, 0); right-hand rule sign of over x under
    return -vertical_dir * horizontal_dir


def crossings(G: GridDiagram, P: ComponentPartition | None = None) -> list[Crossing]:
    P = P or trace_components(G)
    out = []
    for c in range(G.n):
        lo, hi = sorted((G.x_rows[c], G.o_rows[c]))
        dv = 1 if G.o_rows[c] > G.x_rows[c] else -1
        for r in range(lo + 1, hi):
            left, right = sorted((G.o_cols[r], G.x_cols[r]))
            if left < c < right:
                dh = 1 if G.x_cols[r] > G.o_cols[r] else -1
                out.append(
                    Crossing(
                        c,
                        r,
                        crossing_sign(dv, dh),
                        P.component_of_column[c],
                        P.component_of_column[G.x_cols[r]],
                    )
                )
    return out


@dataclass(frozen=True)
class ClassicalInvariants:
    writhe_grid: int
    cusps_up: tuple[int, ...]
    cusps_down: tuple[int, ...]
    tb: tuple[int, ...]
    rot: tuple[int, ...]

    @property
    def writhe_front(self) -> int:
        return -self.writhe_grid

    @property
    def components(self) -> int:
        return len(self.tb)

    @property
    def sl(self) -> int | None:
        if self.components != 1:
            return None
        return self.tb[0] - self.rot[0]

    def as_dict(self) -> dict:
        d = {
            "components": self.components,
            "writhe_grid": self.writhe_grid,
            "writhe_front": self.writhe_front,
            "cusps_up": list(self.cusps_up),
            "cusps_down": list(self.cusps_down),
            "tb": list(self.tb),
            "rot": list(self.rot),
        }
        if self.sl is not None:
            d["sl"] = self.sl
        return d


def classical_invariants(G: GridDiagram, P: ComponentPartition | None = None) -> ClassicalInvariants:
    P = P or trace_components(G)
    ell = P.count
    up = [0] * ell
    down = [0] * ell
    for c in range(G.n):
        comp = P.component_of_column[c]
        for kind in ("X", "O"):
            o = cusp_orientation(kind, corner_type(G, kind, c))
            if o == "up":
                up[comp] += 1
            elif o == "down":
                down[comp] += 1
    self_writhe = [0] * ell
    mixed = [0] * ell  # twice the front linking number with the other components
    total = 0
    for x in crossings(G, P):
        total += x.sign
        if x.over_component == x.under_component:
            self_writhe[x.over_component] += x.sign
        else:
            mixed[x.over_component] += x.sign
            mixed[x.under_component] += x.sign
    tb = []
    rot = []
    for i in range(ell):
        cusps = up[i] + down[i]
        # front crossings are the grid crossings with opposite sign
        twice_tb = -2 * self_writhe[i] - mixed[i] - cusps
        assert twice_tb % 2 == 0 and (down[i] - up[i]) % 2 == 0
        tb.append(twice_tb // 2)
        rot.append((down[i] - up[i]) // 2)
    return ClassicalInvariants(total, tuple(up), tuple(down), tuple(tb), tuple(rot))


# ---------------------------------------------------------------------------
# moves


@dataclass(frozen=True)
class CyclicRow:
    shift: int


@dataclass(frozen=True)
class CyclicCol:
    shift: int


@dataclass(frozen=True)
class CommuteCols:
    col: int  # swaps columns col and col+1 (mod n)


@dataclass(frozen=True)
class CommuteRows:
    row: int


@dataclass(frozen=True)
class Stabilize:
    mark: str  # "X" or "O": which mark in ``col`` gets replaced by a 2x2 block
    col: int
    direction: str  # position of the empty square relative to the new corner

    @property
    def type(self) -> str:
        return f"{self.mark}:{self.direction}"


@dataclass(frozen=True)
class Destabilize:
    col: int  # lattice corner shared by the three marks
    row: int
    type: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Symmetry:
    kind: str  # "reflect-ad" (x=-y), "reflect-d" (x=y), "rot180"


Move = Union[CyclicRow, CyclicCol, CommuteCols, CommuteRows, Stabilize, Destabilize, Symmetry]

SYMMETRIES = ("reflect-ad", "reflect-d", "rot180")


def _from_cells(n: int, xs: Iterable[tuple[int, int]], os_: Iterable[tuple[int, int]]) -> GridDiagram:
    x_rows = [-1] * n
    o_rows = [-1] * n
    for c, r in xs:
        x_rows[c] = r
    for c, r in os_:
        o_rows[c] = r
    return GridDiagram(tuple(x_rows), tuple(o_rows))


def _cells(G: GridDiagram):
    return list(enumerate(G.x_rows)), list(enumerate(G.o_rows))


def transpose(G: GridDiagram) -> GridDiagram:
    """Reflection through x=y: cell (c, r) -> (r, c)."""
    return GridDiagram(G.x_cols, G.o_cols)


def apply_symmetry(G: GridDiagram, kind: str) -> GridDiagram:
    n = G.n
    if kind == "reflect-ad":
        f = lambda c, r: (n - 1 - r, n - 1 - c)  # noqa: E731
    elif kind == "reflect-d":
        f = lambda c, r: (r, c)  # noqa: E731
    elif kind == "rot180":
        f = lambda c, r: (n - 1 - c, n - 1 - r)  # noqa: E731
    else:
        raise ValueError(f"unknown symmetry {kind!r}")
    xs, os_ = _cells(G)
    return _from_cells(n, (f(*p) for p in xs), (f(*p) for p in os_))


def commutation_legal(G: GridDiagram, col: int) -> tuple[bool, str]:
    n = G.n
    c0, c1 = col % n, (col + 1) % n
    p = (G.x_rows[c0], G.o_rows[c0])
    q = (G.x_rows[c1], G.o_rows[c1])
    if len({*p, *q}) < 4:
        return False, f"columns {c0} and {c1} share a mark row"
    lo = p[0]
    span = (p[1] - lo) % n
    inside = sum(1 for r in q if 0 < (r - lo) % n < span)
    if inside == 1:
        return False, f"mark rows of columns {c0} and {c1} interleave"
    return True, ""


def _commute_cols(G: GridDiagram, col: int) -> GridDiagram:
    if not 0 <= col < G.n:
        raise IllegalMove(f"column index {col} out of range for n={G.n}")
    ok, why = commutation_legal(G, col)
    if not ok:
        raise IllegalMove(f"commutation at column {col}: {why}")
    c0, c1 = col, (col + 1) % G.n
    xs, os_ = list(G.x_rows), list(G.o_rows)
    xs[c0], xs[c1] = xs[c1], xs[c0]
    os_[c0], os_[c1] = os_[c1], os_[c0]
    return GridDiagram(tuple(xs), tuple(os_))


def _block_cell(direction: str, left: int, right: int, bottom: int, top: int) -> tuple[int, int]:
    return (right if direction[1] == "E" else left, top if direction[0] == "N" else bottom)


def _stabilize(G: GridDiagram, m: Stabilize) -> GridDiagram:
    n = G.n
    if m.mark not in ("X", "O") or m.direction not in DIRECTIONS:
        raise IllegalMove(f"unknown stabilization type {m.mark}:{m.direction}")
    if not 0 <= m.col < n:
        raise IllegalMove(f"column index {m.col} out of range for n={n}")
    cx = m.col
    if m.mark == "X":
        rx = G.x_rows[cx]
        col_partner_row = G.o_rows[cx]
        row_partner_col = G.o_cols[rx]
    else:
        rx = G.o_rows[cx]
        col_partner_row = G.x_rows[cx]
        row_partner_col = G.x_cols[rx]
    other = "O" if m.mark == "X" else "X"
    cmap = lambda c: c if c <= cx else c + 1  # noqa: E731
    rmap = lambda r: r if r <= rx else r + 1  # noqa: E731
    left, right, bottom, top = cx, cx + 1, rx, rx + 1
    odd_dir = _OPPOSITE[m.direction]
    odd = _block_cell(odd_dir, left, right, bottom, top)
    same = [
        _block_cell(d, left, right, bottom, top) for d in DIRECTIONS if d not in (m.direction, odd_dir)
    ]
    cells = {"X": [], "O": []}
    cells[m.mark].extend(same)
    cells[other].append(odd)
    # the partner marks move into the block column/row that lacks the odd mark
    partner_col = right if odd[0] == left else left
    partner_row = top if odd[1] == bottom else bottom
    cells[other].append((partner_col, rmap(col_partner_row)))
    cells[other].append((cmap(row_partner_col), partner_row))
    for c in range(n):
        for kind, rows in (("X", G.x_rows), ("O", G.o_rows)):
            r = rows[c]
            if c == cx:
                continue  # both marks of this column handled above
            if r == rx:
                continue  # the row partner, handled above
            cells[kind].append((cmap(c), rmap(r)))
    return _from_cells(n + 1, cells["X"], cells["O"])


def destabilization_type(G: GridDiagram, col: int, row: int) -> str | None:
    """Type such as ``X:SW`` of the destabilization at lattice corner (col,row)."""
    squares = {
        "NE": G.mark_at(col, row),
        "NW": G.mark_at(col - 1, row),
        "SW": G.mark_at(col - 1, row - 1),
        "SE": G.mark_at(col, row - 1),
    }
    empty = [d for d, v in squares.items() if v is None]
    if len(empty) != 1:
        return None
    shared = [squares[d] for d in DIRECTIONS if d not in (empty[0], _OPPOSITE[empty[0]])]
    return f"{shared[0]}:{empty[0]}"


def _destabilize(G: GridDiagram, m: Destabilize) -> GridDiagram:
    n = G.n
    if not (0 <= m.col < n and 0 <= m.row < n):
        raise IllegalMove(f"corner ({m.col},{m.row}) out of range for n={n}")
    if n <= 2:
        raise IllegalMove("cannot destabilize a grid of size 2")
    typ = destabilization_type(G, m.col, m.row)
    if typ is None:
        raise IllegalMove(f"no destabilizable corner at ({m.col},{m.row})")
    if m.col == 0:
        return _destabilize(_cyclic_col(G, 1), Destabilize(1, m.row))
    if m.row == 0:
        return _destabilize(_cyclic_row(G, 1), Destabilize(m.col, 1))
    i, j = m.col, m.row
    corner_dir = _OPPOSITE[typ[2:]]
    a_col, _ = _block_cell(corner_dir, i - 1, i, j - 1, j)
    cmap = lambda c: c if c < i else c - 1  # noqa: E731
    rmap = lambda r: r if r < j else r - 1  # noqa: E731
    xs, os_ = [], []
    for c in range(n):
        if c == a_col:
            continue  # the vertically stacked X/O pair is removed
        xs.append((cmap(c), rmap(G.x_rows[c])))
        os_.append((cmap(c), rmap(G.o_rows[c])))
    return _from_cells(n - 1, xs, os_)


def _cyclic_col(G: GridDiagram, shift: int) -> GridDiagram:
    n = G.n
    xs = [0] * n
    os_ = [0] * n
    for c in range(n):
        xs[(c + shift) % n] = G.x_rows[c]
        os_[(c + shift) % n] = G.o_rows[c]
    return GridDiagram(tuple(xs), tuple(os_))


def _cyclic_row(G: GridDiagram, shift: int) -> GridDiagram:
    n = G.n
    return GridDiagram(
        tuple((r + shift) % n for r in G.x_rows), tuple((r + shift) % n for r in G.o_rows)
    )


def apply_move(G: GridDiagram, m: Move) -> GridDiagram:
    match m:
        case CyclicCol(shift):
            return _cyclic_col(G, shift)
        case CyclicRow(shift):
            return _cyclic_row(G, shift)
        case CommuteCols(col):
            return _commute_cols(G, col)
        case CommuteRows(row):
            if not 0 <= row < G.n:
                raise IllegalMove(f"row index {row} out of range for n={G.n}")
            try:
                return transpose(_commute_cols(transpose(G), row))
            except IllegalMove as exc:
                raise IllegalMove(str(exc).replace("column", "row")) from None
        case Stabilize():
            return _stabilize(G, m)
        case Destabilize():
            return _destabilize(G, m)
        case Symmetry(kind):
            return apply_symmetry(G, kind)
    raise TypeError(f"not a move: {m!r}")


def resolve(G: GridDiagram, m: Move) -> Move:
    """Fill in derived data (the destabilization type) for a move on ``G``."""
    if isinstance(m, Destabilize):
        typ = destabilization_type(G, m.col, m.row)
        if typ is None:
            raise IllegalMove(f"no destabilizable corner at ({m.col},{m.row})")
        return Destabilize(m.col, m.row, typ)
    return m


def inverse_moves(G: GridDiagram, m: Move) -> list[Move]:
    """Moves that undo ``m`` when applied to ``apply_move(G, m)``."""
    n = G.n
    match m:
        case CyclicCol(shift):
            return [CyclicCol(-shift)]
        case CyclicRow(shift):
            return [CyclicRow(-shift)]
        case CommuteCols() | CommuteRows():
            return [m]
        case Symmetry():
            return [m]
        case Stabilize(mark, col, direction):
            return [Destabilize(col + 1, G.x_rows[col] + 1 if mark == "X" else G.o_rows[col] + 1,
                                m.type)]
        case Destabilize(col, row):
            typ = destabilization_type(G, col, row)
            if typ is None:
                raise IllegalMove(f"no destabilizable corner at ({col},{row})")
            mark, direction = typ.split(":")
            undo: list[Move] = [Stabilize(mark, (col - 1) % n if col else 0, direction)]
            if col == 0:
                undo.append(CyclicCol(-1))
            if row == 0:
                undo.append(CyclicRow(-1))
            return undo
    raise TypeError(f"not a move: {m!r}")


def apply_moves(G: GridDiagram, moves: Iterable[Move]) -> GridDiagram:
    for m in moves:
        G = apply_move(G, m)
    return G


# ---------------------------------------------------------------------------
# move scripts

_STAB_RE = re.compile(r"^([XO]):(NW|NE|SW|SE)$", re.IGNORECASE)


def parse_script(text: str) -> list[Move]:
    """Parse ``cyc-row K; comm-col C; stab X:SW COL; destab COL ROW; rot180; ...``."""
    moves: list[Move] = []
    for raw in text.split(";"):
        toks = raw.split()
        if not toks:
            continue
        cmd, args = toks[0].lower(), toks[1:]
        try:
            if cmd in ("cyc-row", "cyc-col", "comm-col", "comm-row") and len(args) == 1:
                k = int(args[0])
                moves.append(
                    {"cyc-row": CyclicRow, "cyc-col": CyclicCol, "comm-col": CommuteCols,
                     "comm-row": CommuteRows}[cmd](k)
                )
            elif cmd == "stab" and len(args) == 2:
                m = _STAB_RE.match(args[0])
                if not m:
                    raise GridSyntaxError(f"bad stabilization type {args[0]!r}")
                moves.append(Stabilize(m.group(1).upper(), int(args[1]), m.group(2).upper()))
            elif cmd == "destab" and len(args) == 2:
                moves.append(Destabilize(int(args[0]), int(args[1])))
            elif cmd in SYMMETRIES and not args:
                moves.append(Symmetry(cmd))
            else:
                raise GridSyntaxError(f"unrecognised move command {raw.strip()!r}")
        except ValueError:
            raise GridSyntaxError(f"bad integer in move command {raw.strip()!r}") from None
    return moves


def format_move(m: Move) -> str:
    match m:
        case CyclicRow(k):
            return f"cyc-row {k}"
        case CyclicCol(k):
            return f"cyc-col {k}"
        case CommuteCols(c):
            return f"comm-col {c}"
        case CommuteRows(r):
            return f"comm-row {r}"
        case Stabilize(mark, col, direction):
            return f"stab {mark}:{direction} {col}"
        case Destabilize(col, row):
            return f"destab {col} {row}"
        case Symmetry(kind):
            return kind
    raise TypeError(f"not a move: {m!r}")


def format_script(moves: Iterable[Move]) -> str:
    return "; ".join(format_move(m) for m in moves)
