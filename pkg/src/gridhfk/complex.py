"""Generators, gradings, rectangles and the differentials of the grid complex.

Generators are permutations ``rows`` with ``rows[c]`` the row of the lattice
point on vertical circle ``c``.  They are indexed by their rank in
lexicographic order, which coincides with the order of the base-``n`` code
``sum(rows[c] * n**(n-1-c))``; the code of a generator differing from ``x`` in
two columns is an O(1) update of the code of ``x``.

Alexander gradings are carried doubled (``A2 = 2*A``) so everything stays
integral.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import LimitExceeded
from .grid import ComponentPartition, GridDiagram, trace_components

Generator = tuple[int, ...]

DEFAULT_MAX_N = 10
VARIANTS = ("tilde", "hat", "minus")


# ---------------------------------------------------------------------------
# the J pairing on planar point sets


def _count_less(ax, ay, bx, by) -> np.ndarray:
    """I(A,B): pairs a in A, b in B with a < b in both coordinates.

    ``ax, ay`` have shape (N, k) or (k,); ``bx, by`` shape (N, m) or (m,).
    Coordinates are doubled so marks at cell centres are odd integers.
    """
    ax, ay, bx, by = (np.atleast_2d(np.asarray(v, dtype=np.int64)) for v in (ax, ay, bx, by))
    lt = (ax[:, :, None] < bx[:, None, :]) & (ay[:, :, None] < by[:, None, :])
    return lt.sum(axis=(1, 2))


def jfun(A: Sequence[tuple[float, float]], B: Sequence[tuple[float, float]]) -> float:
    """J(A, B) = (I(A,B) + I(B,A)) / 2 for planar point sets."""
    def I(P, Q):
        return sum(1 for p in P for q in Q if p[0] < q[0] and p[1] < q[1])
    return (I(A, B) + I(B, A)) / 2


def _point_coords(rows: np.ndarray, domain: str) -> tuple[np.ndarray, np.ndarray]:
    n = rows.shape[-1]
    cols = np.arange(n)
    if domain == "upper":
        # fundamental domain with right and top edges: lattice 0 becomes n
        cols = np.where(cols == 0, n, cols)
        rows = np.where(rows == 0, n, rows)
    elif domain != "lower":
        raise ValueError(f"unknown fundamental domain {domain!r}")
    return 2 * np.broadcast_to(cols, rows.shape), 2 * rows


def _mark_coords(G: GridDiagram, kind: str, cols: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    rows = G.x_rows if kind == "X" else G.o_rows
    cols = np.asarray(cols, dtype=np.int64)
    return 2 * cols + 1, 2 * np.asarray([rows[c] for c in cols], dtype=np.int64) + 1


def _K(ax, ay, bx, by) -> np.ndarray:
    return _count_less(ax, ay, bx, by) + _count_less(bx, by, ax, ay)


def _chunks(P: np.ndarray, size: int = 20000):
    for start in range(0, len(P), size):
        yield P[start:start + size]


def maslov_array(G: GridDiagram, P: np.ndarray, marks: str = "O", domain: str = "lower") -> np.ndarray:
    """M_S for each row of ``P``: J(x-S, x-S) + 1 with S the O (or X) marks."""
    mx, my = _mark_coords(G, marks, range(G.n))
    ss = int(_count_less(mx, my, mx, my)[0])
    out = []
    for chunk in _chunks(np.atleast_2d(P)):
        px, py = _point_coords(chunk, domain)
        out.append(_count_less(px, py, px, py) - _K(px, py, mx, my) + ss + 1)
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


@lru_cache(maxsize=64)
def _alexander_constants(G: GridDiagram) -> tuple[tuple[tuple[int, ...], int], ...]:
    P = trace_components(G)
    xx, xy = _mark_coords(G, "X", range(G.n))
    ox, oy = _mark_coords(G, "O", range(G.n))
    consts = []
    for cols in P.columns:
        xix, xiy = _mark_coords(G, "X", cols)
        oix, oiy = _mark_coords(G, "O", cols)
        bracket = int(
            _K(xx, xy, xix, xiy)[0] - _K(xx, xy, oix, oiy)[0]
            + _K(ox, oy, xix, xiy)[0] - _K(ox, oy, oix, oiy)[0]
        )
        assert bracket % 2 == 0, "Alexander normalisation bracket must be even"
        consts.append((cols, bracket // 2 + len(cols) - 1))
    return tuple(consts)


def alexander2_array(G: GridDiagram, P: np.ndarray, domain: str = "lower") -> np.ndarray:
    """Doubled Alexander multi-grading, shape (N, components).

    2 A_i = 2 J(x - (X+O)/2, X_i - O_i) - (n_i - 1).
    """
    consts = _alexander_constants(G)
    blocks = []
    for chunk in _chunks(np.atleast_2d(P)):
        px, py = _point_coords(chunk, domain)
        cols_out = []
        for cols, shift in consts:
            xix, xiy = _mark_coords(G, "X", cols)
            oix, oiy = _mark_coords(G, "O", cols)
            cols_out.append(_K(px, py, xix, xiy) - _K(px, py, oix, oiy) - shift)
        blocks.append(np.stack(cols_out, axis=1))
    if not blocks:
        return np.zeros((0, len(consts)), dtype=np.int64)
    return np.concatenate(blocks)


def maslov(G: GridDiagram, g: Sequence[int], marks: str = "O", domain: str = "lower") -> int:
    return int(maslov_array(G, np.asarray([g]), marks, domain)[0])


def alexander2(G: GridDiagram, g: Sequence[int], domain: str = "lower") -> tuple[int, ...]:
    return tuple(int(v) for v in alexander2_array(G, np.asarray([g]), domain)[0])


def alexander(G: GridDiagram, g: Sequence[int]) -> tuple[float, ...] | float:
    """Alexander grading: a number for knots, a tuple for links (halves allowed)."""
    a2 = alexander2(G, g)
    vals = tuple(v // 2 if v % 2 == 0 else v / 2 for v in a2)
    return vals[0] if len(vals) == 1 else vals


# ---------------------------------------------------------------------------
# generators


def check_size(n: int, max_n: int = DEFAULT_MAX_N) -> None:
    if n > max_n:
        raise LimitExceeded(f"grid number {n} exceeds the enumeration bound {max_n}")


@lru_cache(maxsize=4)
def all_generators(n: int) -> np.ndarray:
    """All n! generators as an (n!, n) int8 array in lexicographic order."""
    P = np.fromiter(
        itertools.chain.from_iterable(itertools.permutations(range(n))),
        dtype=np.int8,
        count=math.factorial(n) * n,
    ).reshape(-1, n)
    P.setflags(write=False)
    return P


def _weights(n: int) -> np.ndarray:
    return n ** np.arange(n - 1, -1, -1, dtype=np.int64)


@lru_cache(maxsize=4)
def generator_codes(n: int) -> np.ndarray:
    return all_generators(n).astype(np.int64) @ _weights(n)


def generator_index(g: Sequence[int]) -> int:
    """Lexicographic rank of a permutation."""
    n = len(g)
    idx = 0
    remaining = list(range(n))
    for i, v in enumerate(g):
        pos = remaining.index(v)
        idx += pos * math.factorial(n - 1 - i)
        remaining.pop(pos)
    return idx


def enumerate_generators(
    G: GridDiagram,
    m: int | None = None,
    a2: Sequence[int] | None = None,
    max_n: int = DEFAULT_MAX_N,
) -> Iterator[Generator]:
    """Yield generators in lexicographic order, optionally filtered by grading."""
    check_size(G.n, max_n)
    table = grading_table(G)
    keep = np.ones(len(table.P), dtype=bool)
    if m is not None:
        keep &= table.M == m
    if a2 is not None:
        keep &= (table.A2 == np.asarray(a2)).all(axis=1)
    for row in table.P[keep]:
        yield tuple(int(v) for v in row)


@dataclass(frozen=True)
class GradingTable:
    P: np.ndarray  # (N, n) generators
    M: np.ndarray  # (N,) Maslov grading
    A2: np.ndarray  # (N, components) doubled Alexander grading


@lru_cache(maxsize=16)
def grading_table(G: GridDiagram) -> GradingTable:
    P = all_generators(G.n)
    return GradingTable(P, maslov_array(G, P), alexander2_array(G, P))


# ---------------------------------------------------------------------------
# rectangles


@dataclass(frozen=True)
class Rectangle:
    """Torus rectangle from ``source`` to ``target``.

    ``source`` occupies the lower-left corner (left, bottom) and the upper-right
    corner (right, bottom + height); ``target`` the other two.
    """

    source: Generator
    target: Generator
    left: int
    right: int
    bottom: int
    height: int
    empty: bool
    o_cols: tuple[int, ...]  # columns of the O marks inside
    x_cols: tuple[int, ...]

    @property
    def width(self) -> int:
        n = len(self.source)
        return (self.right - self.left) % n


def _rectangle(G: GridDiagram, x: Sequence[int], a: int, b: int) -> Rectangle:
    n = G.n
    p = x[a]
    h = (x[b] - p) % n
    w = (b - a) % n
    empty = all((x[(a + k) % n] - p) % n > h for k in range(1, w))
    cells = [(a + k) % n for k in range(w)]
    o_in = tuple(sorted(c for c in cells if (G.o_rows[c] - p) % n < h))
    x_in = tuple(sorted(c for c in cells if (G.x_rows[c] - p) % n < h))
    y = list(x)
    y[a], y[b] = y[b], y[a]
    return Rectangle(tuple(x), tuple(y), a, b, p, h, empty, o_in, x_in)


def rectangles(G: GridDiagram, x: Sequence[int], y: Sequence[int]) -> list[Rectangle]:
    """Rect(x, y): the two torus rectangles when x, y differ in two columns."""
    diff = [c for c in range(G.n) if x[c] != y[c]]
    if len(diff) != 2:
        return []
    c1, c2 = diff
    if x[c1] != y[c2] or x[c2] != y[c1]:
        return []
    return [_rectangle(G, x, c1, c2), _rectangle(G, x, c2, c1)]


def empty_rectangles(G: GridDiagram, x: Sequence[int], y: Sequence[int]) -> list[Rectangle]:
    return [r for r in rectangles(G, x, y) if r.empty]


def rectangles_out(G: GridDiagram, x: Sequence[int]) -> Iterator[Rectangle]:
    """Empty rectangles with ``x`` at the lower-left and upper-right corners."""
    n = G.n
    for a in range(n):
        p = x[a]
        lowest = n  # smallest height offset of a point strictly inside so far
        for w in range(1, n):
            b = (a + w) % n
            if w > 1:
                lowest = min(lowest, (x[(b - 1) % n] - p) % n)
            h = (x[b] - p) % n
            if h < lowest:
                yield _rectangle(G, x, a, b)


def rectangles_in(G: GridDiagram, x: Sequence[int]) -> Iterator[Rectangle]:
    """Empty rectangles whose target is ``x``."""
    n = G.n
    for a in range(n):
        for w in range(1, n):
            b = (a + w) % n
            # x sits at the upper-left (a) and lower-right (b) corners
            p = x[b]
            h = (x[a] - p) % n
            if all((x[(a + k) % n] - p) % n > h for k in range(1, w)):
                y = list(x)
                y[a], y[b] = y[b], y[a]
                yield _rectangle(G, y, a, b)


def hat_columns(G: GridDiagram, P: ComponentPartition | None = None) -> tuple[int, ...]:
    """Columns of the O marks whose variables are set to zero in the hat complex.

    One per component: the O in the component's lowest-indexed column.
    """
    P = P or trace_components(G)
    return tuple(cols[0] for cols in P.columns)


def rectangle_counts(r: Rectangle, variant: str, hat_cols: Sequence[int] = ()) -> bool:
    """Whether rectangle ``r`` contributes to the differential of ``variant``."""
    if not r.empty:
        return False
    if variant == "tilde":
        return not r.o_cols and not r.x_cols
    if variant == "minus":
        return not r.x_cols
    if variant == "hat":
        return not r.x_cols and not set(r.o_cols) & set(hat_cols)
    if variant == "filtered":
        return not r.o_cols
    raise ValueError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# vectorized rectangle table over all generators


@dataclass(frozen=True)
class RectangleTable:
    """All empty rectangles of a diagram, sorted by source index.

    ``o_bits`` is a bitmask over columns of the O marks inside, ``n_x`` the
    number of X marks inside.
    """

    src: np.ndarray
    dst: np.ndarray
    n_x: np.ndarray
    o_bits: np.ndarray
    offsets: np.ndarray  # CSR offsets into the arrays, length N+1

    def mask(self, variant: str, hat_bits: int = 0) -> np.ndarray:
        if variant == "tilde":
            return (self.n_x == 0) & (self.o_bits == 0)
        if variant == "minus":
            return self.n_x == 0
        if variant == "hat":
            return (self.n_x == 0) & ((self.o_bits & hat_bits) == 0)
        if variant == "filtered":
            return self.o_bits == 0
        raise ValueError(f"unknown variant {variant!r}")

    def rows_of(self, index: int) -> slice:
        return slice(int(self.offsets[index]), int(self.offsets[index + 1]))


@lru_cache(maxsize=8)
def rectangle_table(G: GridDiagram, max_n: int = 9) -> RectangleTable:
    n = G.n
    check_size(n, max_n)
    P = all_generators(n).astype(np.int64)
    N = len(P)
    codes = generator_codes(n)
    wts = _weights(n)
    xr = np.asarray(G.x_rows, dtype=np.int64)
    orow = np.asarray(G.o_rows, dtype=np.int64)
    idx = np.arange(N, dtype=np.int64)
    parts = []
    for a in range(n):
        p = P[:, a]
        lowest = np.full(N, n, dtype=np.int64)
        x_off = []
        o_off = []
        for w in range(1, n):
            b = (a + w) % n
            cc = (b - 1) % n  # newest cell column a+w-1
            if w > 1:
                np.minimum(lowest, (P[:, cc] - p) % n, out=lowest)
            x_off.append((xr[cc] - p) % n)
            o_off.append(((orow[cc] - p) % n, cc))
            h = (P[:, b] - p) % n
            sel = h < lowest
            if not sel.any():
                continue
            hs = h[sel]
            nx = np.zeros(len(hs), dtype=np.int8)
            for off in x_off:
                nx += off[sel] < hs
            bits = np.zeros(len(hs), dtype=np.int64)
            for off, col in o_off:
                bits |= (off[sel] < hs).astype(np.int64) << col
            delta = (P[sel, b] - P[sel, a]) * (wts[a] - wts[b])
            dst = np.searchsorted(codes, codes[sel] + delta)
            parts.append((idx[sel], dst, nx, bits))
    src = np.concatenate([q[0] for q in parts])
    dst = np.concatenate([q[1] for q in parts])
    nx = np.concatenate([q[2] for q in parts])
    bits = np.concatenate([q[3] for q in parts])
    order = np.argsort(src, kind="stable")
    src, dst, nx, bits = src[order], dst[order], nx[order], bits[order]
    offsets = np.searchsorted(src, np.arange(N + 1))
    return RectangleTable(src, dst, nx, bits, offsets)


# ---------------------------------------------------------------------------
# formal chains and boundary


Monomial = tuple[Generator, tuple[int, ...]]


@dataclass(frozen=True)
class FormalChain:
    """A GF(2) sum of monomials U^u * g in one bigrading bucket.

    ``m`` is the Maslov grading and ``a2`` the doubled Alexander multi-grading
    of every term (with each U_k lowering M by 2 and A_i by 1 for the
    component owning O_k).  Either may be None for the zero chain.
    """

    terms: frozenset[Monomial]
    m: int | None = None
    a2: tuple[int, ...] | None = None

    @classmethod
    def of(cls, G: GridDiagram, terms) -> "FormalChain":
        acc: set[Monomial] = set()
        for g, u in terms:
            mono = (tuple(int(v) for v in g), tuple(int(v) for v in u))
            acc ^= {mono}
        if not acc:
            return cls(frozenset())
        grades = {monomial_grading(G, mono) for mono in acc}
        if len(grades) != 1:
            raise ValueError(f"chain is not homogeneous: gradings {sorted(grades)}")
        m, a2 = grades.pop()
        return cls(frozenset(acc), m, a2)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "FormalChain") -> "FormalChain":
        if self.terms and other.terms and (self.m, self.a2) != (other.m, other.a2):
            raise ValueError("cannot add chains from different buckets")
        terms = self.terms ^ other.terms
        if not terms:
            return FormalChain(frozenset())
        m, a2 = (self.m, self.a2) if self.terms else (other.m, other.a2)
        return FormalChain(terms, m, a2)

    def sorted_terms(self) -> list[Monomial]:
        return sorted(self.terms)


def monomial_grading(G: GridDiagram, mono: Monomial) -> tuple[int, tuple[int, ...]]:
    g, u = mono
    P = trace_components(G)
    m = maslov(G, g) - 2 * sum(u)
    a2 = list(alexander2(G, g))
    for k, e in enumerate(u):
        a2[P.component_of_column[k]] -= 2 * e
    return m, tuple(a2)


def boundary(G: GridDiagram, g: Sequence[int], variant: str = "minus",
             u: Sequence[int] | None = None) -> FormalChain:
    """Differential of the monomial U^u * g in the given variant."""
    n = G.n
    u = tuple(u) if u is not None else (0,) * n
    hat = hat_columns(G)
    acc: set[Monomial] = set()
    for r in rectangles_out(G, g):
        if not rectangle_counts(r, variant, hat):
            continue
        if variant in ("tilde", "filtered"):
            mono = (r.target, (0,) * n)
        else:
            ue = list(u)
            for c in r.o_cols:
                ue[c] += 1
            mono = (r.target, tuple(ue))
        acc ^= {mono}
    if variant == "filtered":
        return FormalChain(frozenset(acc))  # lowers A, so no single bucket
    return FormalChain.of(G, acc)


def chain_boundary(G: GridDiagram, chain: FormalChain, variant: str = "minus") -> FormalChain:
    out = FormalChain(frozenset())
    for g, u in chain.terms:
        out = out + boundary(G, g, variant, u)
    return out
