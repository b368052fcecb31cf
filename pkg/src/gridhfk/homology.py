"""Bigraded homology of the tilde complex, bounding witnesses in the minus
complex, and tau from the Alexander filtration of the tilde complex."""

from __future__ import annotations

import itertools
import json
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .complex import (
    DEFAULT_MAX_N,
    FormalChain,
    Generator,
    check_size,
    generator_index,
    grading_table,
    rectangle_table,
)
from .errors import LimitExceeded, NotAKnot
from .gf2 import EchelonBasis, bits_of, rank, support
from .grid import GridDiagram, trace_components

DEFAULT_MAX_BUCKET = 10**6


def half(v2: int) -> int | float:
    """Expose a doubled grading as an int, or a half-integer float."""
    return v2 // 2 if v2 % 2 == 0 else v2 / 2


@dataclass(frozen=True)
class BigradedTable:
    variant: str
    n: int
    components: int
    ranks: dict[tuple[int, tuple[int, ...]], int]  # (m, doubled A) -> rank

    @property
    def total_rank(self) -> int:
        return sum(self.ranks.values())

    def entries(self) -> list[tuple[int, tuple[int | float, ...], int]]:
        return [(m, tuple(half(v) for v in a2), r) for (m, a2), r in sorted(self.ranks.items())]

    def to_json(self) -> str:
        return json.dumps(
            {"variant": self.variant, "ranks": [[m, list(a), r] for m, a, r in self.entries()]}
        )

    def to_text(self) -> str:
        """Aligned grid of ranks: Maslov rows descending, Alexander columns ascending."""
        if self.components != 1:
            lines = ["m\tA\trank"]
            lines += [f"{m}\t{','.join(map(str, a))}\t{r}" for m, a, r in self.entries()]
            return "\n".join(lines)
        if not self.ranks:
            return "(zero)"
        ms = sorted({m for m, _ in self.ranks})
        as2 = sorted({a2[0] for _, a2 in self.ranks})
        a_range = list(range(as2[0], as2[-1] + 1, 2))
        width = max(3, *(len(str(half(a))) for a in a_range), *(len(str(r)) for r in self.ranks.values()))
        head = "m\\A".rjust(5) + " " + " ".join(str(half(a)).rjust(width) for a in a_range)
        lines = [head]
        for m in reversed(range(ms[0], ms[-1] + 1)):
            cells = []
            for a in a_range:
                r = self.ranks.get((m, (a,)), 0)
                cells.append((str(r) if r else ".").rjust(width))
            lines.append(str(m).rjust(5) + " " + " ".join(cells))
        return "\n".join(lines)


def _bucket_labels(G: GridDiagram):
    """Label each generator by its (M, 2A) bucket; positions inside buckets."""
    t = grading_table(G)
    keys = np.column_stack([t.M, t.A2])
    uniq, labels = np.unique(keys, axis=0, return_inverse=True)
    labels = labels.reshape(-1)
    order = np.argsort(labels, kind="stable")
    counts = np.bincount(labels, minlength=len(uniq))
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    pos = np.empty(len(labels), dtype=np.int64)
    pos[order] = np.arange(len(labels)) - np.repeat(starts, counts)
    bucket_keys = [(int(k[0]), tuple(int(v) for v in k[1:])) for k in uniq]
    return bucket_keys, labels, pos, counts


def tilde_homology_table(G: GridDiagram, max_n: int = DEFAULT_MAX_N) -> BigradedTable:
    check_size(G.n, max_n)
    T = rectangle_table(G, max_n)
    keys, labels, pos, counts = _bucket_labels(G)
    sel = T.mask("tilde")
    cols: dict[int, int] = defaultdict(int)
    for s, d in zip(T.src[sel].tolist(), T.dst[sel].tolist()):
        cols[s] ^= 1 << int(pos[d])
    by_bucket: dict[int, list[int]] = defaultdict(list)
    for s, v in cols.items():
        if v:
            by_bucket[int(labels[s])].append(v)
    brank = {b: rank(vs) for b, vs in by_bucket.items()}
    index = {k: i for i, k in enumerate(keys)}
    ranks = {}
    for i, (m, a2) in enumerate(keys):
        up = index.get((m + 1, a2))
        r = int(counts[i]) - brank.get(i, 0) - (brank.get(up, 0) if up is not None else 0)
        if r:
            ranks[(m, a2)] = r
    return BigradedTable("tilde", G.n, len(keys[0][1]), ranks)


def reduced_ranks(table: BigradedTable, sizes: Sequence[int]) -> tuple | None:
    """Tilde ranks with the grid-size factors divided out, as sorted items.

    The tilde homology of a diagram is the hat homology tensored with one
    copy of F(0,0) + F(-1, -e_i) for each of the n_i - 1 extra O's on
    component i; dividing those out makes diagrams of different sizes
    comparable.  Returns None if the division is not exact.
    """
    poly = dict(table.ranks)
    for i, n_i in enumerate(sizes):
        for _ in range(n_i - 1):
            poly = _divide_v(poly, i)
            if poly is None:
                return None
    return tuple(sorted((k, v) for k, v in poly.items() if v))


def _divide_v(poly, comp: int):
    """Divide a Poincare polynomial by 1 + q, q shifting (m, 2A_comp) by (-1, -2)."""
    rem = Counter(poly)
    out = Counter()
    # peel from the top Maslov degree down
    for m, a in sorted(rem, key=lambda k: (-k[0], [-v for v in k[1]])):
        c = rem.get((m, a), 0)
        if not c:
            continue
        if c < 0:
            return None
        out[(m, a)] += c
        rem[(m, a)] -= c
        low = (m - 1, tuple(v - 2 if k == comp else v for k, v in enumerate(a)))
        rem[low] = rem.get(low, 0) - c
    if any(rem.values()):
        return None
    return out


# ---------------------------------------------------------------------------
# bounding witnesses in the minus complex


def _compositions(cols: Sequence[int], d: int) -> Iterator[Counter]:
    for combo in itertools.combinations_with_replacement(cols, d):
        yield Counter(combo)


def _exponent_vectors(n: int, comp_cols: Sequence[Sequence[int]], degrees: Sequence[int]):
    for parts in itertools.product(*(_compositions(c, d) for c, d in zip(comp_cols, degrees))):
        u = [0] * n
        for part in parts:
            for c, e in part.items():
                u[c] += e
        yield tuple(u)


def _count_compositions(k: int, d: int) -> int:
    from math import comb
    return comb(d + k - 1, k - 1)


def witness_bucket(
    G: GridDiagram, m: int, a2: Sequence[int], max_u: int | None = None,
    max_bucket: int = DEFAULT_MAX_BUCKET, max_n: int = DEFAULT_MAX_N,
) -> list[tuple[int, tuple[int, ...]]]:
    """All monomials (generator index, U exponents) in bucket (m, a2).

    The per-component U-degree of a monomial on ``g`` is forced to be
    (A_i(g) - a_i); ``max_u`` optionally caps the total degree.
    """
    check_size(G.n, max_n)
    P = trace_components(G)
    t = grading_table(G)
    a2 = np.asarray(a2, dtype=np.int64)
    diff = t.A2 - a2
    ok = (diff >= 0).all(axis=1) & (diff % 2 == 0).all(axis=1)
    deg = diff // 2
    ok &= t.M - 2 * deg.sum(axis=1) == m
    if max_u is not None:
        ok &= deg.sum(axis=1) <= max_u
    idxs = np.nonzero(ok)[0]
    total = 0
    for i in idxs:
        c = 1
        for cols, d in zip(P.columns, deg[i]):
            c *= _count_compositions(len(cols), int(d))
        total += c
        if total > max_bucket:
            raise LimitExceeded(f"witness bucket exceeds {max_bucket} monomials")
    out = []
    for i in idxs:
        for u in _exponent_vectors(G.n, P.columns, [int(d) for d in deg[i]]):
            out.append((int(i), u))
    return out


def _minus_image(G: GridDiagram, g_index: int, u: tuple[int, ...]) -> list[tuple[int, tuple[int, ...]]]:
    T = rectangle_table(G)
    sl = T.rows_of(g_index)
    out = []
    for d, nx, bits in zip(T.dst[sl].tolist(), T.n_x[sl].tolist(), T.o_bits[sl].tolist()):
        if nx:
            continue
        if bits:
            ue = list(u)
            for c in support(bits):
                ue[c] += 1
            out.append((d, tuple(ue)))
        else:
            out.append((d, u))
    return out


def bounds_witness(
    G: GridDiagram, target: FormalChain, max_u: int | None = None,
    max_bucket: int = DEFAULT_MAX_BUCKET, max_n: int = DEFAULT_MAX_N,
) -> FormalChain | None:
    """A chain Y in the minus complex with dY = target, or None.

    The solve is exact over GF(2); with ``max_u`` left at its default the
    whole grading-feasible bucket is searched, so None proves ``target`` is
    not a boundary.
    """
    if not target.terms:
        return FormalChain(frozenset())
    all_gens = grading_table(G).P
    cand = witness_bucket(G, target.m + 1, target.a2, max_u, max_bucket, max_n)
    row_of: dict[tuple[int, tuple[int, ...]], int] = {}

    def row(mono) -> int:
        r = row_of.get(mono)
        if r is None:
            r = row_of[mono] = len(row_of)
        return r

    want = bits_of(row((generator_index(g), tuple(u))) for g, u in target.terms)
    basis = EchelonBasis()
    images = []
    for gi, u in cand:
        v = 0
        for mono in _minus_image(G, gi, u):
            v ^= 1 << row(mono)
        images.append(v)
        basis.add(v)
    combo = basis.solve(want)
    if combo is None:
        return None
    chosen = support(combo)
    check = 0
    for j in chosen:
        check ^= images[j]
    assert check == want, "witness certificate failed to reproduce the target"
    terms = [(tuple(int(v) for v in all_gens[cand[j][0]]), cand[j][1]) for j in chosen]
    return FormalChain.of(G, terms)


# ---------------------------------------------------------------------------
# tau


@dataclass(frozen=True)
class TauResult:
    tau_tilde: int
    tau: int
    witness: Generator  # lowest-filtration generator of a non-bounding cycle
    maslov: int

    def as_dict(self) -> dict:
        return {"tau_tilde": self.tau_tilde, "tau": self.tau}


def tau(G: GridDiagram, max_n: int = DEFAULT_MAX_N) -> TauResult:
    """tau of the knot presented by ``G`` via the filtered tilde complex.

    Persistence reduction with columns ordered by Alexander grading, then
    lexicographically; tau-tilde is the lowest birth level of an essential
    class and tau = tau-tilde + n - 1.
    """
    if trace_components(G).count != 1:
        raise NotAKnot("tau needs a one-component diagram")
    check_size(G.n, max_n)
    t = grading_table(G)
    T = rectangle_table(G, max_n)
    A2 = t.A2[:, 0]
    # filtration order inside each Maslov degree
    order = np.lexsort((np.arange(len(A2)), A2))
    pos = np.empty(len(A2), dtype=np.int64)
    by_m: dict[int, list[int]] = defaultdict(list)
    for i in order.tolist():
        m = int(t.M[i])
        pos[i] = len(by_m[m])
        by_m[m].append(i)
    sel = T.mask("filtered")
    bd: dict[int, int] = defaultdict(int)
    for s, d in zip(T.src[sel].tolist(), T.dst[sel].tolist()):
        bd[s] ^= 1 << int(pos[d])
    lows_hit: dict[int, set[int]] = {}  # degree -> positions killed as boundaries
    zero_cols: dict[int, list[int]] = {}
    for m, gens in by_m.items():
        pivots: dict[int, int] = {}
        zeros = []
        for i in gens:
            v = bd.get(i, 0)
            while v:
                top = v.bit_length() - 1
                hit = pivots.get(top)
                if hit is None:
                    pivots[top] = v
                    break
                v ^= hit
            if not v:
                zeros.append(i)
        lows_hit[m - 1] = set(pivots)
        zero_cols[m] = zeros
    best = None
    for m, zeros in zero_cols.items():
        killed = lows_hit.get(m, set())
        for i in zeros:
            if int(pos[i]) not in killed:
                key = (int(A2[i]), int(pos[i]), m)
                if best is None or key < best[0]:
                    best = (key, i)
                break  # zeros are in filtration order; the first essential is lowest
    assert best is not None, "tilde complex must have nonzero homology"
    (a2, _, m), i = best
    assert a2 % 2 == 0
    tt = a2 // 2
    return TauResult(tt, tt + G.n - 1, tuple(int(v) for v in t.P[i]), m)
