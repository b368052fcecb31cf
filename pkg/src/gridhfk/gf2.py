"""Exact linear algebra over GF(2) with Python integers as bitsets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DimensionMismatch


def bits_of(indices: Iterable[int]) -> int:
    v = 0
    for i in indices:
        v ^= 1 << i
    return v


def support(v: int) -> list[int]:
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


@dataclass
class EchelonBasis:
    """Incrementally built column-echelon basis with combination certificates.

    Each stored vector is keyed by its highest set bit.  ``combo`` records,
    as a bitset over insertion order, which input columns sum to it.
    """

    _pivots: dict[int, tuple[int, int]] = field(default_factory=dict)
    _added: int = 0

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def reduce(self, v: int) -> tuple[int, int]:
        """Return (residual, combination) with v = residual + span(combination)."""
        combo = 0
        pivots = self._pivots
        while v:
            top = v.bit_length() - 1
            hit = pivots.get(top)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        return v, combo

    def add(self, v: int) -> bool:
        """Append a column; returns whether it increased the rank."""
        j = self._added
        self._added += 1
        residual, combo = self.reduce(v)
        if not residual:
            return False
        self._pivots[residual.bit_length() - 1] = (residual, combo ^ (1 << j))
        return True

    def solve(self, target: int) -> int | None:
        """Bitset of input columns summing to ``target``, or None."""
        residual, combo = self.reduce(target)
        return None if residual else combo


def rank(columns: Iterable[int]) -> int:
    """Rank of the matrix whose columns are the given bitsets."""
    pivots: dict[int, int] = {}
    for v in columns:
        while v:
            top = v.bit_length() - 1
            hit = pivots.get(top)
            if hit is None:
                pivots[top] = v
                break
            v ^= hit
    return len(pivots)


@dataclass(frozen=True)
class SparseGF2Matrix:
    """Column-sparse GF(2) matrix; ``cols[j]`` lists the nonzero rows."""

    n_rows: int
    n_cols: int
    cols: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.cols) != self.n_cols:
            raise DimensionMismatch(f"{len(self.cols)} columns given, expected {self.n_cols}")
        fixed = []
        for j, col in enumerate(self.cols):
            odd: set[int] = set()
            for i in col:
                if not 0 <= i < self.n_rows:
                    raise DimensionMismatch(f"row {i} out of range in column {j}")
                odd ^= {i}
            fixed.append(tuple(sorted(odd)))
        object.__setattr__(self, "cols", tuple(fixed))

    @classmethod
    def from_pairs(cls, n_rows: int, n_cols: int, pairs: Iterable[tuple[int, int]]) -> "SparseGF2Matrix":
        cols: list[list[int]] = [[] for _ in range(n_cols)]
        for i, j in pairs:
            if not 0 <= j < n_cols:
                raise DimensionMismatch(f"column {j} out of range")
            cols[j].append(i)
        return cls(n_rows, n_cols, tuple(tuple(c) for c in cols))

    def bitsets(self) -> list[int]:
        return [bits_of(c) for c in self.cols]

    def rank(self) -> int:
        return rank(self.bitsets())

    def reduce(self) -> EchelonBasis:
        basis = EchelonBasis()
        for v in self.bitsets():
            basis.add(v)
        return basis

    def solve(self, target: Sequence[int]) -> list[int] | None:
        """Columns whose sum is the vector with support ``target``."""
        if any(not 0 <= i < self.n_rows for i in target):
            raise DimensionMismatch("target has entries outside the row range")
        combo = self.reduce().solve(bits_of(target))
        return None if combo is None else support(combo)

    def to_triplets(self) -> str:
        """Sparse debug export: one ``row col`` line per nonzero entry."""
        return "\n".join(f"{i} {j}" for j, col in enumerate(self.cols) for i in col)
