"""Exact linear algebra on compressed binary vectors and matrices.

No algorithm here beats the decompress-then-solve bound in general; the
run-merge strategy only avoids materializing the vectors.  Its running time
is proportional to the total number of runs (at most N).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence, Union

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch
from .rle import MergeStats, RleSeq, merge_runs, rle_decode, rle_encode, slp_to_rle
from .slp import DEFAULT_BUDGET, RunStream, Slp, expand

Representation = Union[Slp, RleSeq, str]
STRATEGIES = ("decompress", "run_merge", "rle_fast")


@dataclass(frozen=True)
class CompressedVector:
    rep: Representation

    def __post_init__(self):
        if isinstance(self.rep, str) and set(self.rep) - {"0", "1"}:
            raise ValueError("dense vectors must be '0'/'1' strings")

    @property
    def dimension(self) -> int:
        return len(self.rep)

    def ones(self) -> int:
        if isinstance(self.rep, str):
            return self.rep.count("1")
        return self.rep.ones()

    def runs(self):
        if isinstance(self.rep, Slp):
            return RunStream(self.rep)
        if isinstance(self.rep, RleSeq):
            return iter(self.rep.runs)
        return iter(_dense_to_rle(self.rep).runs)

    def to_rle(self) -> RleSeq:
        if isinstance(self.rep, Slp):
            return slp_to_rle(self.rep)
        if isinstance(self.rep, RleSeq):
            return self.rep
        return _dense_to_rle(self.rep)

    def to_bits(self, budget: int = DEFAULT_BUDGET) -> str:
        if isinstance(self.rep, Slp):
            return expand(self.rep, budget)
        if isinstance(self.rep, RleSeq):
            return rle_decode(self.rep, budget)
        if len(self.rep) > budget:
            raise BudgetExceeded(f"vector of length {len(self.rep)} exceeds budget {budget}")
        return self.rep


def _dense_to_rle(bits: str) -> RleSeq:
    return rle_encode(bits)


def as_vector(x) -> CompressedVector:
    return x if isinstance(x, CompressedVector) else CompressedVector(x)


def _bits_array(bits: str) -> np.ndarray:
    return np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")


def inner_product(a, b, strategy: str = "run_merge", budget: int = DEFAULT_BUDGET,
                  stats: MergeStats | None = None) -> int:
    """Exact inner product of two binary vectors of equal dimension.

    strategy is one of ``decompress`` (materialize both vectors),
    ``run_merge`` (merge two lazily produced run streams) or ``rle_fast``
    (convert both sides to RLE first, then merge).
    """
    a, b = as_vector(a), as_vector(b)
    if a.dimension != b.dimension:
        raise DimensionMismatch(f"dimensions differ: {a.dimension} vs {b.dimension}")
    if strategy == "decompress":
        va = _bits_array(a.to_bits(budget))
        vb = _bits_array(b.to_bits(budget))
        if stats is not None:
            stats.steps += a.dimension
        return int(np.dot(va.astype(np.int64), vb.astype(np.int64)))
    if strategy == "run_merge":
        return merge_runs(a.runs(), b.runs(), stats)
    if strategy == "rle_fast":
        return merge_runs(a.to_rle().runs, b.to_rle().runs, stats)
    raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")


def squared_l2_distance(a, b, strategy: str = "run_merge") -> int:
    """Squared Euclidean distance; for 0/1 vectors this is |a| + |b| - 2<a, b>."""
    a, b = as_vector(a), as_vector(b)
    ip = inner_product(a, b, strategy)
    return a.ones() + b.ones() - 2 * ip


@dataclass(frozen=True)
class CompressedMatrix:
    """A binary matrix stored either line by line or as one flattened grammar.

    ``mode="rows"``: ``lines[i]`` compresses row i.
    ``mode="cols"``: ``lines[j]`` compresses column j.
    ``mode="strong"``: ``slp`` compresses the row-major (``order="row"``)
    or column-major (``order="col"``) flattening.
    """

    n_rows: int
    n_cols: int
    mode: Literal["rows", "cols", "strong"] = "rows"
    lines: tuple = field(default=())
    slp: Slp | None = None
    order: Literal["row", "col"] = "row"

    def __post_init__(self):
        if self.mode == "rows":
            if len(self.lines) != self.n_rows:
                raise DimensionMismatch(f"{len(self.lines)} rows given, expected {self.n_rows}")
            for line in self.lines:
                if len(line) != self.n_cols:
                    raise DimensionMismatch(f"row of length {len(line)}, expected {self.n_cols}")
        elif self.mode == "cols":
            if len(self.lines) != self.n_cols:
                raise DimensionMismatch(f"{len(self.lines)} columns given, expected {self.n_cols}")
            for line in self.lines:
                if len(line) != self.n_rows:
                    raise DimensionMismatch(f"column of length {len(line)}, expected {self.n_rows}")
        elif self.mode == "strong":
            if self.slp is None or self.slp.length != self.n_rows * self.n_cols:
                raise DimensionMismatch("strong grammar length must equal rows * cols")
        else:
            raise ValueError(f"unknown mode {self.mode!r}")

    @classmethod
    def row_wise(cls, rows: Sequence[Representation]) -> "CompressedMatrix":
        rows = tuple(rows)
        n_cols = len(rows[0]) if rows else 0
        return cls(len(rows), n_cols, "rows", rows)

    @classmethod
    def col_wise(cls, cols: Sequence[Representation]) -> "CompressedMatrix":
        cols = tuple(cols)
        n_rows = len(cols[0]) if cols else 0
        return cls(n_rows, len(cols), "cols", cols)

    @classmethod
    def strong(cls, g: Slp, n_rows: int, n_cols: int, order: str = "row") -> "CompressedMatrix":
        return cls(n_rows, n_cols, "strong", (), g, order)

    def to_dense(self, budget: int = DEFAULT_BUDGET) -> np.ndarray:
        if self.n_rows * self.n_cols > budget:
            raise BudgetExceeded(f"{self.n_rows}x{self.n_cols} matrix exceeds budget {budget}")
        if self.mode == "rows":
            return np.array([_bits_array(as_vector(r).to_bits()) for r in self.lines],
                            dtype=np.uint8).reshape(self.n_rows, self.n_cols)
        if self.mode == "cols":
            return np.array([_bits_array(as_vector(c).to_bits()) for c in self.lines],
                            dtype=np.uint8).reshape(self.n_cols, self.n_rows).T.copy()
        flat = _bits_array(expand(self.slp, budget))
        if self.order == "row":
            return flat.reshape(self.n_rows, self.n_cols)
        return flat.reshape(self.n_cols, self.n_rows).T.copy()

    def row(self, i: int) -> CompressedVector:
        if self.mode == "rows":
            return as_vector(self.lines[i])
        dense = self.to_dense()
        return CompressedVector("".join("01"[x] for x in dense[i]))


def mat_vec(m: CompressedMatrix, v, strategy: str = "run_merge") -> list[int]:
    """Entry i is the inner product of row i with v."""
    v = as_vector(v)
    if m.n_cols != v.dimension:
        raise DimensionMismatch(f"matrix has {m.n_cols} columns, vector has dimension {v.dimension}")
    if m.mode != "rows":
        dense = m.to_dense()
        return [int(x) for x in dense.astype(np.int64) @ _bits_array(v.to_bits()).astype(np.int64)]
    return [inner_product(row, v, strategy) for row in m.lines]


def dense_mat_mul(a, b, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Exact integer product of two dense 0/1 matrices."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply shapes {a.shape} and {b.shape}")
    if a.shape[0] * b.shape[1] > budget:
        raise BudgetExceeded(f"product of size {a.shape[0]}x{b.shape[1]} exceeds budget {budget}")
    return a @ b
