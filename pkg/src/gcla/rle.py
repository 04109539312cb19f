"""Run-length encoded binary sequences and the one-pass inner product."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import BudgetExceeded, DimensionMismatch, FormatError, InvalidSymbol, LengthOverflow
from .slp import DEFAULT_BUDGET, MAX_LENGTH, Slp, run_stream


def _canonical(runs: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out: list[list[int]] = []
    total = 0
    for bit, length in runs:
        if bit not in (0, 1):
            raise InvalidSymbol(f"symbol {bit!r} is not in {{0, 1}}")
        if length < 0:
            raise ValueError(f"negative run length {length}")
        if length == 0:
            continue
        total += length
        if total > MAX_LENGTH:
            raise LengthOverflow(f"total length {total} exceeds 2^63-1")
        if out and out[-1][0] == bit:
            out[-1][1] += length
        else:
            out.append([int(bit), int(length)])
    return tuple((b, n) for b, n in out)


class RleSeq:
    """Canonical run-length encoding: adjacent runs always carry distinct bits.

    Non-canonical input (zero-length runs, repeated bits) is normalized.
    """

    __slots__ = ("_runs", "_length")

    def __init__(self, runs: Iterable[tuple[int, int]] = ()):
        self._runs = _canonical(runs)
        self._length = sum(n for _, n in self._runs)

    @property
    def runs(self) -> tuple[tuple[int, int], ...]:
        return self._runs

    @property
    def n_runs(self) -> int:
        return len(self._runs)

    @property
    def length(self) -> int:
        return self._length

    def __len__(self) -> int:
        return self._length

    def ones(self) -> int:
        return sum(n for b, n in self._runs if b)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RleSeq):
            return NotImplemented
        return self._runs == other._runs

    def __hash__(self) -> int:
        return hash(self._runs)

    def __repr__(self) -> str:
        body = "".join(f"({b},{n})" for b, n in self._runs[:8])
        more = "..." if len(self._runs) > 8 else ""
        return f"RleSeq({body}{more})"


def rle_encode(bits: str) -> RleSeq:
    runs = []
    i = 0
    while i < len(bits):
        c = bits[i]
        if c not in "01":
            raise InvalidSymbol(f"symbol {c!r} is not in {{0, 1}}")
        j = i
        while j < len(bits) and bits[j] == c:
            j += 1
        runs.append((int(c), j - i))
        i = j
    return RleSeq(runs)


def rle_decode(r: RleSeq, budget: int = DEFAULT_BUDGET) -> str:
    if r.length > budget:
        raise BudgetExceeded(f"decoded length {r.length} exceeds budget {budget}")
    return "".join("01"[b] * n for b, n in r.runs)


@dataclass
class MergeStats:
    """Counter filled in by the run-merge inner products."""

    steps: int = 0


def merge_runs(runs_a: Iterable[tuple[int, int]], runs_b: Iterable[tuple[int, int]],
               stats: MergeStats | None = None) -> int:
    """Inner product of two equally long run sequences by a two-cursor merge.

    Each step consumes the shorter of the two current runs, so the number of
    steps is at most (#runs of a) + (#runs of b) - 1.
    """
    ia, ib = iter(runs_a), iter(runs_b)
    bit_a, left_a = next(ia, (0, 0))
    bit_b, left_b = next(ib, (0, 0))
    total = 0
    steps = 0
    while left_a and left_b:
        steps += 1
        take = min(left_a, left_b)
        if bit_a and bit_b:
            total += take
        left_a -= take
        left_b -= take
        if not left_a:
            bit_a, left_a = next(ia, (0, 0))
        if not left_b:
            bit_b, left_b = next(ib, (0, 0))
    if left_a or left_b:
        raise DimensionMismatch("run sequences have different total lengths")
    if stats is not None:
        stats.steps += steps
    return total


def rle_inner_product(a: RleSeq, b: RleSeq, stats: MergeStats | None = None) -> int:
    if a.length != b.length:
        raise DimensionMismatch(f"lengths differ: {a.length} vs {b.length}")
    return merge_runs(a.runs, b.runs, stats)


def slp_to_rle(g: Slp) -> RleSeq:
    """Canonical RLE of an SLP's expansion, without materializing it."""
    return RleSeq(run_stream(g))


def dumps(r: RleSeq) -> str:
    """Serialize to the ``rle v1`` text format."""
    lines = [f"rle v1 {r.n_runs}"]
    lines.extend(f"{b} {n}" for b, n in r.runs)
    return "\n".join(lines) + "\n"


def loads(text: str) -> RleSeq:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty rle file")
    head = lines[0].split()
    if len(head) != 3 or head[:2] != ["rle", "v1"]:
        raise FormatError(f"bad rle header: {lines[0]!r}")
    n = int(head[2])
    if len(lines) - 1 != n:
        raise FormatError(f"header announces {n} runs, found {len(lines) - 1}")
    runs = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"bad run line {line!r}")
        b, length = int(parts[0]), int(parts[1])
        if length < 1:
            raise FormatError(f"run length must be positive: {line!r}")
        runs.append((b, length))
    return RleSeq(runs)
