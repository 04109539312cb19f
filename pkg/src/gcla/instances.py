"""Sum-problem instances and the ``sum v1`` text format."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import ElementOutOfUniverse, FormatError, InvalidInstance


@dataclass(frozen=True)
class SumInstance:
    """k sets of integers over a common universe.

    Unsigned instances live in {1..U} and ask for a_1 + ... + a_{k-1} = a_k,
    or for a_1 + ... + a_k = t when a target t is given.  Signed instances
    live in {-U..U} and ask for a + b + c = 0.

    Sets are stored sorted and duplicate-free.  ``m`` is the largest set
    size; sub-instances produced by splitting or by reduction modulo a prime
    may have smaller sets.
    """

    sets: tuple[tuple[int, ...], ...]
    U: int
    t: int | None = None
    signed: bool = False

    def __post_init__(self):
        sets = tuple(tuple(sorted(set(int(x) for x in s))) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        if len(sets) < 3:
            raise InvalidInstance(f"need at least 3 sets, got {len(sets)}")
        if self.U < 1:
            raise InvalidInstance("universe bound U must be >= 1")
        lo = -self.U if self.signed else 1
        for s in sets:
            if not s:
                raise InvalidInstance("sets must be non-empty")
            for x in s:
                if not lo <= x <= self.U:
                    raise ElementOutOfUniverse(f"{x} not in {{{lo}..{self.U}}}")
        if self.t is not None:
            if self.signed:
                raise InvalidInstance("signed instances have the implicit target 0")
            if not 1 <= self.t <= self.k * self.U:
                raise InvalidInstance(f"target {self.t} not in {{1..{self.k * self.U}}}")

    @classmethod
    def of(cls, *sets: Iterable[int], U: int | None = None, t: int | None = None,
           signed: bool = False) -> "SumInstance":
        sets = tuple(tuple(s) for s in sets)
        if U is None:
            U = max(max(abs(x) for x in s) for s in sets if s) if any(sets) else 1
        return cls(sets, U, t, signed)

    @property
    def k(self) -> int:
        return len(self.sets)

    @property
    def m(self) -> int:
        return max(len(s) for s in self.sets)

    @property
    def A(self):
        return self.sets[0]

    @property
    def B(self):
        return self.sets[1]

    @property
    def C(self):
        return self.sets[2]

    def with_target(self, t: int) -> "SumInstance":
        return SumInstance(self.sets, self.U, t, False)


def dumps(inst: SumInstance) -> str:
    """Serialize to ``sum v1``: header ``sum v1 k m U [t]`` then one set per line."""
    head = f"sum v1 {inst.k} {inst.m} {inst.U}"
    if inst.t is not None:
        head += f" {inst.t}"
    lines = [head] + [" ".join(str(x) for x in s) for s in inst.sets]
    return "\n".join(lines) + "\n"


def loads(text: str) -> SumInstance:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty sum file")
    head = lines[0].split()
    if len(head) not in (5, 6) or head[:2] != ["sum", "v1"]:
        raise FormatError(f"bad sum header: {lines[0]!r}")
    try:
        k, m, U = int(head[2]), int(head[3]), int(head[4])
        t = int(head[5]) if len(head) == 6 else None
        sets = [tuple(int(x) for x in ln.split()) for ln in lines[1:]]
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    if len(sets) != k:
        raise FormatError(f"header announces {k} sets, found {len(sets)}")
    if any(len(s) > m for s in sets):
        raise FormatError(f"a set has more than m={m} elements")
    signed = any(x < 1 for s in sets for x in s)
    return SumInstance(tuple(sets), U, t, signed)
