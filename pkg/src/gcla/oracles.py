"""Brute-force ground truth used to certify every generated construction.

Nothing here shares code with the generators in :mod:`gcla.reductions`:
answers come from plain exhaustive scans.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded
from .instances import SumInstance

DEFAULT_WORK = 10**7

MODES = ("a+b=c", "a+b+c=t", "a+b+c=0")


@dataclass(frozen=True)
class Certificate:
    answer: bool
    witness: tuple[int, ...] | None = None
    mode: str = ""

    def verify(self, target: int | None = None) -> bool:
        """Re-check the witness arithmetically (a NO certificate verifies vacuously)."""
        if not self.answer:
            return self.witness is None
        w = self.witness
        if w is None:
            return False
        if self.mode == "a+b=c":
            return w[0] + w[1] == w[2]
        if self.mode == "a+b+c=t":
            return target is not None and sum(w) == target
        if self.mode == "a+b+c=0":
            return sum(w) == 0
        if self.mode == "ksum":
            return sum(w[:-1]) == w[-1]
        return False


@dataclass(frozen=True)
class SubstringCertificate:
    distinct: int
    ell: int

    @property
    def grammar_lower_bound(self) -> int:
        return -(-self.distinct // self.ell)


def _default_mode(inst: SumInstance) -> str:
    if inst.t is not None:
        return "a+b+c=t"
    if inst.signed:
        return "a+b+c=0"
    return "a+b=c"


def brute_3sum(inst: SumInstance, target_mode: str | None = None,
               budget: int = DEFAULT_WORK) -> Certificate:
    """Exhaustive triple scan over A x B x C."""
    if inst.k != 3:
        raise ValueError("brute_3sum needs exactly three sets")
    mode = target_mode or _default_mode(inst)
    A, B, C = inst.sets
    if len(A) * len(B) * len(C) > budget:
        raise BudgetExceeded(f"{len(A) * len(B) * len(C)} triples exceed budget {budget}")
    for a in A:
        for b in B:
            for c in C:
                if mode == "a+b=c":
                    hit = a + b == c
                elif mode == "a+b+c=t":
                    hit = a + b + c == inst.t
                elif mode == "a+b+c=0":
                    hit = a + b + c == 0
                else:
                    raise ValueError(f"unknown mode {mode!r}")
                if hit:
                    return Certificate(True, (a, b, c), mode)
    return Certificate(False, None, mode)


def brute_ksum(inst: SumInstance, budget: int = DEFAULT_WORK) -> Certificate:
    """Scan all (k-1)-tuples and look their sum up in the last set."""
    work = math.prod(len(s) for s in inst.sets[:-1])
    if work > budget:
        raise BudgetExceeded(f"{work} tuples exceed budget {budget}")
    last = set(inst.sets[-1])
    for tup in itertools.product(*inst.sets[:-1]):
        total = sum(tup)
        if total in last:
            return Certificate(True, tup + (total,), "ksum")
    return Certificate(False, None, "ksum")


def distinct_substring_count(s: str, ell: int, method: str = "slices") -> int:
    """Number of distinct length-ell substrings of a bit string.

    ``slices`` hashes the substrings themselves; ``window`` keeps a rolling
    ell-bit integer; ``packed`` does the same with numpy and a bitmap of all
    2^ell codes (meant for long strings and ell <= 24).  They are kept as
    independent cross-checks.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if len(s) < ell:
        raise ValueError(f"string of length {len(s)} is shorter than ell={ell}")
    if method == "slices":
        return len({s[i:i + ell] for i in range(len(s) - ell + 1)})
    if method == "packed":
        return distinct_substring_profile(s, ell)[ell - 1]
    if method == "window":
        mask = (1 << ell) - 1
        seen = set()
        value = 0
        for i, ch in enumerate(s):
            value = ((value << 1) | (ch == "1")) & mask
            if i >= ell - 1:
                seen.add(value)
        return len(seen)
    raise ValueError(f"unknown method {method!r}")


def distinct_substring_profile(s: str, max_ell: int) -> list[int]:
    """Distinct length-ell substring counts for ell = 1..max_ell in one numpy pass."""
    if not 1 <= max_ell <= min(len(s), 24):
        raise ValueError(f"max_ell={max_ell} must be in [1, min(len(s), 24)]")
    bits = np.frombuffer(s.encode("ascii"), dtype=np.uint8) - ord("0")
    if bits.max(initial=0) > 1:
        raise ValueError("not a bit string")
    codes = bits.astype(np.int32)
    out = []
    for ell in range(1, max_ell + 1):
        if ell > 1:
            codes = (codes[:-1] << 1) | bits[ell - 1:]
        seen = np.zeros(1 << ell, dtype=bool)
        seen[codes] = True
        out.append(int(seen.sum()))
    return out


def grammar_size_lower_bound(s: str, ell: int) -> int:
    """Any SLP for s has at least ceil(#distinct length-ell substrings / ell) rules."""
    return SubstringCertificate(distinct_substring_count(s, ell), ell).grammar_lower_bound
