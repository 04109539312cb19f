"""Generators for the hard instances of compressed inner product,
matrix-vector and matrix-matrix multiplication.

Every generator builds its grammars with a single hash-consed
:class:`~gcla.slp.GrammarBuilder`, so sub-grammars such as the
characteristic vector of B, or powers of the terminal 0, are shared.
"""

from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass, field

import numpy as np

from . import oracles
from .errors import BudgetExceeded, InvalidForm, InvalidInstance, LengthOverflow, MixedTargets
from .instances import SumInstance
from .linalg import CompressedMatrix, dense_mat_mul
from .rle import RleSeq, rle_encode
from .slp import DEFAULT_BUDGET, MAX_LENGTH, GrammarBuilder, Slp, expand


def clog2(x: int) -> int:
    """max(1, ceil(log2 x)) for x >= 1."""
    return max(1, (x - 1).bit_length())


@dataclass
class ReductionBundle:
    """Compressed objects emitted by a reduction plus what they encode.

    ``vectors`` maps names to grammars of length ``dimension``.  For
    matrix-vector bundles ``matrix`` holds one row per source instance and
    ``vectors["v"]`` the shared vector.  ``expected[i]`` is the brute-force
    answer for ``sources[i]``.
    """

    kind: str
    dimension: int
    vectors: dict[str, Slp]
    sources: list[SumInstance]
    block_length: int
    block_count: int
    matrix: CompressedMatrix | None = None
    expected: list[bool] | None = None
    meta: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.expected is not None

    def sizes(self) -> dict[str, int]:
        out = {name: g.size for name, g in self.vectors.items()}
        if self.matrix is not None:
            out["max_row"] = max((r.size for r in self.matrix.lines), default=0)
        return out


def certify(bundle: ReductionBundle) -> ReductionBundle:
    """Fill ``bundle.expected`` from the brute-force oracles."""
    answers = []
    for inst in bundle.sources:
        if inst.k == 3 and bundle.kind != "ipk":
            answers.append(oracles.brute_3sum(inst).answer)
        else:
            answers.append(oracles.brute_ksum(inst).answer)
    bundle.expected = answers
    return bundle


def _shifted_blocks(gb: GrammarBuilder, shift_sets, inner_set, U: int) -> tuple[int, int]:
    """Blocks ``0^(s_1+...+s_j) v_inner 0^(jU - s_1 - ... - s_j)`` over all tuples
    (s_1..s_j) of ``shift_sets`` in lexicographic order, each of length (j+1)U.

    Built innermost level first.  ``z`` is the current level's string with
    the zeros ending its last block trimmed by (level-1)U; each non-final
    block of the next level gets a tail of iU - a zeros and the final block
    a tail of U - a, so one rule ``z`` is reused for every element.
    Returns (root rule, number of blocks).
    """
    z = gb.char_vector(inner_set, U)
    count = 1
    j = len(shift_sets)
    for i in range(j, 0, -1):
        elems = sorted(shift_sets[i - 1])
        parts = []
        for idx, a in enumerate(elems):
            tail = U - a if idx == len(elems) - 1 else i * U - a
            parts += [gb.zeros(a), z, gb.zeros(tail)]
        z = gb.concat_all(parts)
        count *= len(elems)
    return z, count


def reduce_3sum_to_ip(inst: SumInstance, certify_answers: bool = True) -> ReductionBundle:
    """Two vectors whose inner product is >= 1 iff some a + b = c.

    ``u`` is the concatenation over a in A of 0^a v_B 0^(U-a), ``v`` repeats
    v_C 0^U once per element of A; both are padded with zeros to
    N = 2 m U max(1, ceil(log2 m))^2.
    """
    if inst.k != 3 or inst.t is not None or inst.signed:
        raise InvalidInstance("reduce_3sum_to_ip needs an unsigned 3-set instance without target")
    m, U = inst.m, inst.U
    N = 2 * m * U * clog2(m) ** 2
    if N > MAX_LENGTH:
        raise LengthOverflow(f"dimension {N} overflows")
    A, B, C = inst.sets
    gb = GrammarBuilder()
    u_core, blocks = _shifted_blocks(gb, [A], B, U)
    pad = gb.zeros(N - 2 * blocks * U)
    u = gb.concat_all([u_core, pad])
    vc_block = gb.concat(gb.char_vector(C, U), gb.zeros(U))
    v = gb.concat_all([gb.power(vc_block, blocks), pad])
    bundle = ReductionBundle(
        kind="ip3", dimension=N, vectors={"u": gb.build(u), "v": gb.build(v)},
        sources=[inst], block_length=2 * U, block_count=blocks,
    )
    return certify(bundle) if certify_answers else bundle


def reduce_ksum_to_ip(inst: SumInstance, certify_answers: bool = True) -> ReductionBundle:
    """kSUM (a_1 + ... + a_{k-1} = a_k) to one inner product.

    Blocks are indexed by tuples of A_1 x ... x A_{k-2}; the block for a tuple
    with sum S is 0^S v_{A_{k-1}} 0^((k-2)U - S) in the first vector and
    v_{A_k} 0^((k-2)U) in the second.  No trailing padding.
    """
    k, U = inst.k, inst.U
    if k < 3 or inst.t is not None or inst.signed:
        raise InvalidInstance("reduce_ksum_to_ip needs an unsigned instance with k >= 3 and no target")
    count = math.prod(len(s) for s in inst.sets[:k - 2])
    N = count * (k - 1) * U
    if N > MAX_LENGTH:
        raise LengthOverflow(f"dimension {N} overflows")
    gb = GrammarBuilder()
    u, blocks = _shifted_blocks(gb, inst.sets[:k - 2], inst.sets[k - 2], U)
    assert blocks == count
    last_block = gb.concat(gb.char_vector(inst.sets[k - 1], U), gb.zeros((k - 2) * U))
    v = gb.power(last_block, count)
    bundle = ReductionBundle(
        kind="ipk", dimension=N, vectors={"u": gb.build(u), "v": gb.build(v)},
        sources=[inst], block_length=(k - 1) * U, block_count=count,
    )
    return certify(bundle) if certify_answers else bundle


def self_reduce(inst: SumInstance, s: int) -> list[SumInstance]:
    """Split a 3SUM instance into the non-trivial subproblems of size <= s.

    The instance is first put in signed form (A, B, -C), so a + b = c becomes
    a + b + c = 0.  Each sorted set is cut into ceil(|X|/s) consecutive
    chunks; a chunk triple is kept unless its smallest possible sum is
    positive or its largest possible sum is negative.
    """
    if inst.k != 3 or inst.t is not None:
        raise InvalidInstance("self_reduce needs a 3-set instance without target")
    if not 1 <= s <= inst.m:
        raise ValueError(f"group size s={s} not in [1, {inst.m}]")
    if inst.signed:
        A, B, C = inst.sets
    else:
        A, B, C = inst.A, inst.B, tuple(sorted(-c for c in inst.C))

    def chunks(xs):
        return [xs[i:i + s] for i in range(0, len(xs), s)]

    ca, cb, cc = chunks(A), chunks(B), chunks(C)
    c_min = [c[0] for c in cc]
    c_max = [c[-1] for c in cc]
    out = []
    for pa in ca:
        for pb in cb:
            lo = pa[0] + pb[0]
            hi = pa[-1] + pb[-1]
            # keep chunk k iff lo + min C_k <= 0 and hi + max C_k >= 0
            first = bisect.bisect_left(c_max, -hi)
            last = bisect.bisect_right(c_min, -lo)
            for pc in cc[first:last]:
                out.append(SumInstance((pa, pb, pc), inst.U, None, True))
    return out


def _primes_upto(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.flatnonzero(sieve)


def prime_range(s: int, U: int) -> tuple[int, np.ndarray]:
    """U' = alpha s^3 log s log U with the smallest power-of-two alpha giving
    at least 2 s^3 log2(3U) primes in {2..U'}.  Returns (U', primes)."""
    need = 2 * s**3 * math.log2(3 * U)
    base = s**3 * clog2(s) * clog2(U)
    alpha = 1
    while True:
        upper = alpha * base
        primes = _primes_upto(upper)
        if len(primes) >= need:
            return upper, primes
        alpha *= 2


@dataclass(frozen=True)
class ReducedTrial:
    """One random prime applied to a signed instance.

    ``instance`` holds (x mod p) + 1 for every element, over universe U'.
    The original had a zero-sum triple only if one of the ``targets``
    3 + lambda p (lambda = 0, 1, 2) is hit.
    """

    prime: int
    instance: SumInstance
    targets: tuple[int, ...]

    def with_targets(self) -> list[SumInstance]:
        return [self.instance.with_target(t) for t in self.targets]


def universe_reduce(sub: SumInstance, trials: int, seed: int = 0) -> list[ReducedTrial]:
    if not sub.signed or sub.k != 3 or sub.t is not None:
        raise InvalidForm("universe_reduce needs a signed 3-set instance")
    rng = random.Random(seed)
    upper, primes = prime_range(sub.m, sub.U)
    out = []
    for _ in range(trials):
        p = int(primes[rng.randrange(len(primes))])
        sets = tuple(tuple(x % p + 1 for x in s) for s in sub.sets)
        targets = tuple(3 + lam * p for lam in range(3) if 3 + lam * p <= 3 * upper)
        out.append(ReducedTrial(p, SumInstance(sets, upper), targets))
    return out


def balance_s(m: int) -> int:
    """Smallest s >= 1 with s^7 >= m^2, i.e. ceil(m^(2/7)) computed exactly."""
    if m < 1:
        raise ValueError("m must be >= 1")
    s = max(1, int(round(m ** (2 / 7))) - 1)
    while s**7 < m * m:
        s += 1
    while s > 1 and (s - 1) ** 7 >= m * m:
        s -= 1
    return s


def reduce_3sum_to_mv(instances: list[SumInstance], s: int | None = None,
                      certify_answers: bool = True) -> ReductionBundle:
    """One matrix row per instance (all sharing the target t) and one vector.

    Row l consists of the blocks 0^(a+b) v_C 0^(2U-a-b) of length 3U for
    (a, b) in A_l x B_l; every block of the vector is 0^(t-1) 1 0^(3U-t).
    Rows and vector are padded to N = 3 s^2 U max(1, ceil(log2 s))^3.
    """
    if not instances:
        raise InvalidInstance("need at least one instance")
    targets = {inst.t for inst in instances}
    if len(targets) != 1 or None in targets:
        raise MixedTargets(f"instances must share one target, got {sorted(map(str, targets))}")
    t = targets.pop()
    if any(inst.k != 3 or inst.signed for inst in instances):
        raise InvalidInstance("matrix-vector reduction needs unsigned 3-set instances")
    U = max(inst.U for inst in instances)
    if s is None:
        s = max(inst.m for inst in instances)
    if any(inst.m > s for inst in instances):
        raise InvalidInstance(f"some set has more than s={s} elements")
    N = 3 * s * s * U * clog2(s) ** 3
    if N > MAX_LENGTH:
        raise LengthOverflow(f"dimension {N} overflows")
    gb = GrammarBuilder()
    rows = []
    for inst in instances:
        core, blocks = _shifted_blocks(gb, [inst.A, inst.B], inst.C, U)
        rows.append(gb.build(gb.concat_all([core, gb.zeros(N - blocks * 3 * U)])))
    v_block = gb.char_vector([t], 3 * U)
    v = gb.concat_all([gb.power(v_block, s * s), gb.zeros(N - 3 * s * s * U)])
    bundle = ReductionBundle(
        kind="mv", dimension=N, vectors={"v": gb.build(v)}, sources=list(instances),
        block_length=3 * U, block_count=s * s, matrix=CompressedMatrix.row_wise(rows),
        meta={"s": s, "t": t},
    )
    return certify(bundle) if certify_answers else bundle


@dataclass
class MvPipeline:
    """Self-reduction, universe reduction and one mv bundle per (prime, target)."""

    source: SumInstance
    s: int
    subproblems: list[SumInstance]
    primes: list[int]
    bundles: dict[tuple[int, int], ReductionBundle]

    def decide(self, entries: dict[tuple[int, int], list[int]]) -> bool:
        """Combine mat-vec outputs: YES iff some subproblem is hit under every prime."""
        for row in range(len(self.subproblems)):
            if all(any(entries[(r, lam)][row] >= 1 for lam in range(3) if (r, lam) in entries)
                   for r in range(len(self.primes))):
                return True
        return False


def mv_pipeline(inst: SumInstance, s: int | None = None, trials: int = 3,
                seed: int = 0) -> MvPipeline:
    if s is None:
        s = balance_s(inst.m)
    subs = self_reduce(inst, s)
    rng = random.Random(seed)
    upper, primes = prime_range(s, inst.U)
    chosen = [int(primes[rng.randrange(len(primes))]) for _ in range(trials)]
    bundles = {}
    if not subs:
        # every chunk triple is trivial: the instance is a NO instance
        return MvPipeline(inst, s, subs, chosen, bundles)
    for r, p in enumerate(chosen):
        reduced = [SumInstance(tuple(tuple(x % p + 1 for x in part) for part in sub.sets), upper)
                   for sub in subs]
        for lam in range(3):
            t = 3 + lam * p
            if t > 3 * upper:
                continue
            bundle = reduce_3sum_to_mv([x.with_target(t) for x in reduced], s)
            bundle.meta.update(prime=p, lam=lam, trial=r)
            bundles[(r, lam)] = bundle
    return MvPipeline(inst, s, subs, chosen, bundles)


@dataclass
class MatMulBundle:
    ell: int
    N: int
    A: np.ndarray
    B: np.ndarray
    A_rows: CompressedMatrix
    B_cols: CompressedMatrix
    A_strong: CompressedMatrix
    B_strong: CompressedMatrix
    certificates: dict


def _counter_bit(gb: GrammarBuilder, s0: int, s1: int, i: int, ell: int) -> int:
    """(s0^(2^(ell-i)) s1^(2^(ell-i)))^(2^(i-1)): bit i of an ell-bit counter."""
    half = 1 << (ell - i)
    return gb.power(gb.concat(gb.power(s0, half), gb.power(s1, half)), 1 << (i - 1))


def _a_prime_col(gb: GrammarBuilder, i: int, ell: int) -> int:
    if i <= ell:
        return _counter_bit(gb, gb.terminal(0), gb.terminal(1), i, ell)
    return gb.ones(1 << ell)


def _b_prime_row(gb: GrammarBuilder, r: int, ell: int) -> int:
    if r <= ell:
        block = gb.concat_all([gb.zeros(r - 1), gb.terminal(1), gb.zeros(2 * ell - r)])
        return gb.power(block, 1 << ell)
    i = r - ell
    s0 = gb.zeros(2 * ell)
    s1 = gb.concat_all([gb.zeros(ell + i - 1), gb.terminal(1), gb.zeros(ell - i)])
    return _counter_bit(gb, s0, s1, i, ell)


def mm_dense(ell: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(A', B', A, B) as dense 0/1 arrays."""
    n = 1 << ell
    N = n * (2 * ell + 1)
    a_small = np.zeros((n, 2 * ell), dtype=np.uint8)
    for x in range(n):
        for i in range(ell):
            a_small[x, i] = x >> (ell - 1 - i) & 1
        a_small[x, ell:] = 1
    b_small = np.zeros((2 * ell, n * 2 * ell), dtype=np.uint8)
    for y in range(n):
        base = y * 2 * ell
        for i in range(ell):
            b_small[i, base + i] = 1
            b_small[ell + i, base + ell + i] = y >> (ell - 1 - i) & 1
    A = np.zeros((N, N), dtype=np.uint8)
    A[:n, :2 * ell] = a_small
    A[n:, 2 * ell:4 * ell] = b_small.T
    B = np.zeros((N, N), dtype=np.uint8)
    B[:2 * ell, :n * 2 * ell] = b_small
    B[2 * ell:4 * ell, n * 2 * ell:] = a_small.T
    return a_small, b_small, A, B


def reduce_mm(ell: int, budget: int = DEFAULT_BUDGET) -> MatMulBundle:
    """Matrices A, B (N = 2^ell (2 ell + 1)) with tiny compressions whose
    product C = AB contains every bit string of length 2 ell in its rows and
    in its columns."""
    if not 1 <= ell <= 12:
        raise InvalidInstance(f"ell={ell} outside the supported range 1..12")
    n = 1 << ell
    N = n * (2 * ell + 1)
    if N * N > budget:
        raise BudgetExceeded(f"{N}x{N} matrices exceed budget {budget}")
    a_small, b_small, A, B = mm_dense(ell)

    gb = GrammarBuilder()
    tail = gb.zeros((N - 4 * ell) * N)
    cols = [gb.concat(_a_prime_col(gb, i, ell), gb.zeros(N - n)) for i in range(1, 2 * ell + 1)]
    cols += [gb.concat(gb.zeros(n), _b_prime_row(gb, r, ell)) for r in range(1, 2 * ell + 1)]
    a_strong = gb.build(gb.concat_all(cols + [tail]))

    gb = GrammarBuilder()
    tail = gb.zeros((N - 4 * ell) * N)
    rows = [gb.concat(_b_prime_row(gb, r, ell), gb.zeros(n)) for r in range(1, 2 * ell + 1)]
    rows += [gb.concat(gb.zeros(2 * ell * n), _a_prime_col(gb, i, ell)) for i in range(1, 2 * ell + 1)]
    b_strong = gb.build(gb.concat_all(rows + [tail]))

    def bits(vec) -> str:
        return "".join("01"[int(x)] for x in vec)

    a_rows = CompressedMatrix.row_wise([rle_encode(bits(row)) for row in A])
    b_cols = CompressedMatrix.col_wise([rle_encode(bits(col)) for col in B.T])
    certificates = {
        "A_strong_expands_to_column_major": expand(a_strong, budget) == bits(A.T.reshape(-1)),
        "B_strong_expands_to_row_major": expand(b_strong, budget) == bits(B.reshape(-1)),
        "C_prime_blocks": bool(np.array_equal(dense_mat_mul(a_small, b_small),
                                              _c_prime_expected(ell))),
    }
    return MatMulBundle(
        ell=ell, N=N, A=A, B=B, A_rows=a_rows, B_cols=b_cols,
        A_strong=CompressedMatrix.strong(a_strong, N, N, "col"),
        B_strong=CompressedMatrix.strong(b_strong, N, N, "row"),
        certificates=certificates,
    )


def _c_prime_expected(ell: int) -> np.ndarray:
    """Row x, column block y of A'B' reads (x | y)."""
    n = 1 << ell
    out = np.zeros((n, n * 2 * ell), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            word = (x << ell) | y
            for j in range(2 * ell):
                out[x, y * 2 * ell + j] = word >> (2 * ell - 1 - j) & 1
    return out
