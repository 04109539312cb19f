import itertools
import math
import random
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings

from gcla import bounds, slp
from gcla.errors import BudgetExceeded, InvalidForm, InvalidInstance, MixedTargets
from gcla.instances import SumInstance
from gcla.linalg import STRATEGIES, inner_product, mat_vec
from gcla.oracles import brute_3sum, brute_ksum
from gcla.reductions import (
    balance_s,
    clog2,
    mm_dense,
    mv_pipeline,
    prime_range,
    reduce_3sum_to_ip,
    reduce_3sum_to_mv,
    reduce_ksum_to_ip,
    reduce_mm,
    self_reduce,
    universe_reduce,
)

from conftest import random_instance, sum_instances


# flat-formula string oracles, written independently of the nested builder

def cv(X, U):
    return "".join("1" if i in X else "0" for i in range(1, U + 1))


def ip3_strings(inst):
    A, B, C = inst.sets
    U = inst.U
    N = 2 * inst.m * U * max(1, math.ceil(math.log2(inst.m))) ** 2
    u = "".join("0" * a + cv(B, U) + "0" * (U - a) for a in A)
    v = (cv(C, U) + "0" * U) * len(A)
    return u + "0" * (N - len(u)), v + "0" * (N - len(v))


def ksum_strings(inst):
    k, U = inst.k, inst.U
    u = "".join("0" * sum(tup) + cv(inst.sets[k - 2], U) + "0" * ((k - 2) * U - sum(tup))
                for tup in itertools.product(*inst.sets[:k - 2]))
    count = math.prod(len(s) for s in inst.sets[:k - 2])
    v = (cv(inst.sets[k - 1], U) + "0" * ((k - 2) * U)) * count
    return u, v


def mv_strings(insts, s):
    U = max(x.U for x in insts)
    t = insts[0].t
    N = 3 * s * s * U * max(1, math.ceil(math.log2(s))) ** 3
    rows = []
    for inst in insts:
        r = "".join("0" * (a + b) + cv(inst.C, U) + "0" * (2 * U - a - b) for a in inst.A for b in inst.B)
        rows.append(r + "0" * (N - len(r)))
    v = ("0" * (t - 1) + "1" + "0" * (3 * U - t)) * (s * s)
    return rows, v + "0" * (N - len(v))


class TestInnerProductReduction:
    def test_yes_example(self):
        b = reduce_3sum_to_ip(SumInstance.of([1], [2], [3], U=3))
        assert b.dimension == 6
        assert slp.expand(b.vectors["u"]) == "001000"
        assert slp.expand(b.vectors["v"]) == "001000"
        assert inner_product(b.vectors["u"], b.vectors["v"]) == 1
        assert b.expected == [True]

    def test_no_example(self):
        b = reduce_3sum_to_ip(SumInstance.of([1], [1], [3], U=3))
        assert inner_product(b.vectors["u"], b.vectors["v"]) == 0
        assert b.expected == [False]

    @given(sum_instances(max_m=5, max_U=20))
    def test_matches_flat_formula(self, inst):
        b = reduce_3sum_to_ip(inst)
        u, v = ip3_strings(inst)
        assert slp.expand(b.vectors["u"]) == u
        assert slp.expand(b.vectors["v"]) == v
        assert (inner_product(b.vectors["u"], b.vectors["v"]) >= 1) == brute_3sum(inst).answer

    def test_size_bound(self):
        rng = random.Random(2)
        for _ in range(300):
            U = rng.randint(1, 5000)
            inst = random_instance(rng, rng.randint(1, 40), U)
            b = reduce_3sum_to_ip(inst, certify_answers=False)
            for g in b.vectors.values():
                assert g.size <= bounds.ip3_bound(inst.m, U)

    def test_rejects_wrong_shapes(self):
        with pytest.raises(InvalidInstance):
            reduce_3sum_to_ip(SumInstance.of([1], [1], [1], [3], U=3))
        with pytest.raises(InvalidInstance):
            reduce_3sum_to_ip(SumInstance.of([1], [1], [1], U=1, t=3))

    def test_padding_is_inert(self):
        rng = random.Random(8)
        for _ in range(200):
            inst = random_instance(rng, 3, 8)
            b = reduce_3sum_to_ip(inst, certify_answers=False)
            u, v = b.vectors["u"], b.vectors["v"]
            z = rng.randint(1, 30)
            pu, pv = slp.pad_with_zeros(u, u.size + z), slp.pad_with_zeros(v, v.size + z)
            assert pu.length == pv.length == u.length + z
            assert inner_product(pu, pv) == inner_product(u, v)


class TestKSumReduction:
    def test_example(self):
        b = reduce_ksum_to_ip(SumInstance.of([1], [1], [1], [3], U=3))
        assert b.dimension == 9
        assert inner_product(b.vectors["u"], b.vectors["v"]) == 1
        b = reduce_ksum_to_ip(SumInstance.of([1], [1], [1], [4], U=4))
        assert inner_product(b.vectors["u"], b.vectors["v"]) == 0

    @given(sum_instances(k=5, max_m=2, max_U=6))
    @settings(max_examples=60)
    def test_matches_flat_formula(self, inst):
        b = reduce_ksum_to_ip(inst)
        u, v = ksum_strings(inst)
        assert slp.expand(b.vectors["u"]) == u
        assert slp.expand(b.vectors["v"]) == v
        assert (inner_product(b.vectors["u"], b.vectors["v"]) >= 1) == brute_ksum(inst).answer

    @given(sum_instances(max_m=4, max_U=10))
    def test_three_sets_match_ip3_up_to_padding(self, inst):
        bk = reduce_ksum_to_ip(inst, certify_answers=False)
        b3 = reduce_3sum_to_ip(inst, certify_answers=False)
        for name in ("u", "v"):
            full = slp.expand(b3.vectors[name])
            core = slp.expand(bk.vectors[name])
            assert full.startswith(core) and set(full[len(core):]) <= {"0"}

    def test_nesting_reuses_inner_vector(self):
        inst = SumInstance.of([1, 2, 3, 4], [1, 2, 3, 4], [5, 9, 13], [20], U=20)
        b = reduce_ksum_to_ip(inst)
        # 16 blocks but the grammar stays O(k m log U)
        assert b.vectors["u"].size <= 4 * 4 * 4 * bounds.log_universe(20)


class TestSelfReduction:
    def test_whole_instance_when_s_is_m(self):
        inst = SumInstance.of([1, 3], [2, 5], [4, 8], U=8)
        subs = self_reduce(inst, 2)
        assert subs == [SumInstance(((1, 3), (2, 5), (-8, -4)), 8, None, True)]

    def test_documented_example(self):
        inst = SumInstance.of(range(1, 5), range(1, 5), range(2, 9), U=8)
        subs = self_reduce(inst, 2)
        assert any(brute_3sum(x).answer for x in subs) == brute_3sum(inst).answer

    def test_answers_and_counts(self):
        rng = random.Random(4)
        for _ in range(500):
            m = rng.randint(1, 12)
            inst = random_instance(rng, m, rng.randint(m, 40))
            direct = brute_3sum(inst).answer
            for s in range(1, inst.m + 1):
                subs = self_reduce(inst, s)
                assert any(brute_3sum(x).answer for x in subs) == direct
                assert len(subs) <= bounds.selfred_bound(inst.m, s)
                for x in subs:
                    assert set(x.A) <= set(inst.A)
                    assert set(x.B) <= set(inst.B)
                    assert {-c for c in x.C} <= set(inst.C)
                    assert x.m <= s

    def test_emits_exactly_the_non_trivial_chunk_triples(self):
        inst = SumInstance.of([1, 2, 7, 9], [3, 4, 5, 6], [2, 10, 11, 30], U=30)
        subs = self_reduce(inst, 2)
        signed_c = sorted(-c for c in inst.C)
        chunks = lambda xs: [tuple(xs[i:i + 2]) for i in range(0, len(xs), 2)]
        want = [(a, b, c) for a in chunks(inst.A) for b in chunks(inst.B) for c in chunks(signed_c)
                if a[0] + b[0] + c[0] <= 0 <= a[-1] + b[-1] + c[-1]]
        assert [x.sets for x in subs] == want

    def test_invalid_s(self):
        inst = SumInstance.of([1, 2], [1], [3], U=3)
        with pytest.raises(ValueError):
            self_reduce(inst, 0)
        with pytest.raises(ValueError):
            self_reduce(inst, 3)


class TestUniverseReduction:
    def test_prime_range(self):
        upper, primes = prime_range(1, 5)
        assert len(primes) >= 2 * math.log2(15)
        assert primes[0] == 2 and primes[-1] <= upper
        assert all(all(p % q for q in range(2, math.isqrt(int(p)) + 1)) for p in primes)

    def test_small_no_instance(self):
        sub = SumInstance.of([1], [1], [-5], U=5, signed=True)
        outcomes = {}
        for tr in universe_reduce(sub, 200, seed=1):
            outcomes[tr.prime] = any(brute_3sum(x).answer for x in tr.with_targets())
        assert outcomes[3] is True
        assert outcomes[2] is False

    def test_completeness(self):
        rng = random.Random(9)
        for _ in range(20):
            a, b = rng.randint(-20, 20), rng.randint(-20, 20)
            c = -(a + b)
            if abs(c) > 40:
                continue
            sub = SumInstance.of([a, 7], [b, -3], [c, 11], U=40, signed=True)
            for tr in universe_reduce(sub, 50, seed=rng.randrange(10**6)):
                assert any(brute_3sum(x).answer for x in tr.with_targets())

    def test_reduced_sets(self):
        sub = SumInstance.of([-7, 3], [4], [0, 9], U=10, signed=True)
        for tr in universe_reduce(sub, 10, seed=0):
            p = tr.prime
            assert tr.instance.sets == tuple(tuple(sorted({x % p + 1 for x in s})) for s in sub.sets)
            assert tr.targets[0] == 3 and all(t == 3 + i * p for i, t in enumerate(tr.targets))

    def test_deterministic(self):
        sub = SumInstance.of([-7, 3], [4], [0, 9], U=10, signed=True)
        assert universe_reduce(sub, 5, seed=3) == universe_reduce(sub, 5, seed=3)

    def test_requires_signed_form(self):
        with pytest.raises(InvalidForm):
            universe_reduce(SumInstance.of([1], [2], [3], U=3), 3)


class TestBalance:
    @pytest.mark.parametrize("m,s", [(1, 1), (2, 2), (128, 4), (129, 5), (10**7, 100), (10**7 + 1, 101)])
    def test_examples(self, m, s):
        assert balance_s(m) == s

    def test_is_exact_ceiling(self):
        for m in range(1, 5000):
            s = balance_s(m)
            assert s**7 >= m * m and (s == 1 or (s - 1) ** 7 < m * m)


class TestMatVecReduction:
    def test_yes_example(self):
        b = reduce_3sum_to_mv([SumInstance.of([1], [1], [1], U=1, t=3)])
        assert b.dimension == 3
        assert slp.expand(b.matrix.lines[0]) == "001"
        assert slp.expand(b.vectors["v"]) == "001"
        assert mat_vec(b.matrix, b.vectors["v"]) == [1]

    def test_no_example(self):
        b = reduce_3sum_to_mv([SumInstance.of([1], [1], [1], U=1, t=2)])
        assert slp.expand(b.vectors["v"]) == "010"
        assert mat_vec(b.matrix, b.vectors["v"]) == [0]

    def test_mixed_targets(self):
        with pytest.raises(MixedTargets):
            reduce_3sum_to_mv([SumInstance.of([1], [1], [1], U=1, t=2), SumInstance.of([1], [1], [1], U=1, t=3)])
        with pytest.raises(MixedTargets):
            reduce_3sum_to_mv([SumInstance.of([1], [1], [1], U=1)])

    def test_rows_match_flat_formula(self):
        rng = random.Random(6)
        for _ in range(200):
            s = rng.randint(1, 4)
            U = rng.randint(1, 9)
            t = rng.randint(1, 3 * U)
            insts = [SumInstance.of(*[rng.sample(range(1, U + 1), rng.randint(1, min(s, U))) for _ in range(3)],
                                    U=U, t=t) for _ in range(rng.randint(1, 4))]
            b = reduce_3sum_to_mv(insts, s)
            rows, v = mv_strings(insts, s)
            assert [slp.expand(r) for r in b.matrix.lines] == rows
            assert slp.expand(b.vectors["v"]) == v
            entries = mat_vec(b.matrix, b.vectors["v"])
            assert [e >= 1 for e in entries] == [brute_3sum(x).answer for x in insts] == b.expected
            for strategy in STRATEGIES:
                assert mat_vec(b.matrix, b.vectors["v"], strategy) == entries

    def test_row_sizes(self):
        rng = random.Random(10)
        for _ in range(100):
            s = rng.randint(1, 12)
            U = rng.randint(s, 3000)
            insts = [SumInstance.of(*[rng.sample(range(1, U + 1), s) for _ in range(3)], U=U, t=rng.randint(1, 3 * U))]
            b = reduce_3sum_to_mv([x.with_target(insts[0].t) for x in insts], s, certify_answers=False)
            assert b.sizes()["max_row"] <= bounds.mv_row_bound(s, U)
            assert b.vectors["v"].size <= bounds.mv_row_bound(s, U)

    def test_set_larger_than_s(self):
        with pytest.raises(InvalidInstance):
            reduce_3sum_to_mv([SumInstance.of([1, 2], [1], [1], U=2, t=3)], s=1)


class TestPipeline:
    def test_completeness_and_soundness_of_decision(self):
        rng = random.Random(12)
        seen = Counter()
        for trial in range(40):
            inst = random_instance(rng, rng.randint(1, 5), rng.randint(2, 12))
            pipe = mv_pipeline(inst, trials=4, seed=trial)
            entries = {key: mat_vec(b.matrix, b.vectors["v"]) for key, b in pipe.bundles.items()}
            truth = brute_3sum(inst).answer
            got = pipe.decide(entries)
            if truth:
                assert got
            seen[(truth, got)] += 1
        # a NO instance survives four independent primes with probability <= 1/16 per subproblem
        assert seen[(False, True)] <= seen[(False, False)]

    def test_bundle_targets(self):
        inst = SumInstance.of([1, 5], [2, 3], [6, 7], U=8)
        pipe = mv_pipeline(inst, s=1, trials=2, seed=0)
        for (r, lam), b in pipe.bundles.items():
            assert b.meta["t"] == 3 + lam * pipe.primes[r]


class TestMatrixProduct:
    @pytest.mark.parametrize("ell", [1, 2, 3, 4, 5])
    def test_certificates(self, ell):
        mm = reduce_mm(ell)
        assert mm.N == 2**ell * (2 * ell + 1)
        assert all(mm.certificates.values())
        assert max(mm.A_strong.slp.size, mm.B_strong.slp.size) <= bounds.mm_strong_bound(mm.N)
        assert max(r.n_runs for r in mm.A_rows.lines + mm.B_cols.lines) <= bounds.mm_rle_bound(mm.N)

    def test_small_block_contents(self):
        ell = 3
        a_small, b_small, A, B = mm_dense(ell)
        for x in range(2**ell):
            assert "".join(map(str, a_small[x])) == format(x, "03b") + "111"
        c = a_small.astype(int) @ b_small.astype(int)
        for x in range(2**ell):
            for y in range(2**ell):
                assert "".join(map(str, c[x, y * 2 * ell:(y + 1) * 2 * ell])) == format(x, "03b") + format(y, "03b")
        assert np.array_equal(A[2**ell:, 2 * ell:4 * ell], b_small.T)
        assert np.array_equal(B[2 * ell:4 * ell, 2**ell * 2 * ell:], a_small.T)

    def test_range_and_budget(self):
        with pytest.raises(InvalidInstance):
            reduce_mm(0)
        with pytest.raises(InvalidInstance):
            reduce_mm(13)
        with pytest.raises(BudgetExceeded):
            reduce_mm(4, budget=1000)


def test_clog2():
    assert [clog2(x) for x in (1, 2, 3, 4, 5, 8, 9)] == [1, 1, 2, 2, 3, 3, 4]
