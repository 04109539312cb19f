"""Measured grammar sizes of the reductions against the frozen constants.

Writes one CSV row per construction: the measured size, the bound it must
respect and their ratio.  Any ratio above 1 is a bug.

    python3 scripts/size_scaling.py --out sizes.csv
"""

from __future__ import annotations

import argparse
import csv
import random
import sys

from gcla import bounds
from gcla.instances import SumInstance
from gcla.reductions import reduce_3sum_to_ip, reduce_3sum_to_mv, reduce_mm


def random_sets(rng: random.Random, k: int, m: int, U: int) -> list[list[int]]:
    return [rng.sample(range(1, U + 1), m) for _ in range(k)]


def ip3_rows(rng, ms, us):
    for m in ms:
        for U in us:
            if m > U:
                continue
            b = reduce_3sum_to_ip(SumInstance.of(*random_sets(rng, 3, m, U), U=U), certify_answers=False)
            size = max(b.vectors["u"].size, b.vectors["v"].size)
            yield "ip3", f"m={m} U={U}", b.dimension, size, bounds.ip3_bound(m, U)


def mv_rows(rng, ss, us):
    for s in ss:
        for U in us:
            if s > U:
                continue
            t = rng.randint(3, 3 * U)
            insts = [SumInstance.of(*random_sets(rng, 3, s, U), U=U, t=t) for _ in range(4)]
            b = reduce_3sum_to_mv(insts, s, certify_answers=False)
            size = max(b.sizes()["max_row"], b.vectors["v"].size)
            yield "mv", f"s={s} U={U}", b.dimension, size, bounds.mv_row_bound(s, U)


def mm_rows(ells):
    for ell in ells:
        mm = reduce_mm(ell)
        size = max(mm.A_strong.slp.size, mm.B_strong.slp.size)
        yield "mm_strong", f"ell={ell}", mm.N, size, bounds.mm_strong_bound(mm.N)
        runs = max(line.n_runs for line in mm.A_rows.lines + mm.B_cols.lines)
        yield "mm_rle", f"ell={ell}", mm.N, runs, bounds.mm_rle_bound(mm.N)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-ell", type=int, default=8)
    args = p.parse_args(argv)
    rng = random.Random(args.seed)
    us = [2**e for e in (4, 8, 12, 16, 20, 24)]
    rows = [*ip3_rows(rng, [1, 2, 4, 8, 16, 32], us),
            *mv_rows(rng, [1, 2, 4, 8], us),
            *mm_rows(range(1, args.max_ell + 1))]
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(out)
    w.writerow(["construction", "params", "N", "size", "bound", "ratio"])
    worst = 0.0
    for name, params, N, size, bound in rows:
        ratio = size / bound
        worst = max(worst, ratio)
        w.writerow([name, params, N, size, f"{bound:g}", f"{ratio:.3f}"])
    if args.out:
        out.close()
    print(f"worst size/bound ratio {worst:.3f}", file=sys.stderr)
    return 0 if worst <= 1 else 1


if __name__ == "__main__":
    sys.exit(main())
