"""Inner-product timings across strategies and benchmark families.

Runs ``gcla bench`` for each family and fits log-log slopes: on the
alternating family n_slp should grow like log N (slope of n_slp against
log2 N bounded), decompress time roughly like N (slope near 1 in log-log),
and run-merge time like the number of runs.

    python3 scripts/bench_inner_product.py --out-dir bench/
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from gcla.cli import main as gcla_main

FAMILIES = {
    "alternating": [8, 10, 12, 14, 16, 18],
    "ip3": [4, 8, 16, 32, 64],
    "random": [8, 10, 12, 14],
}


def slope(xs, ys) -> float:
    return float(np.polyfit(xs, ys, 1)[0])


def summarize(family: str, rows: list[dict]) -> None:
    by = {}
    for r in rows:
        by.setdefault(r["strategy"], []).append(r)
    some = next(iter(by.values()))
    n = [int(r["N"]) for r in some]
    sizes = [int(r["n_slp"]) for r in some]
    print(f"{family}: n_slp vs log2 N slope {slope([math.log2(x) for x in n], sizes):.2f}")
    for strategy, rs in by.items():
        times = [max(float(r["wall_time"]), 1e-9) for r in rs]
        s = slope([math.log2(int(r["N"])) for r in rs], [math.log2(t) for t in times])
        print(f"  {strategy:10s} log-log time slope in N {s:.2f}")


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out-dir", default="bench")
    p.add_argument("--families", nargs="+", choices=list(FAMILIES), default=list(FAMILIES))
    p.add_argument("--reps", type=int, default=5)
    args = p.parse_args(argv)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for family in args.families:
        path = out_dir / f"{family}.csv"
        sizes = [str(x) for x in FAMILIES[family]]
        code = gcla_main(["bench", "--family", family, "--sizes", *sizes,
                          "--reps", str(args.reps), "--out", str(path)])
        if code:
            return code
        with open(path) as fh:
            summarize(family, list(csv.DictReader(fh)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
