"""Monte Carlo estimate of the universe-reduction false-positive rate.

For random signed NO instances, counts how often a random prime creates a
spurious hit on one of the targets 3 + lambda p.  The empirical rate per
trial should be well below 1, and the rate after ceil(gamma log2 m) trials
should be close to 0.

    python3 scripts/false_positive_rate.py --instances 300
"""

from __future__ import annotations

import argparse
import csv
import random
import sys

from gcla import oracles
from gcla.config import SelfReductionConfig
from gcla.instances import SumInstance
from gcla.reductions import universe_reduce


def random_no_instance(rng: random.Random, m: int, U: int) -> SumInstance:
    while True:
        sets = [rng.sample(range(-U, U + 1), m) for _ in range(3)]
        inst = SumInstance.of(*sets, U=U, signed=True)
        if not oracles.brute_3sum(inst).answer:
            return inst


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--instances", type=int, default=200)
    p.add_argument("--ms", type=int, nargs="+", default=[2, 4, 8])
    p.add_argument("--U", type=int, default=10**6)
    p.add_argument("--gamma", type=float, default=3.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV path (default stdout)")
    args = p.parse_args(argv)
    cfg = SelfReductionConfig(gamma=args.gamma, seed=args.seed)
    rng = random.Random(args.seed)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(out)
    w.writerow(["m", "U", "trials", "per_trial_rate", "all_trials_rate"])
    for m in args.ms:
        trials = cfg.trials(m)
        hits = survived = 0
        for i in range(args.instances):
            inst = random_no_instance(rng, m, args.U)
            flags = [any(oracles.brute_3sum(x).answer for x in tr.with_targets())
                     for tr in universe_reduce(inst, trials, seed=rng.randrange(2**32))]
            hits += sum(flags)
            survived += all(flags)
        w.writerow([m, args.U, trials, f"{hits / (trials * args.instances):.4f}",
                    f"{survived / args.instances:.4f}"])
    if args.out:
        out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
