"""Command-line front end: ``gcla gen|multiply|verify|bench|info``.

Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import random
import statistics
import sys
import time
from pathlib import Path

from . import bundles, instances, rle, slp
from .config import RunConfig, SelfReductionConfig
from .errors import BudgetExceeded, GclaError
from .instances import SumInstance
from .linalg import CompressedMatrix, inner_product, mat_vec
from .reductions import reduce_3sum_to_ip

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
STRATEGY_NAMES = {"decompress": "decompress", "run-merge": "run_merge", "rle": "rle_fast"}


def _instance_from_args(args, k: int | None = None) -> SumInstance:
    if args.input:
        return instances.loads(Path(args.input[0]).read_text())
    if args.set:
        sets = args.set
    else:
        sets = [s for s in (args.A, args.B, args.C) if s is not None]
    if k is not None and len(sets) != k:
        raise GclaError(f"expected {k} sets, got {len(sets)}")
    signed = any(x < 1 for s in sets for x in s)
    U = args.U if args.U is not None else max(abs(x) for s in sets for x in s)
    return SumInstance(tuple(tuple(s) for s in sets), U, args.t, signed)


def _print_manifest_summary(path: Path) -> None:
    doc = json.loads(path.read_text())
    print(f"manifest: {path}")
    for item in doc["items"]:
        line = [item["name"]]
        if "dimension" in item:
            line.append(f"N={item['dimension']}")
        if "vectors" in item:
            line.append("n=" + ",".join(f"{k}:{e['size']}" for k, e in sorted(item["vectors"].items())))
        if "rows" in item:
            line.append(f"rows={len(item['rows'])} max_n={max(e['size'] for e in item['rows'])}")
        if "N" in item:
            line.append(f"N={item['N']} n_A={item['A_strong']['size']} n_B={item['B_strong']['size']}")
        exp = item.get("expected")
        if exp is not None:
            line.append(f"expected={exp if isinstance(exp, str) else ' '.join(exp)}")
        print(" ".join(line))


def cmd_gen(args) -> int:
    out = Path(args.out)
    kind = args.kind
    if kind == "ip3":
        path = bundles.gen_ip3(_instance_from_args(args, 3), out, args.seed)
    elif kind == "ipk":
        path = bundles.gen_ipk(_instance_from_args(args), out, args.seed)
    elif kind == "mv":
        if args.input:
            insts = [instances.loads(Path(p).read_text()) for p in args.input]
        else:
            insts = [_instance_from_args(args, 3)]
        if len(insts) == 1 and insts[0].t is None:
            # plain 3SUM instance: self-reduce, reduce the universe, one bundle per (prime, target)
            cfg = SelfReductionConfig(args.s, args.gamma, args.seed)
            trials = args.trials or cfg.trials(insts[0].m)
            path = bundles.gen_mv_pipeline(insts[0], out, cfg.s, trials, cfg.seed)
        else:
            path = bundles.gen_mv(insts, out, args.s, args.seed)
    elif kind == "mm":
        path = bundles.gen_mm(args.ell, out, args.seed)
    elif kind == "selfred":
        inst = _instance_from_args(args, 3)
        path = bundles.gen_selfred(inst, args.s or inst.m, out, args.seed)
    elif kind == "unired":
        inst = _instance_from_args(args, 3)
        if not inst.signed:
            inst = SumInstance((inst.A, inst.B, tuple(-c for c in inst.C)), inst.U, None, True)
        path = bundles.gen_unired(inst, args.trials or 20, out, args.seed)
    else:
        raise GclaError(f"unknown kind {kind!r}")
    _print_manifest_summary(path)
    return EXIT_OK


def cmd_multiply(args) -> int:
    strategy = STRATEGY_NAMES[args.strategy]
    if args.rows:
        rows = [bundles.load_vector(Path(p)) for p in args.rows]
        if len(args.paths) != 1:
            raise GclaError("mat-vec needs exactly one vector path")
        v = bundles.load_vector(Path(args.paths[0]))
        for x in mat_vec(CompressedMatrix.row_wise(rows), v, strategy):
            print(x)
        return EXIT_OK
    if len(args.paths) == 1 and args.paths[0].endswith(".json"):
        root = Path(args.paths[0]).parent
        doc = json.loads(Path(args.paths[0]).read_text())
        for item in doc["items"]:
            if "vectors" in item:
                u = bundles.load_vector(root / item["vectors"]["u"]["file"])
                v = bundles.load_vector(root / item["vectors"]["v"]["file"])
                print(inner_product(u, v, strategy, args.config.budget_n))
            elif "rows" in item:
                rows = [bundles.load_vector(root / e["file"]) for e in item["rows"]]
                v = bundles.load_vector(root / item["vector"]["file"])
                for x in mat_vec(CompressedMatrix.row_wise(rows), v, strategy):
                    print(x)
        return EXIT_OK
    if len(args.paths) != 2:
        raise GclaError("multiply needs two vector files, a manifest, or --rows with one vector")
    u, v = (bundles.load_vector(Path(p)) for p in args.paths)
    print(inner_product(u, v, strategy, args.config.budget_n))
    return EXIT_OK


def cmd_verify(args) -> int:
    report = bundles.verify_manifest(args.manifest)
    print(report.render())
    return EXIT_OK if report.passed else EXIT_VERIFY


def _bench_pairs(family: str, size: int, seed: int):
    """(u, v) pairs of SLPs for one grid point of a benchmark family."""
    if family == "alternating":
        n = 1 << size
        g = slp.repeat(slp.from_bits("01"), n // 2)
        h = slp.repeat(slp.from_bits("0110"), n // 4) if n >= 4 else g
        return g, h
    if family == "ip3":
        rng = random.Random(seed + size)
        m = size
        U = max(4, m * m)
        sets = [rng.sample(range(1, U + 1), m) for _ in range(3)]
        b = reduce_3sum_to_ip(SumInstance.of(*sets, U=U), certify_answers=False)
        return b.vectors["u"], b.vectors["v"]
    if family == "random":
        rng = random.Random(seed + size)
        bits = "".join(rng.choice("01") for _ in range(1 << size))
        other = "".join(rng.choice("01") for _ in range(1 << size))
        return slp.from_bits(bits), slp.from_bits(other)
    raise GclaError(f"unknown family {family!r}")


def cmd_bench(args) -> int:
    strategies = [STRATEGY_NAMES[s] for s in (args.strategy or ["decompress", "run-merge", "rle"])]
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(out)
    writer.writerow(["family", "N", "n_slp", "n_rle", "strategy", "wall_time", "merge_steps"])
    for size in args.sizes:
        u, v = _bench_pairs(args.family, size, args.seed)
        if u.length > args.config.budget_n:
            raise BudgetExceeded(f"N={u.length} exceeds --budget-n {args.config.budget_n}")
        n_rle = rle.slp_to_rle(u).n_runs + rle.slp_to_rle(v).n_runs
        for strategy in strategies:
            times = []
            for _ in range(max(5, args.reps)):
                stats = rle.MergeStats()
                t0 = time.perf_counter()
                inner_product(u, v, strategy, args.config.budget_n, stats)
                times.append(time.perf_counter() - t0)
            writer.writerow([args.family, u.length, max(u.size, v.size), n_rle, strategy,
                             f"{statistics.median(times):.6g}", stats.steps])
    if args.out:
        out.close()
    return EXIT_OK


def cmd_info(args) -> int:
    for p in args.paths:
        path = Path(p)
        if path.suffix == ".json" or path.is_dir():
            _print_manifest_summary(path / bundles.MANIFEST if path.is_dir() else path)
            continue
        text = path.read_text()
        head = text.split(maxsplit=1)[0]
        if head == "sum":
            inst = instances.loads(text)
            print(f"{p}: sum k={inst.k} m={inst.m} U={inst.U} t={inst.t} signed={inst.signed}")
            continue
        obj = bundles.load_vector(path)
        if isinstance(obj, slp.Slp):
            runs = rle.slp_to_rle(obj).n_runs
            print(f"{p}: slp n={obj.size} N={obj.length} depth={obj.depth} ones={obj.ones()} runs={runs}")
        else:
            print(f"{p}: rle n_runs={obj.n_runs} N={obj.length} ones={obj.ones()}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget-n", type=int, default=slp.DEFAULT_BUDGET,
                        help="largest expansion length any step may materialize")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="gcla", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a reduction bundle")
    g.add_argument("kind", choices=["ip3", "ipk", "mv", "mm", "selfred", "unired"])
    g.add_argument("--A", type=int, nargs="+")
    g.add_argument("--B", type=int, nargs="+")
    g.add_argument("--C", type=int, nargs="+")
    g.add_argument("--set", type=int, nargs="+", action="append", help="one set per flag (ipk)")
    g.add_argument("--U", type=int)
    g.add_argument("--t", type=int)
    g.add_argument("--s", type=int)
    g.add_argument("--ell", type=int, default=2)
    g.add_argument("--trials", type=int, help="prime trials (default: ceil(gamma log2 m) for mv, 20 for unired)")
    g.add_argument("--gamma", type=float, default=3.0, help="trial exponent for the mv pipeline (> 2)")
    g.add_argument("--input", action="append", help="sum v1 instance file(s)")
    g.add_argument("--out", default="bundle")
    g.set_defaults(func=cmd_gen)

    m = sub.add_parser("multiply", parents=[common], help="inner product or mat-vec")
    m.add_argument("paths", nargs="+")
    m.add_argument("--rows", nargs="+", help="row files of a matrix (then paths = the vector)")
    m.add_argument("--strategy", choices=list(STRATEGY_NAMES), default="run-merge")
    m.set_defaults(func=cmd_multiply)

    v = sub.add_parser("verify", parents=[common], help="re-check a bundle against the oracles")
    v.add_argument("manifest")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", parents=[common], help="time the inner-product strategies (CSV)")
    b.add_argument("--family", choices=["alternating", "ip3", "random"], default="alternating")
    b.add_argument("--sizes", type=int, nargs="+", default=[8, 10, 12, 14, 16])
    b.add_argument("--strategy", choices=list(STRATEGY_NAMES), action="append")
    b.add_argument("--reps", type=int, default=5)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)

    i = sub.add_parser("info", parents=[common], help="describe slp/rle/sum files or a manifest")
    i.add_argument("paths", nargs="+")
    i.set_defaults(func=cmd_info)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.config = RunConfig(args.command, args.seed, args.budget_n)
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GclaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
