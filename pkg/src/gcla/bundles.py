"""On-disk bundles: generated files plus a JSON manifest, and their verification.

A bundle directory holds ``slp v1`` / ``rle v1`` / ``sum v1`` files and a
``manifest.json`` listing, per item, the component files, their dimensions
and grammar sizes, and the brute-force expected answers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from . import bounds, instances, oracles, rle, slp
from .errors import FormatError
from .instances import SumInstance
from .linalg import STRATEGIES, CompressedMatrix, dense_mat_mul, inner_product, mat_vec
from .reductions import (
    MvPipeline,
    ReductionBundle,
    mv_pipeline,
    reduce_3sum_to_ip,
    reduce_3sum_to_mv,
    reduce_ksum_to_ip,
    reduce_mm,
    self_reduce,
    universe_reduce,
)

MANIFEST = "manifest.json"
FORMAT = "gcla-manifest v1"


def _yn(x: bool) -> str:
    return "YES" if x else "NO"


def load_vector(path: Path):
    text = Path(path).read_text()
    head = text.split(maxsplit=1)[0] if text.strip() else ""
    if head == "slp":
        return slp.loads(text)
    if head == "rle":
        return rle.loads(text)
    raise FormatError(f"{path}: not an slp/rle file")


def dump_vector(obj) -> str:
    return slp.dumps(obj) if isinstance(obj, slp.Slp) else rle.dumps(obj)


class _Writer:
    def __init__(self, out: Path):
        self.out = Path(out)
        self.out.mkdir(parents=True, exist_ok=True)

    def put(self, rel: str, text: str) -> str:
        path = self.out / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        return rel

    def vector(self, rel: str, obj) -> dict:
        self.put(rel, dump_vector(obj))
        entry = {"file": rel, "dimension": len(obj)}
        entry["size"] = obj.size if isinstance(obj, slp.Slp) else obj.n_runs
        return entry

    def manifest(self, kind: str, seed: int, params: dict, items: list[dict]) -> Path:
        doc = {"format": FORMAT, "kind": kind, "seed": seed, "params": params, "items": items}
        path = self.out / MANIFEST
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return path


def _ip_item(w: _Writer, name: str, b: ReductionBundle) -> dict:
    src = w.put(f"{name}/source.sum", instances.dumps(b.sources[0]))
    return {
        "name": name,
        "type": b.kind,
        "source": src,
        "dimension": b.dimension,
        "block_length": b.block_length,
        "block_count": b.block_count,
        "vectors": {k: w.vector(f"{name}/{k}.slp", g) for k, g in sorted(b.vectors.items())},
        "expected": _yn(b.expected[0]),
    }


def _mv_item(w: _Writer, name: str, b: ReductionBundle) -> dict:
    rows = [w.vector(f"{name}/row_{i:04d}.slp", r) for i, r in enumerate(b.matrix.lines)]
    sources = [w.put(f"{name}/instance_{i:04d}.sum", instances.dumps(x)) for i, x in enumerate(b.sources)]
    return {
        "name": name,
        "type": "mv",
        "s": b.meta["s"],
        "t": b.meta["t"],
        "meta": {k: v for k, v in b.meta.items() if k not in ("s", "t")},
        "dimension": b.dimension,
        "block_length": b.block_length,
        "block_count": b.block_count,
        "rows": rows,
        "vector": w.vector(f"{name}/v.slp", b.vectors["v"]),
        "sources": sources,
        "expected": [_yn(x) for x in b.expected],
    }


def gen_ip3(inst: SumInstance, out, seed: int = 0) -> Path:
    w = _Writer(out)
    item = _ip_item(w, "ip3", reduce_3sum_to_ip(inst))
    return w.manifest("ip3", seed, {"m": inst.m, "U": inst.U}, [item])


def gen_ipk(inst: SumInstance, out, seed: int = 0) -> Path:
    w = _Writer(out)
    item = _ip_item(w, "ipk", reduce_ksum_to_ip(inst))
    return w.manifest("ipk", seed, {"k": inst.k, "m": inst.m, "U": inst.U}, [item])


def gen_mv(instance_list: list[SumInstance], out, s: int | None = None, seed: int = 0) -> Path:
    w = _Writer(out)
    b = reduce_3sum_to_mv(instance_list, s)
    item = _mv_item(w, "mv", b)
    return w.manifest("mv", seed, {"s": b.meta["s"], "t": b.meta["t"]}, [item])


def gen_mv_pipeline(inst: SumInstance, out, s: int | None = None, trials: int = 3,
                    seed: int = 0) -> Path:
    w = _Writer(out)
    pipe = mv_pipeline(inst, s, trials, seed)
    w.put("source.sum", instances.dumps(inst))
    items = [_mv_item(w, f"mv_r{r}_l{lam}", b) for (r, lam), b in sorted(pipe.bundles.items())]
    params = {"s": pipe.s, "trials": trials, "primes": pipe.primes, "source": "source.sum",
              "expected": _yn(oracles.brute_3sum(inst).answer)}
    return w.manifest("mv", seed, params, items)


def gen_mm(ell: int, out, seed: int = 0) -> Path:
    w = _Writer(out)
    mm = reduce_mm(ell)
    item = {
        "name": f"mm_l{ell}",
        "type": "mm",
        "ell": ell,
        "N": mm.N,
        "A_strong": w.vector("A_strong_colmajor.slp", mm.A_strong.slp),
        "B_strong": w.vector("B_strong_rowmajor.slp", mm.B_strong.slp),
        "A_rows": [w.vector(f"A_rows/row_{i:05d}.rle", r) for i, r in enumerate(mm.A_rows.lines)],
        "B_cols": [w.vector(f"B_cols/col_{j:05d}.rle", c) for j, c in enumerate(mm.B_cols.lines)],
        "certificates": mm.certificates,
    }
    return w.manifest("mm", seed, {"ell": ell}, [item])


def gen_selfred(inst: SumInstance, s: int, out, seed: int = 0) -> Path:
    w = _Writer(out)
    subs = self_reduce(inst, s)
    item = {
        "name": "selfred",
        "type": "selfred",
        "s": s,
        "source": w.put("source.sum", instances.dumps(inst)),
        "subproblems": [w.put(f"sub_{i:05d}.sum", instances.dumps(x)) for i, x in enumerate(subs)],
        "expected": _yn(oracles.brute_3sum(inst).answer),
        "sub_expected": [_yn(oracles.brute_3sum(x).answer) for x in subs],
    }
    return w.manifest("selfred", seed, {"s": s, "count": len(subs)}, [item])


def gen_unired(sub: SumInstance, trials: int, out, seed: int = 0) -> Path:
    w = _Writer(out)
    reduced = universe_reduce(sub, trials, seed)
    rows = []
    for i, tr in enumerate(reduced):
        rows.append({
            "prime": tr.prime,
            "targets": list(tr.targets),
            "file": w.put(f"trial_{i:05d}.sum", instances.dumps(tr.instance)),
            "hit": _yn(any(oracles.brute_3sum(x).answer for x in tr.with_targets())),
        })
    item = {
        "name": "unired",
        "type": "unired",
        "source": w.put("source.sum", instances.dumps(sub)),
        "expected": _yn(oracles.brute_3sum(sub).answer),
        "trials": rows,
    }
    return w.manifest("unired", seed, {"trials": trials}, [item])


@dataclass
class Report:
    lines: list[tuple[str, str, bool, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def check(self, item: str, what: str, ok: bool, detail: str = "") -> bool:
        self.lines.append((item, what, bool(ok), detail))
        return ok

    @property
    def passed(self) -> bool:
        return all(ok for _, _, ok, _ in self.lines)

    def render(self) -> str:
        out = [f"WARNING: {w}" for w in self.warnings]
        for item, what, ok, detail in self.lines:
            out.append(f"{'PASS' if ok else 'FAIL'} {item}: {what}" + (f" ({detail})" if detail else ""))
        out.append("PASS" if self.passed else "FAIL")
        return "\n".join(out)


def _same(a, b) -> bool:
    """Equal expansions, compared run by run without materializing."""
    ra = rle.slp_to_rle(a) if isinstance(a, slp.Slp) else a
    rb = rle.slp_to_rle(b) if isinstance(b, slp.Slp) else b
    return ra == rb


def _strategies_agree(u, v, rep: Report, name: str) -> int | None:
    values = {s: inner_product(u, v, s) for s in STRATEGIES}
    rep.check(name, "strategies agree", len(set(values.values())) == 1, str(values))
    return values["run_merge"]


def _verify_ip(root: Path, item: dict, rep: Report) -> None:
    name = item["name"]
    src = instances.loads((root / item["source"]).read_text())
    vecs = {k: load_vector(root / e["file"]) for k, e in item["vectors"].items()}
    for k, g in vecs.items():
        rep.check(name, f"dimension of {k}", len(g) == item["dimension"], f"{len(g)}")
    oracle = oracles.brute_3sum(src) if item["type"] == "ip3" else oracles.brute_ksum(src)
    rep.check(name, "oracle matches recorded answer", _yn(oracle.answer) == item["expected"])
    regen = (reduce_3sum_to_ip if item["type"] == "ip3" else reduce_ksum_to_ip)(src, False)
    for k, g in vecs.items():
        rep.check(name, f"{k} equals regenerated construction", _same(g, regen.vectors[k]))
    if len(vecs["u"]) != len(vecs["v"]):
        rep.check(name, "vectors have equal dimension", False)
        return
    ip = _strategies_agree(vecs["u"], vecs["v"], rep, name)
    rep.check(name, "inner product >= 1 iff YES", (ip >= 1) == oracle.answer, f"ip={ip}")
    if item["type"] == "ip3":
        limit = bounds.ip3_bound(src.m, src.U)
        for k, g in vecs.items():
            rep.check(name, f"size({k}) <= {limit}", g.size <= limit, f"{g.size}")


def _verify_mv(root: Path, item: dict, rep: Report) -> None:
    name = item["name"]
    srcs = [instances.loads((root / p).read_text()) for p in item["sources"]]
    rows = [load_vector(root / e["file"]) for e in item["rows"]]
    v = load_vector(root / item["vector"]["file"])
    regen = reduce_3sum_to_mv(srcs, item["s"], certify_answers=False)
    rep.check(name, "v equals regenerated construction", _same(v, regen.vectors["v"]))
    for i, (r, g) in enumerate(zip(rows, regen.matrix.lines)):
        rep.check(name, f"row {i} equals regenerated construction", _same(r, g))
    if any(len(r) != len(v) for r in rows):
        rep.check(name, "row dimensions match vector", False)
        return
    entries = mat_vec(CompressedMatrix.row_wise(rows), v)
    U = max(x.U for x in srcs)
    for i, (src, e, exp) in enumerate(zip(srcs, entries, item["expected"])):
        ans = oracles.brute_3sum(src).answer
        rep.check(name, f"row {i} oracle matches recorded answer", _yn(ans) == exp)
        rep.check(name, f"row {i} entry >= 1 iff YES", (e >= 1) == ans, f"entry={e}")
    limit = bounds.mv_row_bound(item["s"], U)
    rep.check(name, f"row sizes <= {limit}", all(r.size <= limit for r in rows),
              f"max={max(r.size for r in rows)}")


def _verify_mm(root: Path, item: dict, rep: Report) -> None:
    name = item["name"]
    ell = item["ell"]
    mm = reduce_mm(ell)
    a_strong = load_vector(root / item["A_strong"]["file"])
    b_strong = load_vector(root / item["B_strong"]["file"])
    rep.check(name, "A strong grammar expands to A column-major",
              slp.expand(a_strong) == "".join("01"[x] for x in mm.A.T.reshape(-1)))
    rep.check(name, "B strong grammar expands to B row-major",
              slp.expand(b_strong) == "".join("01"[x] for x in mm.B.reshape(-1)))
    limit = bounds.mm_strong_bound(mm.N)
    rep.check(name, f"strong sizes <= {limit}", max(a_strong.size, b_strong.size) <= limit)
    a_rows = [load_vector(root / e["file"]) for e in item["A_rows"]]
    b_cols = [load_vector(root / e["file"]) for e in item["B_cols"]]
    rep.check(name, "A row RLEs match", all(r == x for r, x in zip(a_rows, mm.A_rows.lines))
              and len(a_rows) == mm.N)
    rep.check(name, "B column RLEs match", all(c == x for c, x in zip(b_cols, mm.B_cols.lines))
              and len(b_cols) == mm.N)
    run_limit = bounds.mm_rle_bound(mm.N)
    rep.check(name, f"run counts <= {run_limit:.1f}",
              all(r.n_runs <= run_limit for r in a_rows + b_cols))
    C = dense_mat_mul(mm.A, mm.B)
    flat = "".join("01"[int(x)] for x in C.reshape(-1))
    distinct = oracles.distinct_substring_count(flat, 2 * ell)
    rep.check(name, "C contains all strings of length 2*ell", distinct == 4**ell, f"{distinct}")
    lb = oracles.grammar_size_lower_bound(flat, 2 * ell)
    rep.check(name, "grammar lower bound for C", lb >= math.ceil(4**ell / (2 * ell)), f"{lb}")


def _verify_selfred(root: Path, item: dict, rep: Report) -> None:
    name = item["name"]
    src = instances.loads((root / item["source"]).read_text())
    subs = [instances.loads((root / p).read_text()) for p in item["subproblems"]]
    rep.check(name, "subproblems equal regenerated list", subs == self_reduce(src, item["s"]))
    direct = oracles.brute_3sum(src).answer
    union = any(oracles.brute_3sum(x).answer for x in subs)
    rep.check(name, "oracle matches recorded answer", _yn(direct) == item["expected"])
    rep.check(name, "union of subproblems preserves the answer", union == direct)
    limit = bounds.selfred_bound(src.m, item["s"])
    rep.check(name, f"subproblem count <= {limit}", len(subs) <= limit, f"{len(subs)}")


def _verify_unired(root: Path, item: dict, rep: Report) -> None:
    name = item["name"]
    src = instances.loads((root / item["source"]).read_text())
    direct = oracles.brute_3sum(src).answer
    rep.check(name, "oracle matches recorded answer", _yn(direct) == item["expected"])
    false_pos = 0
    for i, tr in enumerate(item["trials"]):
        red = instances.loads((root / tr["file"]).read_text())
        p = tr["prime"]
        want = tuple(tuple(sorted({x % p + 1 for x in s})) for s in src.sets)
        rep.check(name, f"trial {i} sets are (x mod {p}) + 1", red.sets == want)
        hit = any(oracles.brute_3sum(red.with_target(t)).answer for t in tr["targets"])
        rep.check(name, f"trial {i} recorded hit", _yn(hit) == tr["hit"])
        if direct:
            rep.check(name, f"trial {i} completeness", hit)
        false_pos += hit and not direct
    if not direct and item["trials"]:
        rep.warnings.append(f"{name}: {false_pos}/{len(item['trials'])} false positives")


_VERIFIERS = {
    "ip3": _verify_ip, "ipk": _verify_ip, "mv": _verify_mv, "mm": _verify_mm,
    "selfred": _verify_selfred, "unired": _verify_unired,
}


def _verify_pipeline(root: Path, doc: dict, rep: Report) -> None:
    """Whole-run checks for a bundle made from one plain 3SUM instance."""
    params = doc["params"]
    src = instances.loads((root / params["source"]).read_text())
    direct = oracles.brute_3sum(src).answer
    rep.check("pipeline", "oracle matches recorded answer", _yn(direct) == params["expected"])
    subs = self_reduce(src, params["s"])
    rep.check("pipeline", "subproblem count matches self-reduction",
              all(len(item["rows"]) == len(subs) for item in doc["items"]), f"{len(subs)}")
    entries = {}
    for item in doc["items"]:
        rows = [load_vector(root / e["file"]) for e in item["rows"]]
        v = load_vector(root / item["vector"]["file"])
        entries[(item["meta"]["trial"], item["meta"]["lam"])] = mat_vec(CompressedMatrix.row_wise(rows), v)
    decision = MvPipeline(src, params["s"], subs, params["primes"], {}).decide(entries)
    if direct:
        rep.check("pipeline", "combined mat-vec decision is YES", decision)
    elif decision:
        rep.warnings.append("pipeline: NO instance survived every prime (false positive)")


def verify_manifest(path) -> Report:
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST
    doc = json.loads(path.read_text())
    if doc.get("format") != FORMAT:
        raise FormatError(f"{path}: not a {FORMAT} file")
    rep = Report()
    items = doc.get("items", [])
    for item in items:
        try:
            _VERIFIERS[item["type"]](path.parent, item, rep)
        except (FormatError, ValueError, OSError, KeyError) as exc:
            rep.check(item.get("name", "?"), "item readable", False, f"{type(exc).__name__}: {exc}")
    if doc.get("kind") == "mv" and "source" in doc.get("params", {}):
        try:
            _verify_pipeline(path.parent, doc, rep)
        except (FormatError, ValueError, OSError, KeyError) as exc:
            rep.check("pipeline", "files readable", False, f"{type(exc).__name__}: {exc}")
    if not rep.lines:
        rep.warnings.append("manifest lists no items; nothing to verify")
    return rep
