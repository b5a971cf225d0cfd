"""Command-line interface: solve, generate, verify and bench.

Exit codes: 0 for yes/valid/solved, 1 for no/invalid, 2 for usage or format errors.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import os
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from . import bench
from .bdvd_dp import bdvd_solve
from .csp import csp_bruteforce, parse_csp
from .dc_dp import dc_count, dc_decide
from .decomp import (
    NiceTreeDecomposition,
    TreeDecomposition,
    forest_to_decomposition,
    heuristic_decomposition,
    parse_forest,
    parse_td,
    to_nice,
    validate,
    validate_forest,
)
from .graph import Graph, ParseError, parse_gr, verify_coloring, verify_deletion_set
from .oracle import verify_detecting_family
from .reductions import pw, td, vc, xsat
from .reductions.bundle import ReductionBundle, certificate_from_json, verify_bundle, write_bundle

SCHEMA = 1


class UsageError(Exception):
    """Bad arguments or inputs; maps to exit code 2."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _threads(arg: int | None) -> int:
    """Worker cap from --threads, then DEGBOUND_THREADS, then the core count."""
    if arg is not None:
        value = arg
    elif os.environ.get("DEGBOUND_THREADS"):
        try:
            value = int(os.environ["DEGBOUND_THREADS"])
        except ValueError as exc:
            raise UsageError("DEGBOUND_THREADS must be an integer") from exc
    else:
        value = os.cpu_count() or 1
    if value < 1:
        raise UsageError("thread count must be at least 1")
    return value


def _emit(report: dict[str, Any], as_json: bool, lines: Sequence[str]) -> None:
    if as_json:
        print(json.dumps({"schema": SCHEMA, **report}, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _decomposition(g: Graph, td_path: str | None, heuristic: str | None) -> tuple[TreeDecomposition, str]:
    if td_path is not None:
        text = _read(td_path)
        if Path(td_path).suffix == ".forest":
            forest = parse_forest(text)
            res = validate_forest(forest, g)
            if isinstance(res, list):
                raise UsageError("invalid forest: " + "; ".join(res[:5]))
            return forest_to_decomposition(forest, g), "forest"
        tdec, n = parse_td(text)
        if n != g.n:
            raise UsageError(f"decomposition is for {n} vertices, graph has {g.n}")
        res = validate(tdec, g)
        if isinstance(res, list):
            raise UsageError("invalid decomposition: " + "; ".join(res[:5]))
        return tdec, "file"
    strategy = heuristic or "min-fill"
    return heuristic_decomposition(g, strategy), strategy


def _nice(g: Graph, tdec: TreeDecomposition) -> NiceTreeDecomposition:
    return to_nice(tdec, g)


# ---------------------------------------------------------------------------
# solve


def cmd_solve(args: argparse.Namespace) -> int:
    threads = _threads(args.threads)
    g = parse_gr(_read(args.graph))
    if g.has_loops():
        raise UsageError("graph has self-loops; the solvers expect a simple graph")
    if args.delta < 0:
        raise UsageError("--delta must be nonnegative")
    tdec, source = _decomposition(g, args.td, args.heuristic)
    ntd = _nice(g, tdec)
    base = {"problem": args.problem, "delta": args.delta, "width": ntd.width, "decomposition": source, "threads": threads}
    if args.problem == "dc":
        if args.chi is None or args.chi < 1:
            raise UsageError("dc needs --chi >= 1")
        if args.decide:
            ok, col = dc_decide(g, ntd, args.chi, args.delta)
            report = {**base, "chi": args.chi, "mode": "decide", "answer": "yes" if ok else "no"}
            if col is not None:
                report["coloring"] = {str(v): c for v, c in sorted(col.items())}
            lines = [f"answer: {report['answer']}"]
            if col is not None:
                lines.append("coloring: " + " ".join(f"{v}:{c}" for v, c in sorted(col.items())))
            _emit(report, args.json, lines)
            return 0 if ok else 1
        count = dc_count(g, ntd, args.chi, args.delta)
        report = {**base, "chi": args.chi, "mode": "count", "count": str(count)}
        _emit(report, args.json, [f"count: {count}"])
        return 0 if count > 0 else 1
    if args.chi is not None:
        raise UsageError("--chi applies to dc only")
    res = bdvd_solve(g, ntd, args.delta, budget=args.budget)
    report = {**base, "k_min": None if res.k_min is None else str(res.k_min)}
    lines = []
    if res.witness is not None:
        report["deletion_set"] = sorted(res.witness)
    if args.budget is not None:
        report["budget"] = args.budget
        report["answer"] = "yes" if res.within_budget else "no"
        lines.append(f"answer: {report['answer']}")
    if res.k_min is not None:
        lines.append(f"k_min: {res.k_min}")
    if res.witness is not None:
        lines.append("S: {" + ", ".join(map(str, sorted(res.witness))) + "}")
    _emit(report, args.json, lines)
    if args.budget is not None:
        return 0 if res.within_budget else 1
    return 0


# ---------------------------------------------------------------------------
# generate

PW = ("bdvd-pw-d1", "bdvd-pw", "dc-pw-d1", "dc-pw")
TD = ("bdvd-td", "dc-td")
VC = ("bdvd-vc", "dc-vc")
CONSTRUCTIONS = PW + TD + VC + ("xsat", "partition", "detecting-family")


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"expected integers, got {text!r}") from exc


def _mcc_clique(inst: td.MccInstance) -> list[int] | None:
    """First multicolored clique by enumeration over one vertex per part."""
    parts = [[inst.vertex(i, j) for j in range(1, inst.n + 1)] for i in range(1, inst.k + 1)]
    for combo in itertools.product(*parts):
        if inst.is_clique(combo):
            return list(combo)
    return None


def _generate_bundle(args: argparse.Namespace, source: str) -> tuple[ReductionBundle, Any]:
    """Build the bundle and, with --certify, a forward certificate from a brute-forced source certificate."""
    text = _read(source)
    kind = args.construction
    cert = None
    if kind in PW:
        phi = parse_csp(text)
        if kind == "bdvd-pw-d1":
            bundle = pw.bdvd_pw_delta1(phi)
        elif kind == "bdvd-pw":
            bundle = pw.bdvd_pw_general(phi)
        elif kind == "dc-pw-d1":
            bundle = pw.dc_pw_delta1(phi, args.chi or 2)
        else:
            chi = args.chi or 2
            bundle = pw.dc_pw_general(phi, chi, args.delta if args.delta is not None else phi.B // chi - 1)
        if args.certify:
            sol = csp_bruteforce(phi)
            cert = None if sol is None else bundle.forward_builder(sol)
        return bundle, cert
    if kind in TD:
        g = parse_gr(text)
        if args.k is None:
            raise UsageError(f"{kind} needs --k (number of parts)")
        k = k_source = args.k
        n_part = g.n // k if k else 0
        if args.pad:
            g, k, _ = td.pad_mcc(g, k)
        bundle = td.bdvd_td(g, k) if kind == "bdvd-td" else td.dc_td(g, k)
        if args.clique is not None:
            clique = td.extend_clique(_parse_int_list(args.clique), n_part, k_source, k)
            cert = bundle.forward_builder(clique)
        elif args.certify:
            clique = _mcc_clique(td.check_mcc(g, k))
            cert = None if clique is None else bundle.forward_builder(clique)
        return bundle, cert
    phi = xsat.parse_cnf(text)
    bundle = vc.bdvd_vc(phi) if kind == "bdvd-vc" else vc.dc_vc(phi, args.chi or 2)
    if args.certify:
        sol = xsat.xsat_bruteforce(phi)
        cert = None if sol is None else bundle.forward_builder(sol)
    return bundle, cert


def cmd_generate(args: argparse.Namespace) -> int:
    kind = args.construction
    paths = args.paths
    if kind == "detecting-family":
        if len(paths) != 1:
            raise UsageError("detecting-family takes only an output directory")
        if args.universe is None or args.d is None:
            raise UsageError("detecting-family needs --universe and --d")
        fam = xsat.build_detecting_family(args.universe, args.d, args.provider)
        out = Path(paths[0])
        out.mkdir(parents=True, exist_ok=True)
        data = {"universe": fam.universe, "d": fam.d, "sets": [list(s) for s in fam.sets]}
        (out / "family.json").write_text(json.dumps(data) + "\n")
        print(f"family: {len(fam.sets)} sets on {fam.universe} elements")
        return 0
    if len(paths) != 2:
        raise UsageError(f"{kind} takes a source file and an output directory")
    source, out_dir = paths
    out = Path(out_dir)
    if kind == "xsat":
        phi = xsat.parse_cnf(_read(source))
        res = xsat.sat34_to_xsat34(phi)
        out.mkdir(parents=True, exist_ok=True)
        (out / "formula.cnf").write_text(xsat.emit_cnf(res))
        print(f"xsat: {res.n} variables, {res.m} clauses")
        return 0
    if kind == "partition":
        phi = xsat.parse_cnf(_read(source))
        if args.b is None:
            raise UsageError("partition needs --b")
        part = xsat.partition_variables_clauses(phi, args.b)
        out.mkdir(parents=True, exist_ok=True)
        data = {
            "b": part.b,
            "var_groups": [list(g) for g in part.var_groups],
            "clause_groups": [[c + 1 for c in g] for g in part.clause_groups],
        }
        (out / "partition.json").write_text(json.dumps(data) + "\n")
        print(f"partition: n_V = {len(part.var_groups)}, n_C = {len(part.clause_groups)}")
        return 0
    bundle, cert = _generate_bundle(args, source)
    write_bundle(bundle, out, certificate=cert, source=str(source), seed=args.seed)
    summary = f"{kind}: {bundle.graph.n} vertices, {bundle.graph.m} edges, delta = {bundle.delta}"
    if "k" in bundle.params:
        summary += f", k = {bundle.params['k']}"
    if "chi" in bundle.params:
        summary += f", chi = {bundle.params['chi']}"
    print(summary)
    if args.certify and cert is None:
        print("certificate: none (source instance has no solution)")
    return 0


# ---------------------------------------------------------------------------
# verify


def _report_problems(problems: list[str], ok_line: str) -> int:
    if problems:
        for p in problems:
            print(p)
        return 1
    print(ok_line)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    kind, paths = args.kind, args.paths
    need = {"td": 2, "forest": 2, "coloring": 2, "deletion-set": 2, "detecting": 1, "bundle": 1}[kind]
    if len(paths) != need:
        raise UsageError(f"verify {kind} takes {need} path(s)")
    if kind == "bundle":
        return _report_problems(verify_bundle(paths[0]), "bundle: ok")
    if kind == "detecting":
        data = json.loads(_read(paths[0]))
        ok = verify_detecting_family(int(data["universe"]), int(data["d"]), data["sets"])
        return _report_problems([] if ok else ["family is not detecting"], "detecting: ok")
    g = parse_gr(_read(paths[0]))
    text = _read(paths[1])
    if kind == "td":
        tdec, n = parse_td(text)
        res = validate(tdec, g)
        if n != g.n:
            res = [f"decomposition is for {n} vertices, graph has {g.n}"]
        return _report_problems(res if isinstance(res, list) else [], f"td: ok, width {res}")
    if kind == "forest":
        res = validate_forest(parse_forest(text), g)
        return _report_problems(res if isinstance(res, list) else [], f"forest: ok, depth {res}")
    if args.delta is None:
        raise UsageError(f"verify {kind} needs --delta")
    cert = certificate_from_json(json.loads(text))
    if kind == "coloring":
        if args.chi is None or not isinstance(cert, dict):
            raise UsageError("verify coloring needs --chi and a coloring file")
        ok = verify_coloring(g, args.delta, cert, args.chi)
        return _report_problems([] if ok else ["coloring violates the defect bound"], "coloring: ok")
    if isinstance(cert, dict):
        raise UsageError("expected a deletion_set file")
    problems = []
    if not verify_deletion_set(g, args.delta, cert):
        problems.append("deletion set leaves a vertex above the degree bound")
    if args.budget is not None and len(set(cert)) > args.budget:
        problems.append(f"deletion set has {len(set(cert))} vertices, budget {args.budget}")
    return _report_problems(problems, "deletion-set: ok")


# ---------------------------------------------------------------------------
# bench


def _sizes(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part.strip():
            out.append(int(part))
    if not out or min(out) < 0:
        raise UsageError(f"bad size grid {text!r}")
    return out


def cmd_bench(args: argparse.Namespace) -> int:
    _threads(args.threads)
    if args.repetitions < 1:
        raise UsageError("--repetitions must be at least 1")
    sizes = _sizes(args.sizes)
    if args.suite == "join":
        rows = bench.bench_join(sizes, args.chi, args.delta, args.repetitions, args.seed, args.entries)
    else:
        rows = bench.bench_dp(sizes, args.chi, args.delta, args.repetitions, args.seed)
    writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]))
    writer.writeheader()
    for row in rows:
        writer.writerow({k: f"{v:.6f}" if isinstance(v, float) else v for k, v in row.items()})
    return 0 if all(r["agree"] for r in rows) else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="degbound", description="Bounded-degree deletion and defective coloring toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an instance over a tree decomposition")
    s.add_argument("problem", choices=("bdvd", "dc"))
    s.add_argument("graph")
    s.add_argument("td", nargs="?", help="decomposition (.td) or elimination forest (.forest)")
    s.add_argument("--delta", type=int, required=True)
    s.add_argument("--chi", type=int)
    s.add_argument("--budget", "-k", type=int)
    s.add_argument("--decide", action="store_true", help="dc: decide and print a coloring instead of counting")
    s.add_argument("--heuristic", choices=("min-fill", "min-degree"))
    s.add_argument("--json", action="store_true")
    s.add_argument("--threads", type=int)
    s.set_defaults(func=cmd_solve)

    gsub = sub.add_parser("generate", help="build a reduction instance")
    gsub.add_argument("construction", choices=CONSTRUCTIONS)
    gsub.add_argument("paths", nargs="+", metavar="PATH", help="source file and output directory")
    gsub.add_argument("--seed", type=int)
    gsub.add_argument("--chi", type=int)
    gsub.add_argument("--delta", type=int)
    gsub.add_argument("--k", type=int, help="number of parts of a multicolored-clique input")
    gsub.add_argument("--pad", action="store_true", help="pad the part count to a power of 2")
    gsub.add_argument("--clique", help="comma-separated clique used for the forward certificate")
    gsub.add_argument("--certify", action="store_true", help="brute-force a source solution and write its certificate")
    gsub.add_argument("--b", type=int)
    gsub.add_argument("--universe", type=int)
    gsub.add_argument("--d", type=int)
    gsub.add_argument("--provider", default="singleton")
    gsub.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="check a decomposition, certificate, family or bundle")
    v.add_argument("kind", choices=("td", "forest", "coloring", "deletion-set", "detecting", "bundle"))
    v.add_argument("paths", nargs="+", metavar="PATH")
    v.add_argument("--delta", type=int)
    v.add_argument("--chi", type=int)
    v.add_argument("--budget", type=int)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="time the naive and polynomial joins")
    b.add_argument("suite", choices=("join", "dp"))
    b.add_argument("--sizes", default="1-6")
    b.add_argument("--chi", type=int, default=2)
    b.add_argument("--delta", type=int, default=2)
    b.add_argument("--repetitions", type=int, default=3)
    b.add_argument("--entries", type=int, default=2000)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--threads", type=int)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return int(args.func(args))
    except (UsageError, ParseError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
