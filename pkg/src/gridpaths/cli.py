"""Batch driver: generate instances, reduce, solve, verify, export.

Every command writes a machine-readable JSON report to stdout and a short
human summary to stderr.  Exit codes: 0 all checks pass, 1 check failure,
2 usage or parse error, 3 solver budget exhausted.  The DPATH_BUDGET
environment variable overrides the solvers' node-expansion cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

from . import edp, gridtiling, mappers, reduction
from .digraph import EmbeddedDigraph, is_dotted_edge
from .errors import BudgetExceededError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

BUDGET_ENV_VAR = "DPATH_BUDGET"


@dataclass
class RunReport:
    """Everything a roundtrip run measured; every boolean was actually tested."""

    instance: dict
    counts: dict
    checks: dict
    solver: dict
    roundtrip: dict | None
    timings: dict = field(default_factory=dict)

    def all_ok(self) -> bool:
        flags = [self.counts["match"], *self._check_flags(), self.solver["agree"]]
        if self.roundtrip is not None:
            flags += list(self.roundtrip.values())
        return all(flags)

    def _check_flags(self) -> list[bool]:
        c = self.checks
        return [c["dag"], c["genus"] == 0, c["terminal_pairs_ok"]]

    def to_json_dict(self) -> dict:
        return {
            "instance": self.instance,
            "counts": self.counts,
            "checks": self.checks,
            "solver": self.solver,
            "roundtrip": self.roundtrip,
            "timings": self.timings,
            "ok": self.all_ok(),
        }


def _solver_budget() -> int:
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None:
        return edp.DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{BUDGET_ENV_VAR} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"{BUDGET_ENV_VAR} must be positive, got {value}")
    return value


def _instance_summary(inst: gridtiling.GridTilingInstance) -> dict:
    return {
        "k": inst.k,
        "N": inst.N,
        "set_sizes": {f"{x},{y}": len(inst.sets[(x, y)]) for x, y in inst.cells()},
    }


def _structural_checks(out: reduction.ReductionOutput) -> tuple[dict, dict]:
    g = out.graph
    _, cycle = g.topological_sort()
    embedding = g.check_planar_embedding()
    k = out.provenance.k
    pair_ok = len(out.terminals) == 2 * k
    if pair_ok:
        for s, t in out.terminals.pairs:
            if g.inn(s) or g.out(t):
                pair_ok = False
    counts = {
        "predicted": {"vertices": out.counts.vertices, "edges": out.counts.edges},
        "actual": {"vertices": g.num_vertices, "edges": g.num_edges},
    }
    counts["match"] = counts["predicted"] == counts["actual"]
    checks = {
        "dag": cycle is None,
        "faces": embedding.faces,
        "genus": embedding.genus,
        "max_in_degree": g.max_in_degree(),
        "max_out_degree": g.max_out_degree(),
        "terminal_pairs": len(out.terminals),
        "terminal_pairs_ok": pair_ok,
        "dotted_edges": sum(1 for u, v in g.edges if is_dotted_edge(u, v)),
        "degree_reduced": out.degree_reduced,
    }
    return counts, checks


def _load_instance(path: str) -> gridtiling.GridTilingInstance:
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    inst = gridtiling.GridTilingInstance.from_json_dict(data)
    violations = gridtiling.validate_instance(inst)
    if violations:
        raise ValueError(f"{path}: " + "; ".join(violations))
    return inst


def _emit(payload: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(payload)
    else:
        sys.stdout.write(payload)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_gen(args: argparse.Namespace) -> int:
    if args.mode == "planted":
        inst = gridtiling.generate_planted(args.k, args.N, noise=args.noise, seed=args.seed)
    else:
        inst = gridtiling.generate_random(args.k, args.N, density=args.density, seed=args.seed)
    _emit(_json_text(inst.to_json_dict()), args.out)
    dest = args.out or "stdout"
    print(
        f"generated {args.mode} instance k={args.k} N={args.N} seed={args.seed} -> {dest}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    t0 = time.perf_counter()
    out = reduction.reduce(inst)
    if args.degree2:
        out = reduction.reduce_degree(out)
    elapsed = time.perf_counter() - t0
    counts, checks = _structural_checks(out)
    report = {
        "instance": _instance_summary(inst),
        "counts": counts,
        "checks": checks,
        "timings": {"reduce_s": elapsed},
    }
    _emit(_json_text(out.to_json_dict()), args.out)
    ok = counts["match"] and checks["dag"] and checks["genus"] == 0 and checks["terminal_pairs_ok"]
    report["ok"] = ok
    sys.stdout.write(_json_text(report))
    print(
        f"reduced {args.instance}: |V|={counts['actual']['vertices']} "
        f"|E|={counts['actual']['edges']} genus={checks['genus']} "
        f"dag={checks['dag']} -> {args.out}",
        file=sys.stderr,
    )
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def roundtrip_report(inst: gridtiling.GridTilingInstance, budget: int) -> RunReport:
    """Run oracle, reduction, solver, and both mapping directions on one instance."""
    timings = {}
    t0 = time.perf_counter()
    out = reduction.reduce(inst)
    timings["reduce_s"] = time.perf_counter() - t0
    counts, checks = _structural_checks(out)

    t0 = time.perf_counter()
    gt_answer = gridtiling.solve_gt_brute_force(inst, budget=budget)
    timings["grid_tiling_solve_s"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    edp_answer = edp.solve_edp_dag(out.graph, out.terminals, budget=budget)
    timings["edp_solve_s"] = time.perf_counter() - t0

    solver = {
        "grid_tiling": "feasible" if gt_answer is not None else "infeasible",
        "edge_disjoint_paths": "feasible" if edp_answer is not None else "infeasible",
        "agree": (gt_answer is None) == (edp_answer is None),
    }

    roundtrip = None
    if gt_answer is not None and edp_answer is not None:
        forward = mappers.gt_solution_to_paths(out, gt_answer)
        extracted = mappers.paths_to_gt_solution(out, edp_answer)
        roundtrip = {
            "forward_valid": not edp.check_edp_solution(out.graph, out.terminals, forward),
            "level_confined": mappers.check_level_confinement(out, forward),
            "extraction_valid": gridtiling.check_gt_solution(inst, extracted),
            "identity": mappers.paths_to_gt_solution(out, forward) == gt_answer,
        }
    return RunReport(
        instance=_instance_summary(inst),
        counts=counts,
        checks=checks,
        solver=solver,
        roundtrip=roundtrip,
        timings=timings,
    )


def cmd_roundtrip(args: argparse.Namespace) -> int:
    budget = _solver_budget()
    reports = []
    for path in args.instances:
        inst = _load_instance(path)
        report = roundtrip_report(inst, budget)
        reports.append((path, report))
        status = "ok" if report.all_ok() else "FAILED"
        print(
            f"{path}: gt={report.solver['grid_tiling']} "
            f"edp={report.solver['edge_disjoint_paths']} {status}",
            file=sys.stderr,
        )
    payload = {
        "runs": [{"file": path, "report": rep.to_json_dict()} for path, rep in reports],
        "ok": all(rep.all_ok() for _, rep in reports),
    }
    sys.stdout.write(_json_text(payload))
    return EXIT_OK if payload["ok"] else EXIT_CHECK_FAILED


def cmd_export(args: argparse.Namespace) -> int:
    with open(args.graph, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    graph_dict = data["graph"] if isinstance(data, dict) and "graph" in data else data
    g = EmbeddedDigraph.from_json_dict(graph_dict)
    if args.format == "dot":
        payload = g.to_dot()
    else:
        payload = _json_text(g.to_json_dict())
    _emit(payload, args.out)
    print(
        f"exported {args.graph} as {args.format} -> {args.out or 'stdout'}",
        file=sys.stderr,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridpaths",
        description="grid-tiling to edge-disjoint-paths gadget toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a grid tiling instance file")
    gen.add_argument("k", type=int, help="grid-of-cells side length")
    gen.add_argument("N", type=int, help="universe side length (>= 2)")
    gen.add_argument("--mode", choices=("planted", "random"), default="planted")
    gen.add_argument("--noise", type=int, default=0, help="extra random pairs per cell (planted)")
    gen.add_argument("--density", type=float, default=0.5, help="pair probability (random)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", help="output file (default: stdout)")
    gen.set_defaults(func=cmd_gen)

    red = sub.add_parser("reduce", help="reduce an instance file to a paths instance")
    red.add_argument("instance", help="instance JSON file")
    red.add_argument("--degree2", action="store_true", help="apply the degree-reduction edit")
    red.add_argument("--out", required=True, help="output reduction JSON file")
    red.set_defaults(func=cmd_reduce)

    rt = sub.add_parser("roundtrip", help="solve both sides and verify all checks")
    rt.add_argument("instances", nargs="+", help="instance JSON files")
    rt.set_defaults(func=cmd_roundtrip)

    exp = sub.add_parser("export", help="export a reduction or graph file")
    exp.add_argument("graph", help="reduction or graph JSON file")
    exp.add_argument("--format", choices=("dot", "json"), default="dot")
    exp.add_argument("--out", help="output file (default: stdout)")
    exp.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
