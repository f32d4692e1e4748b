"""Command-line entry point.

Subcommands: solve, verify, optimal, check, experiment, reduce. Exit codes:
0 success (or property true), 1 property false, 2 usage/parse error,
3 capacity (budget/guard exceeded).
"""
from __future__ import annotations

import argparse
import json
import sys

from . import reductions
from .algorithms import ALGORITHMS, SolverConfig
from .core import (
    Allocation,
    CapacityError,
    HiddenSet,
    Instance,
    StructureError,
    envy_report,
    is_ef,
    is_ef1,
    is_pareto_optimal,
    is_sef1,
    is_uhef,
)
from .experiments import SweepConfig, aggregate, run_sweep, write_csv, write_summary
from .hiding import (
    ResidualEnvyOracle,
    SearchBoundExceeded,
    exact_min_hide,
    greedy_hide,
    optimal_kappa,
)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3

# `verify`/`solve` switch from exact to greedy above this many relevant goods
EXACT_CANDIDATE_LIMIT = 20


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise StructureError(f"cannot read {path}: {exc}") from None


def _load_pair(instance_path: str, allocation_path: str) -> tuple[Instance, Allocation]:
    inst = Instance.from_json(_read(instance_path))
    alloc = Allocation.from_json(_read(allocation_path))
    alloc.validate(inst)
    return inst, alloc


def _relevant_good_count(oracle: ResidualEnvyOracle) -> int:
    """Goods positively valued by some envier of their owner's bundle."""
    count = 0
    for h in range(oracle.instance.num_agents):
        goods, enviers, _ = oracle.bundle_requirements(h)
        if not enviers:
            continue
        vals = oracle.instance.valuations
        count += sum(1 for g in goods if any(vals[i, g] > 0 for i in enviers))
    return count


def _f_trace(oracle: ResidualEnvyOracle, hidden_order: list[int]) -> list[int]:
    trace = [oracle.initial_envy]
    shown: list[int] = []
    for g in hidden_order:
        shown.append(g)
        trace.append(oracle.f(shown))
    return trace


def _cmd_solve(args) -> int:
    inst = Instance.from_json(_read(args.instance))
    if args.algorithm not in ALGORITHMS:
        print(f"unknown algorithm {args.algorithm!r}; choose from {sorted(ALGORITHMS)}", file=sys.stderr)
        return EXIT_USAGE
    config = SolverConfig.randomized(inst, args.seed) if args.seed is not None else SolverConfig()
    alloc = ALGORITHMS[args.algorithm](inst, config)
    oracle = ResidualEnvyOracle(inst, alloc)
    if _relevant_good_count(oracle) <= EXACT_CANDIDATE_LIMIT:
        result, mode = exact_min_hide(oracle), "exact"
    else:
        result, mode = greedy_hide(oracle), "greedy"
    summary = {
        "algorithm": args.algorithm,
        "aggregate_envy": oracle.initial_envy,
        "kappa": result.size,
        "kappa_mode": mode,
        "is_ef1": is_ef1(inst, alloc),
        "is_sef1": is_sef1(inst, alloc),
    }
    payload = alloc.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def _cmd_verify(args) -> int:
    inst, alloc = _load_pair(args.instance, args.allocation)
    oracle = ResidualEnvyOracle(inst, alloc)
    if args.greedy:
        mode = "greedy"
    elif args.exact:
        mode = "exact"
    else:
        mode = "exact" if _relevant_good_count(oracle) <= EXACT_CANDIDATE_LIMIT else "greedy"
    if mode == "exact":
        result = exact_min_hide(oracle)
        order = result.hidden.sorted()
    else:
        result = greedy_hide(oracle)
        order = _greedy_order(oracle)
    print(
        json.dumps(
            {
                "hidden": result.hidden.sorted(),
                "size": result.size,
                "residual": result.residual,
                "mode": mode,
                "approximate": mode == "greedy",
                "f_trace": _f_trace(oracle, order),
            },
            sort_keys=True,
        )
    )
    return EXIT_OK


def _greedy_order(oracle: ResidualEnvyOracle) -> list[int]:
    """Greedy hiding order (re-derived; greedy_hide returns the set only)."""
    order: list[int] = []
    current: list[int] = []
    while oracle.f(current) >= 1:
        best_gain, best_good = 0, -1
        base = oracle.f(current)
        for j in range(oracle.instance.num_goods):
            if j in current:
                continue
            gain = base - oracle.f(current + [j])
            if gain > best_gain:
                best_gain, best_good = gain, j
        current.append(best_good)
        order.append(best_good)
    return order


def _cmd_optimal(args) -> int:
    inst = Instance.from_json(_read(args.instance))
    try:
        k, alloc, hidden = optimal_kappa(inst, max_k=args.max_k, node_budget=args.node_budget)
    except SearchBoundExceeded as exc:
        print(json.dumps({"kappa_opt": None, "exceeds": exc.bound}, sort_keys=True))
        return EXIT_FALSE
    payload = {
        "kappa_opt": k,
        "witness_allocation": [list(b) for b in alloc.bundles],
        "witness_hidden": hidden.sorted(),
    }
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(json.dumps(payload, sort_keys=True) + "\n")
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def _cmd_check(args) -> int:
    inst, alloc = _load_pair(args.instance, args.allocation)
    prop = args.property
    if prop == "ef":
        ok = is_ef(inst, alloc)
    elif prop == "ef1":
        ok = is_ef1(inst, alloc)
    elif prop == "sef1":
        ok = is_sef1(inst, alloc)
    elif prop == "po":
        ok = is_pareto_optimal(inst, alloc)
    elif prop.startswith("uhef:"):
        ok = is_uhef(inst, alloc, int(prop.split(":", 1)[1]))
    elif prop.startswith("hef:"):
        k = int(prop.split(":", 1)[1])
        try:
            ok = exact_min_hide(ResidualEnvyOracle(inst, alloc), max_k=k).size <= k
        except SearchBoundExceeded:
            ok = False
    else:
        print(f"unknown property {prop!r}", file=sys.stderr)
        return EXIT_USAGE
    print("true" if ok else "false")
    return EXIT_OK if ok else EXIT_FALSE


def _cmd_experiment(args) -> int:
    config = SweepConfig.from_json(_read(args.config))
    records = run_sweep(config)
    write_csv(records, args.out_csv)
    write_summary(aggregate(records), args.out_summary)
    print(f"wrote {len(records)} records to {args.out_csv}; summary at {args.out_summary}")
    return EXIT_OK


def _cmd_reduce(args) -> int:
    data = json.loads(_read(args.input))
    if args.problem == "partition":
        inp = reductions.PartitionInput(values=tuple(data["values"]), k=int(data["k"]))
        inst, manifest = reductions.partition_gadget(inp)
        info = {
            "agents": inst.num_agents,
            "goods": inst.num_goods,
            "half_sum": inp.half_sum,
            "dummy_goods": list(manifest.dummy_goods),
        }
    elif args.problem == "hitting-set":
        inp = reductions.HittingSetInput(
            universe_size=int(data["p"]),
            families=tuple(tuple(f) for f in data["families"]),
            k=int(data["k"]),
        )
        inst, alloc, manifest = reductions.hitting_set_gadget(inp)
        if args.out_allocation:
            with open(args.out_allocation, "w") as fh:
                fh.write(alloc.to_json() + "\n")
        info = {
            "agents": inst.num_agents,
            "goods": inst.num_goods,
            "aggregate_envy": envy_report(inst, alloc).aggregate,
        }
    elif args.problem == "coloring":
        edges = [tuple(e) for e in data["edges"]]
        nv = int(data.get("n", max((max(e) for e in edges), default=-1) + 1))
        inp = reductions.ColoringInput(graph=reductions.Graph(nv, tuple(edges)), colors=int(data["l"]))
        inst, manifest = reductions.coloring_gadget(inp)
        info = {
            "agents": inst.num_agents,
            "goods": inst.num_goods,
            "work_colors": manifest.work_colors,
            "added_vertices": list(manifest.added_vertices),
            "added_edges": [list(e) for e in manifest.added_edges],
        }
    else:  # pragma: no cover - argparse restricts choices
        return EXIT_USAGE
    with open(args.out_instance, "w") as fh:
        fh.write(inst.to_json() + "\n")
    print(json.dumps(info, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairhide",
        description="Fair division with hidden goods: solvers, verification, gadgets, experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run an EF1 algorithm on an instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--algorithm", required=True)
    p.add_argument("--seed", type=int, default=None, help="randomize agent/good orders")
    p.add_argument("--out", default=None, help="write the allocation JSON here")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="minimum (or greedy) hidden set for a given allocation")
    p.add_argument("--instance", required=True)
    p.add_argument("--allocation", required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--greedy", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("optimal", help="kappa_opt: fewest hidden goods over all allocations")
    p.add_argument("--instance", required=True)
    p.add_argument("--max-k", type=int, default=None)
    p.add_argument("--node-budget", type=int, default=50_000_000)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_optimal)

    p = sub.add_parser("check", help="test a fairness property; exit 0 true, 1 false")
    p.add_argument("--property", required=True, help="ef|ef1|sef1|po|uhef:K|hef:K")
    p.add_argument("--instance", required=True)
    p.add_argument("--allocation", required=True)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("experiment", help="run a sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out-csv", required=True)
    p.add_argument("--out-summary", required=True)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("reduce", help="build a hardness-gadget instance from a source problem")
    p.add_argument("problem", choices=["partition", "hitting-set", "coloring"])
    p.add_argument("--input", required=True)
    p.add_argument("--out-instance", required=True)
    p.add_argument("--out-allocation", default=None)
    p.set_defaults(func=_cmd_reduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (StructureError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
