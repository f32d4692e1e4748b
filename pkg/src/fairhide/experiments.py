"""Synthetic-data experiment harness: Bernoulli instances, algorithm sweeps,
regret aggregation, CSV/JSON persistence.

Determinism contract: a sweep is a pure function of its config. Instance
streams use counter-based seeding (master seed, n, m, instance id), so adding
or removing algorithms never perturbs the instances, and reruns produce
byte-identical CSV/JSON (wall-clock timing is only recorded when explicitly
requested, since it would break byte-identity).
"""
from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .algorithms import ALGORITHMS, SolverConfig
from .core import Allocation, CapacityError, Instance, envy_report, is_ef
from .hiding import ResidualEnvyOracle, exact_min_hide, optimal_kappa

CSV_COLUMNS = [
    "n",
    "m",
    "instance_id",
    "algorithm",
    "k_hidden",
    "k_opt",
    "regret",
    "normalized_regret",
    "aggregate_envy",
    "is_ef",
    "runtime_ms",
]

DEFAULT_ALGORITHMS = ("ef1-po", "envy-graph", "mnw", "round-robin")


@dataclass(frozen=True)
class SweepConfig:
    """Grid sweep parameters; mirrors the JSON config file field-for-field."""

    agent_range: tuple[int, int] = (3, 5)
    good_range: tuple[int, int] = (3, 8)
    instances_per_cell: int = 20
    bernoulli_p: float = 0.7
    algorithms: tuple[str, ...] = DEFAULT_ALGORITHMS
    rng_seed: int = 0
    compute_optimal: bool = True
    node_budget: int = 50_000_000
    parallelism: int = 1
    record_runtimes: bool = False

    def __post_init__(self):
        if self.agent_range[0] > self.agent_range[1] or self.agent_range[0] < 1:
            raise ValueError(f"bad agent_range {self.agent_range}")
        if self.good_range[0] > self.good_range[1] or self.good_range[0] < 0:
            raise ValueError(f"bad good_range {self.good_range}")
        if not 0 < self.bernoulli_p < 1:
            raise ValueError("bernoulli_p must lie strictly inside (0, 1)")
        if self.instances_per_cell < 1:
            raise ValueError("instances_per_cell must be positive")
        if self.parallelism < 1:
            raise ValueError("parallelism must be positive")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms: {sorted(unknown)}")
        object.__setattr__(self, "algorithms", tuple(sorted(set(self.algorithms))))

    @classmethod
    def from_json(cls, text: str) -> "SweepConfig":
        data = json.loads(text)
        kwargs = {}
        for key in (
            "agent_range",
            "good_range",
            "instances_per_cell",
            "bernoulli_p",
            "algorithms",
            "rng_seed",
            "compute_optimal",
            "node_budget",
            "parallelism",
            "record_runtimes",
        ):
            if key in data:
                value = data[key]
                if key in ("agent_range", "good_range", "algorithms"):
                    value = tuple(value)
                kwargs[key] = value
        return cls(**kwargs)

    def cells(self) -> list[tuple[int, int]]:
        """(n, m) grid cells, skipping m < n."""
        return [
            (n, m)
            for n in range(self.agent_range[0], self.agent_range[1] + 1)
            for m in range(self.good_range[0], self.good_range[1] + 1)
            if m >= n
        ]


@dataclass(frozen=True)
class ExperimentRecord:
    """One CSV row: an (instance, algorithm) evaluation or an 'optimal' row."""

    n: int
    m: int
    instance_id: int
    algorithm: str
    k_hidden: int | None
    k_opt: int | None
    regret: int | None
    normalized_regret: Fraction | None
    aggregate_envy: int | None
    is_ef_flag: bool | None
    runtime_ms: float | None

    def to_row(self) -> list[str]:
        def cell(v):
            if v is None:
                return ""
            if isinstance(v, bool):
                return "true" if v else "false"
            if isinstance(v, Fraction):
                return repr(float(v))
            if isinstance(v, float):
                return f"{v:.3f}"
            return str(v)

        return [
            str(self.n),
            str(self.m),
            str(self.instance_id),
            self.algorithm,
            cell(self.k_hidden),
            cell(self.k_opt),
            cell(self.regret),
            cell(self.normalized_regret),
            cell(self.aggregate_envy),
            cell(self.is_ef_flag),
            cell(self.runtime_ms),
        ]


def cell_seed(master_seed: int, n: int, m: int, instance_id: int) -> np.random.SeedSequence:
    """Counter-based derivation: the instance stream is independent of what
    else the sweep computes."""
    return np.random.SeedSequence(entropy=(master_seed & 0xFFFFFFFFFFFFFFFF, n, m, instance_id))


def generate_bernoulli(n: int, m: int, p: float, seed) -> Instance:
    """Binary instance with v_ij ~ Bernoulli(p) i.i.d., deterministic in seed.

    `seed` may be an int or a SeedSequence (e.g. from `cell_seed`).
    """
    if not 0 < p < 1:
        raise ValueError("p must lie strictly inside (0, 1)")
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    rng = np.random.default_rng(ss)
    vals = (rng.random((n, m)) < p).astype(np.int64)
    return Instance(vals)


def generate_uniform(n: int, m: int, high: int, seed) -> Instance:
    """Instance with v_ij uniform over {0..high} i.i.d., deterministic in seed."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    rng = np.random.default_rng(ss)
    return Instance(rng.integers(0, high + 1, size=(n, m), dtype=np.int64))


def _evaluate_instance(config: SweepConfig, n: int, m: int, instance_id: int) -> list[ExperimentRecord]:
    """All records for one instance, sorted by algorithm name."""
    inst = generate_bernoulli(n, m, config.bernoulli_p, cell_seed(config.rng_seed, n, m, instance_id))
    records: list[ExperimentRecord] = []

    k_opt: int | None = None
    opt_runtime: float | None = None
    if config.compute_optimal:
        t0 = time.perf_counter()
        try:
            k_opt, _, _ = optimal_kappa(inst, node_budget=config.node_budget)
        except CapacityError:
            k_opt = None
        if config.record_runtimes:
            opt_runtime = (time.perf_counter() - t0) * 1000.0

    solver_cfg = SolverConfig(mnw_node_budget=config.node_budget)
    for name in config.algorithms:
        t0 = time.perf_counter()
        try:
            alloc = ALGORITHMS[name](inst, solver_cfg)
        except CapacityError:
            records.append(
                ExperimentRecord(n, m, instance_id, name, None, k_opt, None, None, None, None, None)
            )
            continue
        runtime = (time.perf_counter() - t0) * 1000.0 if config.record_runtimes else None
        k_hidden = exact_min_hide(ResidualEnvyOracle(inst, alloc)).size
        aggregate = envy_report(inst, alloc).aggregate
        reg = k_hidden - k_opt if k_opt is not None else None
        norm = Fraction(reg, n - 1) if (reg is not None and n > 1) else (Fraction(0) if reg is not None else None)
        records.append(
            ExperimentRecord(
                n, m, instance_id, name,
                k_hidden, k_opt, reg, norm, aggregate, aggregate == 0, runtime,
            )
        )
    records.append(
        ExperimentRecord(
            n, m, instance_id, "optimal",
            k_opt, k_opt,
            0 if k_opt is not None else None,
            Fraction(0) if k_opt is not None else None,
            None,
            (k_opt == 0) if k_opt is not None else None,
            opt_runtime,
        )
    )
    records.sort(key=lambda r: r.algorithm)
    return records


def _worker(args) -> tuple[tuple[int, int, int], list[ExperimentRecord]]:
    config, n, m, instance_id = args
    return (n, m, instance_id), _evaluate_instance(config, n, m, instance_id)


def run_sweep(config: SweepConfig) -> list[ExperimentRecord]:
    """Every record of the sweep in deterministic (n, m, instance_id, algorithm) order.

    Per-instance capacity failures become sentinel (empty) fields; the sweep
    itself never aborts on them.
    """
    tasks = [
        (config, n, m, i)
        for (n, m) in config.cells()
        for i in range(config.instances_per_cell)
    ]
    if config.parallelism > 1:
        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            keyed = list(pool.map(_worker, tasks, chunksize=4))
        keyed.sort(key=lambda kr: kr[0])
        out: list[ExperimentRecord] = []
        for _, recs in keyed:
            out.extend(recs)
        return out
    out = []
    for args in tasks:
        out.extend(_worker(args)[1])
    return out


def records_to_csv(records: list[ExperimentRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(r.to_row())
    return buf.getvalue()


def write_csv(records: list[ExperimentRecord], path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(records_to_csv(records))


def aggregate(records: list[ExperimentRecord]) -> dict:
    """Cell summaries and the hidden-goods CDF table.

    Conventions: normalized regret averages over all instances with a known
    kappa-opt; the hidden-goods count averages over non-EF instances only
    (kappa-opt >= 1, emitted as null when the cell has none); worst-case
    panels take maxima. The CDF gives, per algorithm and k, the fraction of
    instances whose output is HEF-k.
    """
    if not records:
        return {"cells": [], "optimal_cells": [], "cdf": {}, "coverage": {}}
    alg_records = [r for r in records if r.algorithm != "optimal"]
    opt_records = [r for r in records if r.algorithm == "optimal"]
    opt_by_key = {(r.n, r.m, r.instance_id): r for r in opt_records}

    cells: dict[tuple[int, int, str], list[ExperimentRecord]] = {}
    for r in alg_records:
        cells.setdefault((r.n, r.m, r.algorithm), []).append(r)

    cell_rows = []
    for (n, m, alg), recs in sorted(cells.items()):
        with_opt = [r for r in recs if r.k_opt is not None and r.k_hidden is not None]
        non_ef = [r for r in with_opt if r.k_opt >= 1]
        solved = [r for r in recs if r.k_hidden is not None]
        cell_rows.append(
            {
                "n": n,
                "m": m,
                "algorithm": alg,
                "instances": len(recs),
                "covered": len(with_opt),
                "mean_normalized_regret": (
                    float(sum(Fraction(r.regret, max(n - 1, 1)) for r in with_opt) / len(with_opt))
                    if with_opt
                    else None
                ),
                "worst_normalized_regret": (
                    max(float(r.normalized_regret) for r in with_opt) if with_opt else None
                ),
                "worst_regret": max((r.regret for r in with_opt), default=None),
                "mean_hidden_non_ef": (
                    float(sum(r.k_hidden for r in non_ef) / len(non_ef)) if non_ef else None
                ),
                "worst_k_hidden": max((r.k_hidden for r in solved), default=None),
                "ef_frequency": (
                    sum(1 for r in solved if r.is_ef_flag) / len(solved) if solved else None
                ),
            }
        )

    opt_cells: dict[tuple[int, int], list[ExperimentRecord]] = {}
    for r in opt_records:
        opt_cells.setdefault((r.n, r.m), []).append(r)
    opt_rows = []
    covered_cells = 0
    for (n, m), recs in sorted(opt_cells.items()):
        known = [r for r in recs if r.k_opt is not None]
        fully_covered = len(known) == len(recs)
        covered_cells += fully_covered
        opt_rows.append(
            {
                "n": n,
                "m": m,
                "instances": len(recs),
                "covered": len(known),
                "fully_covered": fully_covered,
                "mean_k_opt": (sum(r.k_opt for r in known) / len(known)) if known else None,
                "worst_k_opt": max((r.k_opt for r in known), default=None),
                "ef_exists_frequency": (
                    sum(1 for r in known if r.k_opt == 0) / len(known) if known else None
                ),
            }
        )

    max_n = max((r.n for r in records), default=1)
    cdf: dict[str, list[float]] = {}
    for alg in sorted({r.algorithm for r in alg_records}):
        recs = [r for r in alg_records if r.algorithm == alg and r.k_hidden is not None]
        cdf[alg] = [
            (sum(1 for r in recs if r.k_hidden <= k) / len(recs)) if recs else 0.0
            for k in range(max_n)
        ]

    return {
        "cells": cell_rows,
        "optimal_cells": opt_rows,
        "cdf": {"k_values": list(range(max_n)), "fraction_hef_k": cdf},
        "coverage": {
            "cells_total": len(opt_cells),
            "cells_fully_covered": covered_cells,
            "fraction": covered_cells / len(opt_cells) if opt_cells else 1.0,
        },
    }


def summary_to_json(summary: dict) -> str:
    return json.dumps(summary, indent=2, sort_keys=True) + "\n"


def write_summary(summary: dict, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(summary_to_json(summary))
