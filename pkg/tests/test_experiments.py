"""Sweep harness: generation determinism, record invariants, aggregation, CSV."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from fairhide.experiments import (
    CSV_COLUMNS,
    ExperimentRecord,
    SweepConfig,
    aggregate,
    cell_seed,
    generate_bernoulli,
    records_to_csv,
    run_sweep,
    summary_to_json,
)

SMALL = SweepConfig(
    agent_range=(2, 3),
    good_range=(2, 5),
    instances_per_cell=4,
    bernoulli_p=0.7,
    rng_seed=7,
)


@pytest.fixture(scope="module")
def small_records():
    return run_sweep(SMALL)


class TestGeneration:
    def test_deterministic_per_seed(self):
        a = generate_bernoulli(4, 6, 0.7, cell_seed(1, 4, 6, 0))
        b = generate_bernoulli(4, 6, 0.7, cell_seed(1, 4, 6, 0))
        assert (a.valuations == b.valuations).all()
        c = generate_bernoulli(4, 6, 0.7, cell_seed(1, 4, 6, 1))
        assert (a.valuations != c.valuations).any()

    def test_mean_matches_p(self):
        draws = np.concatenate(
            [
                generate_bernoulli(10, 10, 0.7, cell_seed(3, 10, 10, i)).valuations.ravel()
                for i in range(100)
            ]
        )
        se = np.sqrt(0.7 * 0.3 / draws.size)
        assert abs(draws.mean() - 0.7) < 3 * se

    def test_rejects_degenerate_p(self):
        with pytest.raises(ValueError):
            generate_bernoulli(2, 2, 1.0, 0)

    def test_zero_row_frequency_sanity(self):
        # 5x5 at p=0.7: expect about 1000 * 5 * 0.3^5 all-zero rows
        zero_rows = sum(
            int((generate_bernoulli(5, 5, 0.7, cell_seed(21, 5, 5, i)).valuations.sum(axis=1) == 0).sum())
            for i in range(1000)
        )
        expected = 1000 * 5 * 0.3**5
        sd = (1000 * 5 * 0.3**5 * (1 - 0.3**5)) ** 0.5
        assert abs(zero_rows - expected) < 4 * sd


class TestSweepConfig:
    def test_skips_cells_below_diagonal(self):
        cells = SweepConfig(agent_range=(3, 4), good_range=(2, 5)).cells()
        assert (3, 2) not in cells and (4, 3) not in cells
        assert (3, 3) in cells and (4, 5) in cells

    def test_json_round_trip(self):
        text = '{"agent_range": [2, 3], "good_range": [2, 4], "instances_per_cell": 5, "bernoulli_p": 0.5, "rng_seed": 3}'
        cfg = SweepConfig.from_json(text)
        assert cfg.agent_range == (2, 3) and cfg.bernoulli_p == 0.5

    def test_rejects_unknown_algorithm(self):
        with pytest.raises(ValueError):
            SweepConfig(algorithms=("mnw", "magic"))


class TestSweepRecords:
    def test_every_algorithm_within_uniform_bound(self, small_records):
        for r in small_records:
            if r.algorithm != "optimal" and r.k_hidden is not None:
                assert r.k_hidden <= r.n - 1

    def test_optimal_lower_bounds_k_hidden(self, small_records):
        for r in small_records:
            if r.algorithm != "optimal" and r.k_opt is not None and r.k_hidden is not None:
                assert r.k_opt <= r.k_hidden
                assert r.regret == r.k_hidden - r.k_opt
                assert r.normalized_regret == Fraction(r.regret, r.n - 1)

    def test_records_sorted_deterministically(self, small_records):
        keys = [(r.n, r.m, r.instance_id, r.algorithm) for r in small_records]
        assert keys == sorted(keys)

    def test_rerun_byte_identical(self, small_records):
        again = run_sweep(SMALL)
        assert records_to_csv(again) == records_to_csv(small_records)

    def test_csv_header(self, small_records):
        text = records_to_csv(small_records)
        assert text.splitlines()[0] == ",".join(CSV_COLUMNS)

    def test_runtime_column_empty_by_default(self, small_records):
        for line in records_to_csv(small_records).splitlines()[1:]:
            assert line.endswith(",")

    def test_parallel_merge_matches_serial(self):
        cfg = SweepConfig(
            agent_range=(2, 2),
            good_range=(2, 4),
            instances_per_cell=2,
            rng_seed=5,
            parallelism=2,
        )
        serial = run_sweep(SweepConfig(**{**cfg.__dict__, "parallelism": 1}))
        parallel = run_sweep(cfg)
        assert records_to_csv(serial) == records_to_csv(parallel)


def _record(n, m, iid, alg, k_hidden, k_opt, envy):
    reg = k_hidden - k_opt if (k_hidden is not None and k_opt is not None) else None
    return ExperimentRecord(
        n=n,
        m=m,
        instance_id=iid,
        algorithm=alg,
        k_hidden=k_hidden,
        k_opt=k_opt,
        regret=reg,
        normalized_regret=Fraction(reg, n - 1) if reg is not None else None,
        aggregate_envy=envy,
        is_ef_flag=(envy == 0) if envy is not None else None,
        runtime_ms=None,
    )


class TestAggregate:
    def test_chain_fixture_normalized_regret(self):
        # the 5x5 chain instance as one record: kappa=4 vs optimum 1
        records = [
            _record(5, 5, 0, "mnw", 4, 1, 36),
            _record(5, 5, 0, "optimal", 1, 1, None),
        ]
        summary = aggregate(records)
        cell = summary["cells"][0]
        assert cell["algorithm"] == "mnw"
        assert cell["mean_normalized_regret"] == 0.75
        assert cell["mean_hidden_non_ef"] == 4.0
        assert cell["ef_frequency"] == 0.0

    def test_all_ef_cell(self):
        records = [
            _record(3, 4, 0, "round-robin", 0, 0, 0),
            _record(3, 4, 0, "optimal", 0, 0, None),
        ]
        cell = aggregate(records)["cells"][0]
        assert cell["mean_normalized_regret"] == 0.0
        assert cell["mean_hidden_non_ef"] is None  # no non-EF instances
        assert cell["ef_frequency"] == 1.0

    def test_cdf_reaches_one_at_n_minus_one(self, small_records):
        summary = aggregate(small_records)
        max_n = max(r.n for r in small_records)
        for series in summary["cdf"]["fraction_hef_k"].values():
            assert series[max_n - 1 - 0] == 1.0 or series[-1] == 1.0

    def test_summary_json_deterministic(self, small_records):
        assert summary_to_json(aggregate(small_records)) == summary_to_json(
            aggregate(run_sweep(SMALL))
        )

    def test_empty_records(self):
        assert aggregate([]) == {"cells": [], "optimal_cells": [], "cdf": {}, "coverage": {}}

    def test_coverage_counts_sentinels(self):
        records = [
            _record(3, 3, 0, "mnw", 2, None, 5),
            _record(3, 3, 0, "optimal", None, None, None),
        ]
        summary = aggregate(records)
        assert summary["coverage"]["cells_fully_covered"] == 0
        assert summary["cells"][0]["mean_normalized_regret"] is None
