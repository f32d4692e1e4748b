"""End-to-end CLI coverage: every subcommand, file formats, exit codes."""
from __future__ import annotations

import json

import pytest

from fairhide.cli import main

INTRO = {
    "n": 3,
    "m": 6,
    "valuations": [
        [1, 1, 4, 1, 1, 4],
        [1, 4, 1, 1, 4, 1],
        [4, 1, 1, 4, 1, 1],
    ],
}
CHAIN = {
    "n": 5,
    "m": 5,
    "valuations": [
        [1, 0, 0, 0, 0],
        [10, 1, 0, 0, 0],
        [0, 10, 1, 0, 0],
        [0, 0, 10, 1, 0],
        [0, 0, 0, 10, 1],
    ],
}
GAP = {
    "n": 5,
    "m": 6,
    "valuations": [
        [1, 1, 2, 0, 0, 0],
        [1, 1, 2, 0, 0, 0],
        [10, 10, 1, 1, 1, 1],
        [10, 10, 1, 1, 1, 1],
        [10, 10, 1, 1, 1, 1],
    ],
}


@pytest.fixture()
def files(tmp_path):
    paths = {}
    for name, payload in [("intro", INTRO), ("chain", CHAIN), ("gap", GAP)]:
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(payload))
        paths[name] = str(p)
    paths["chain_diag"] = str(tmp_path / "chain_diag.json")
    (tmp_path / "chain_diag.json").write_text(json.dumps({"bundles": [[0], [1], [2], [3], [4]]}))
    paths["gap_alloc"] = str(tmp_path / "gap_alloc.json")
    (tmp_path / "gap_alloc.json").write_text(
        json.dumps({"bundles": [[0, 1], [2], [3], [4], [5]]})
    )
    paths["tmp"] = tmp_path
    return paths


class TestSolve:
    def test_mnw_on_chain_returns_diagonal(self, files, capsys):
        out = files["tmp"] / "alloc.json"
        code = main(
            ["solve", "--instance", files["chain"], "--algorithm", "mnw", "--out", str(out)]
        )
        assert code == 0
        assert json.loads(out.read_text()) == {"bundles": [[0], [1], [2], [3], [4]]}
        summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
        assert summary["is_ef1"] is True
        assert summary["kappa"] == 4

    def test_unknown_algorithm_exits_2(self, files):
        assert main(["solve", "--instance", files["intro"], "--algorithm", "nope"]) == 2

    def test_bad_instance_file_exits_2(self, files):
        bad = files["tmp"] / "bad.json"
        bad.write_text('{"n": 2, "m": 2, "valuations": [[1, 2]]}')
        assert main(["solve", "--instance", str(bad), "--algorithm", "mnw"]) == 2


class TestVerify:
    def test_chain_exact_kappa_4(self, files, capsys):
        code = main(
            ["verify", "--instance", files["chain"], "--allocation", files["chain_diag"], "--exact"]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["size"] == 4
        assert payload["mode"] == "exact"
        assert payload["f_trace"][0] == 36 and payload["f_trace"][-1] == 0

    def test_chain_greedy_takes_first_four(self, files, capsys):
        code = main(
            ["verify", "--instance", files["chain"], "--allocation", files["chain_diag"], "--greedy"]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["hidden"] == [0, 1, 2, 3]
        assert payload["approximate"] is True
        assert payload["f_trace"] == [36, 27, 18, 9, 0]

    def test_default_mode_is_exact_for_small_candidate_sets(self, files, capsys):
        code = main(["verify", "--instance", files["chain"], "--allocation", files["chain_diag"]])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["mode"] == "exact" and payload["approximate"] is False

    def test_dimension_mismatch_exits_2(self, files):
        assert (
            main(["verify", "--instance", files["intro"], "--allocation", files["chain_diag"]])
            == 2
        )


class TestOptimal:
    def test_chain_kappa_opt_one(self, files, capsys):
        assert main(["optimal", "--instance", files["chain"]]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["kappa_opt"] == 1


class TestCheck:
    def test_gap_allocation_is_hef2_but_not_uhef2(self, files):
        base = ["check", "--instance", files["gap"], "--allocation", files["gap_alloc"]]
        assert main(base + ["--property", "hef:2"]) == 0
        assert main(base + ["--property", "uhef:2"]) == 1

    def test_ef_and_po(self, files, capsys):
        base = ["check", "--instance", files["chain"], "--allocation", files["chain_diag"]]
        assert main(base + ["--property", "ef"]) == 1
        assert main(base + ["--property", "ef1"]) == 0
        assert main(base + ["--property", "po"]) == 0
        assert main(base + ["--property", "sef1"]) == 0

    def test_unknown_property_exits_2(self, files):
        base = ["check", "--instance", files["gap"], "--allocation", files["gap_alloc"]]
        assert main(base + ["--property", "bogus"]) == 2


class TestExperiment:
    def test_small_sweep_end_to_end(self, files, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(
            json.dumps(
                {
                    "agent_range": [2, 3],
                    "good_range": [2, 4],
                    "instances_per_cell": 2,
                    "bernoulli_p": 0.7,
                    "rng_seed": 11,
                }
            )
        )
        csv_path = tmp_path / "out.csv"
        summary_path = tmp_path / "summary.json"
        code = main(
            [
                "experiment",
                "--config",
                str(cfg),
                "--out-csv",
                str(csv_path),
                "--out-summary",
                str(summary_path),
            ]
        )
        assert code == 0
        lines = csv_path.read_text().splitlines()
        assert lines[0].startswith("n,m,instance_id,algorithm")
        assert len(lines) > 1
        summary = json.loads(summary_path.read_text())
        assert summary["coverage"]["fraction"] == 1.0

    def test_bad_config_exits_2(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"bernoulli_p": 1.5}')
        assert (
            main(
                [
                    "experiment",
                    "--config",
                    str(cfg),
                    "--out-csv",
                    str(tmp_path / "a.csv"),
                    "--out-summary",
                    str(tmp_path / "b.json"),
                ]
            )
            == 2
        )


class TestReduce:
    def test_partition(self, tmp_path, capsys):
        src = tmp_path / "p.json"
        src.write_text(json.dumps({"values": [1, 1, 2], "k": 1}))
        out = tmp_path / "inst.json"
        assert main(["reduce", "partition", "--input", str(src), "--out-instance", str(out)]) == 0
        inst = json.loads(out.read_text())
        assert inst["n"] == 4 and inst["m"] == 5
        assert inst["valuations"][0] == [1, 1, 2, 2, 8]

    def test_hitting_set_with_allocation(self, tmp_path):
        src = tmp_path / "h.json"
        src.write_text(json.dumps({"p": 2, "families": [[1], [1, 2]], "k": 1}))
        out_i = tmp_path / "inst.json"
        out_a = tmp_path / "alloc.json"
        code = main(
            [
                "reduce",
                "hitting-set",
                "--input",
                str(src),
                "--out-instance",
                str(out_i),
                "--out-allocation",
                str(out_a),
            ]
        )
        assert code == 0
        assert json.loads(out_i.read_text())["n"] == 3
        assert json.loads(out_a.read_text())["bundles"][-1] == [0, 1]

    def test_coloring(self, tmp_path, capsys):
        src = tmp_path / "c.json"
        src.write_text(json.dumps({"edges": [[0, 1], [1, 2], [0, 2]], "l": 3}))
        out = tmp_path / "inst.json"
        assert main(["reduce", "coloring", "--input", str(src), "--out-instance", str(out)]) == 0
        inst = json.loads(out.read_text())
        assert inst["n"] == 6 and inst["m"] == 6
