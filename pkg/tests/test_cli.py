import json
import os

import numpy as np
import pytest

from riesz_lab.cli import (
    EXIT_CONFIG,
    EXIT_PASS,
    ConfigError,
    main,
    parse_config,
)
from riesz_lab.group_lattice import GroupSpec, mean_zero_project, random_real_function, save_binary


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


class TestParsing:
    def test_minimal_constants(self):
        cfg = parse_config(["constants", "--p-list", "2"])
        assert cfg.command == "constants"
        assert cfg.p_list == [2.0]

    def test_bad_p_named_in_diagnostic(self):
        with pytest.raises(ConfigError, match="p"):
            parse_config(["probe", "--p", "0.5"])

    def test_unknown_config_key_rejected(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"p": 2.0, "nonsense": 1}))
        with pytest.raises(ConfigError, match="nonsense"):
            parse_config(["probe", "--config", str(path)])

    def test_flag_overrides_file(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"p": 3.0, "seed": 7}))
        cfg = parse_config(["probe", "--config", str(path), "--p", "2.0"])
        assert cfg.p == 2.0
        assert cfg.seed == 7
        assert cfg.overrides == ["p"]

    def test_toml_config(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text('p = 2.5\ncycles = [4, 4]\n')
        cfg = parse_config(["probe", "--config", str(path)])
        assert cfg.p == 2.5 and cfg.cycles == [4, 4]

    def test_missing_command(self):
        with pytest.raises(ConfigError, match="command"):
            parse_config([])


class TestConstantsCommand:
    def test_exit_and_payload(self, tmp_path):
        out = tmp_path / "c.json"
        code = main(["constants", "--p-list", "2", "--out", str(out)])
        assert code == EXIT_PASS
        doc = read_json(out)
        assert doc["tool"] == "riesz-lab"
        vals = {r["name"]: r["value"] for r in doc["constants"]}
        assert vals["sharp_lp"] == pytest.approx(1.0, abs=1e-14)

    def test_bad_p_exit_code(self, capsys):
        code = main(["constants", "--p-list", "0.5"])
        assert code == EXIT_CONFIG
        err = capsys.readouterr().err
        assert "p_list" in err and "0.5" in err

    def test_csv_output(self, tmp_path):
        out = tmp_path / "c.csv"
        code = main(["constants", "--p-list", "2,4", "--out", str(out), "--fmt", "csv"])
        assert code == EXIT_PASS
        lines = out.read_text().strip().splitlines()
        assert lines[0].startswith("p,name,value")
        assert len(lines) == 7  # header + 3 constants x 2 values of p


class TestProbeCommand:
    def test_lp_probe_passes(self, tmp_path):
        out = tmp_path / "probe.json"
        code = main(["probe", "--cycles", "4,4", "--alpha-x", "1,-1",
                     "--p", "2", "--iters", "20", "--out", str(out)])
        assert code == EXIT_PASS
        doc = read_json(out)
        assert doc["probe"]["satisfied"]
        assert doc["probe"]["bound"] <= doc["probe"]["theorem_cap"] * (1 + 1e-9)

    def test_weak_mode(self, tmp_path):
        out = tmp_path / "probe.json"
        code = main(["probe", "--cycles", "4", "--alpha-x", "1",
                     "--p", "2", "--mode", "weak", "--out", str(out)])
        assert code == EXIT_PASS

    def test_deterministic_csv(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        args = ["probe", "--cycles", "4,4", "--alpha-x", "1,-1", "--p", "3",
                "--iters", "15", "--seed", "12", "--fmt", "csv"]
        assert main(args + ["--out", str(a)]) == EXIT_PASS
        assert main(args + ["--out", str(b)]) == EXIT_PASS
        assert a.read_bytes() == b.read_bytes()

    def test_stored_function_group_mismatch(self, tmp_path):
        f = mean_zero_project(random_real_function(GroupSpec((5,), ()), 0))
        fp = tmp_path / "f.bin"
        save_binary(f, str(fp))
        code = main(["probe", "--cycles", "4", "--alpha-x", "1",
                     "--f", str(fp)])
        assert code == EXIT_CONFIG


class TestMcCommand:
    def test_discrete_mc_passes(self, tmp_path):
        out = tmp_path / "mc.json"
        code = main(["mc", "--cycles", "4", "--alpha-x", "1", "--T", "4",
                     "--dt", "4", "--paths", "2000", "--seed", "0",
                     "--out", str(out)])
        assert code == EXIT_PASS
        doc = read_json(out)
        assert doc["subordination"]["compliance"] == 1.0
        assert doc["passed"]

    def test_non_mean_zero_rejected_before_simulation(self, tmp_path, capsys):
        spec = GroupSpec((4,), ())
        f = random_real_function(spec, 3)
        f.values = f.values + 5.0  # force a nonzero mean
        fp = tmp_path / "f.bin"
        save_binary(f, str(fp))
        code = main(["mc", "--cycles", "4", "--alpha-x", "1",
                     "--paths", "100000000", "--f", str(fp)])
        # the huge path budget would take hours; rejection must be immediate
        assert code == EXIT_CONFIG
        assert "mean-zero" in capsys.readouterr().err

    def test_trace_written(self, tmp_path):
        trace = tmp_path / "trace.csv"
        code = main(["mc", "--cycles", "4", "--alpha-x", "1", "--T", "1",
                     "--dt", "1", "--paths", "50", "--trace", str(trace),
                     "--out", str(tmp_path / "mc.json")])
        assert code == EXIT_PASS
        lines = trace.read_text().strip().splitlines()
        assert lines[0].split(",")[:3] == ["path", "time", "m_f"]
        assert len(lines) > 50


class TestZigzagCommand:
    def test_certificate(self, tmp_path):
        out = tmp_path / "z.json"
        code = main(["zigzag", "--p", "1.5", "--depth", "6", "--beam", "12",
                     "--out", str(out)])
        assert code == EXIT_PASS
        doc = read_json(out)
        cert = doc["certificate"]
        assert 0.0 < cert["bound"] <= cert["ceiling"]
        tree = json.loads(doc["tree"])
        assert tree["root"]["pos"] == [0.0, 0.0]


class TestFdCommand:
    def test_gaussian_study(self, tmp_path):
        out = tmp_path / "fd.json"
        code = main(["fd", "--family", "gaussian", "--dim", "1",
                     "--h-list", "0.1,0.05,0.025", "--out", str(out)])
        assert code == EXIT_PASS
        doc = read_json(out)
        assert 1.9 <= doc["consistency"]["slope"] <= 2.1
        assert doc["scale_invariance_residual"] < 1e-12
        assert doc["passed"]


class TestReportCommand:
    def test_merges_runs(self, tmp_path):
        d = tmp_path / "runs"
        d.mkdir()
        assert main(["constants", "--p-list", "2",
                     "--out", str(d / "constants.json")]) == EXIT_PASS
        assert main(["zigzag", "--p", "1.5", "--depth", "6", "--beam", "12",
                     "--out", str(d / "zigzag.json")]) == EXIT_PASS
        (d / "foreign.json").write_text(json.dumps({"tool": "other"}))
        out = tmp_path / "report.json"
        code = main(["report", "--dir", str(d), "--out", str(out)])
        assert code == EXIT_PASS
        doc = read_json(out)
        files = {r["file"] for r in doc["runs"]}
        assert files == {"constants.json", "zigzag.json"}
        assert doc["all_passed"]

    def test_requires_dir(self, capsys):
        assert main(["report"]) == EXIT_CONFIG
        assert "dir" in capsys.readouterr().err
