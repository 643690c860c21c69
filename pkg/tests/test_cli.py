import json

import pytest

from warpcheck.cli import main
from warpcheck.report import revalidate_report


def read_report(path):
    return json.loads(path.read_text())


class TestScenarioRuns:
    def test_sha_yang_passes_with_residual_field(self, tmp_path, capsys):
        rc = main(["sha-yang", "--n", "2", "--m", "3", "--T", "50",
                   "--out", str(tmp_path)])
        assert rc == 0
        report = read_report(tmp_path / "sha-yang.json")
        names = [c["name"] for c in report["checks"]]
        assert "first_integral_residual" in names
        assert report["overall_pass"] is True
        out = capsys.readouterr().out
        assert "OVERALL PASS" in out

    def test_neck_reports_positive_delta(self, tmp_path):
        rc = main(["neck", "--nu", "0.1", "--n", "5", "--s", "0.5,0.25,0.1",
                   "--out", str(tmp_path)])
        assert rc == 0
        report = read_report(tmp_path / "neck.json")
        assert float(report["config"]["delta"]) > 0.0

    def test_docking_round_spread_field(self, tmp_path):
        rc = main(["docking", "--n", "3", "--check-round", "--out", str(tmp_path)])
        assert rc == 0
        report = read_report(tmp_path / "docking.json")
        spread = next(c for c in report["checks"]
                      if c["name"] == "max_component_spread")
        assert float(spread["value"]) <= 1e-9

    def test_closability_and_gn_and_thm22_and_glue(self, tmp_path):
        assert main(["closability", "--n", "4", "--c-max", "0.3",
                     "--out", str(tmp_path)]) == 0
        assert main(["gn", "--n", "5", "--eps-prime", "0.2",
                     "--out", str(tmp_path)]) == 0
        assert main(["thm22", "--n", "4", "--out", str(tmp_path)]) == 0
        assert main(["glue", "--example", "hemisphere", "--n", "4",
                     "--out", str(tmp_path)]) == 0
        assert (tmp_path / "closability.json").exists()
        assert (tmp_path / "gn.json").exists()
        assert (tmp_path / "thm22.json").exists()
        assert (tmp_path / "glue.json").exists()


class TestExitCodeContract:
    @pytest.mark.parametrize("argv", [
        ["sha-yang", "--n", "2", "--m", "2", "--T", "20"],
        ["neck", "--nu", "0.1", "--n", "5", "--s", "0.5,0.1"],
        ["docking", "--n", "3"],
        ["closability", "--n", "4"],
        ["gn", "--n", "5"],
        ["thm22", "--n", "4"],
        ["glue", "--example", "hemisphere"],
    ])
    def test_pass_fail_and_input_error_paths(self, tmp_path, argv):
        ok_dir = tmp_path / "ok"
        assert main(argv + ["--out", str(ok_dir)]) == 0

        fail_dir = tmp_path / "fail"
        rc = main(argv + ["--out", str(fail_dir), "--require-min", "1e9"])
        assert rc == 1
        # the report is still written on verification failure
        report = read_report(fail_dir / f"{argv[0]}.json")
        assert report["overall_pass"] is False

    def test_input_error_writes_nothing(self, tmp_path):
        rc = main(["sha-yang", "--n", "1", "--m", "2", "--out", str(tmp_path)])
        assert rc == 2
        assert list(tmp_path.iterdir()) == []

    def test_thm22_forced_ricci_failure(self, tmp_path):
        rc = main(["thm22", "--n", "4", "--members", "2",
                   "--ric-deficit", "0.1", "--out", str(tmp_path)])
        assert rc == 1
        report = read_report(tmp_path / "thm22.json")
        failing = [c for c in report["checks"] if not c["pass"]]
        assert any("ricci_floor" in c["name"] for c in failing)


class TestDeterminismAndRoundTrip:
    def test_identical_configs_are_byte_identical(self, tmp_path):
        d1, d2 = tmp_path / "a", tmp_path / "b"
        argv = ["neck", "--nu", "0.1", "--n", "5", "--s", "0.5,0.25"]
        assert main(argv + ["--out", str(d1)]) == 0
        assert main(argv + ["--out", str(d2)]) == 0
        assert (d1 / "neck.json").read_bytes() == (d2 / "neck.json").read_bytes()

    def test_report_revalidates_to_same_verdict(self, tmp_path):
        assert main(["docking", "--n", "4", "--out", str(tmp_path)]) == 0
        report = read_report(tmp_path / "docking.json")
        assert revalidate_report(report) == report["overall_pass"]

    def test_report_carries_config_and_version(self, tmp_path):
        assert main(["sha-yang", "--n", "2", "--m", "2", "--T", "20",
                     "--out", str(tmp_path)]) == 0
        report = read_report(tmp_path / "sha-yang.json")
        assert report["tool_version"]
        assert report["config"]["tol"] == repr(1e-10)
        assert report["schema_version"] == "1"

    def test_json_flag_prints_report(self, tmp_path, capsys):
        assert main(["glue", "--example", "hemisphere",
                     "--out", str(tmp_path), "--json"]) == 0
        out = capsys.readouterr().out
        assert '"overall_pass": true' in out


class TestConfigFile:
    def test_config_supplies_defaults_and_flags_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("nu = 0.1\nn = 5\ns = 0.5,0.25\ngrid = 256\n")
        d1 = tmp_path / "o1"
        rc = main(["neck", "--config", str(cfg), "--out", str(d1)])
        assert rc == 0
        report = read_report(d1 / "neck.json")
        assert report["config"]["s_values"] == [repr(0.5), repr(0.25)]
        d2 = tmp_path / "o2"
        rc = main(["neck", "--config", str(cfg), "--s", "0.4",
                   "--out", str(d2)])
        assert rc == 0
        report = read_report(d2 / "neck.json")
        assert report["config"]["s_values"] == [repr(0.4)]

    def test_unknown_config_key_is_input_error(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("bogus = 3\n")
        rc = main(["neck", "--config", str(cfg), "--nu", "0.1", "--n", "5",
                   "--s", "0.5", "--out", str(tmp_path / "x")])
        assert rc == 2

    def test_missing_config_file_is_input_error(self, tmp_path):
        rc = main(["neck", "--config", str(tmp_path / "nope.cfg"),
                   "--nu", "0.1", "--n", "5", "--s", "0.5",
                   "--out", str(tmp_path)])
        assert rc == 2


class TestExport:
    def test_sha_f_row_count(self, tmp_path):
        rc = main(["export", "--profile", "sha-f", "--n", "2", "--m", "2",
                   "--T", "50", "--grid", "1001", "--out", str(tmp_path)])
        assert rc == 0
        lines = (tmp_path / "sha-f.csv").read_text().splitlines()
        assert lines[0] == "t,f,fp,fpp"
        assert len(lines) == 1002

    def test_neck_first_row_starts_at_s(self, tmp_path):
        rc = main(["export", "--profile", "neck", "--nu", "0.1", "--s", "0.5",
                   "--grid", "100", "--out", str(tmp_path)])
        assert rc == 0
        first = (tmp_path / "neck.csv").read_text().splitlines()[1]
        assert first.split(",")[0] == repr(0.5)

    def test_k_profile_last_row_is_flat(self, tmp_path):
        rc = main(["export", "--profile", "k", "--eps-prime", "0.2",
                   "--grid", "200", "--out", str(tmp_path)])
        assert rc == 0
        last = (tmp_path / "k.csv").read_text().splitlines()[-1]
        t, f, fp, fpp = map(float, last.split(","))
        assert t == 0.2
        assert abs(fp) <= 1e-10

    def test_csv_flag_dumps_scenario_profiles(self, tmp_path):
        rc = main(["sha-yang", "--n", "2", "--m", "2", "--T", "20",
                   "--out", str(tmp_path), "--csv", "--grid", "501"])
        assert rc == 0
        f_csv = tmp_path / "sha-yang_sha-f.csv"
        assert f_csv.exists()
        assert len(f_csv.read_text().splitlines()) == 502

    def test_unwritable_path_is_input_error(self, tmp_path):
        target = tmp_path / "file"
        target.write_text("occupied")
        rc = main(["export", "--profile", "docking-r",
                   "--out", str(target / "sub")])
        assert rc == 2


def test_parallel_neck_matches_sequential_bytes(tmp_path):
    argv = ["neck", "--nu", "0.1", "--n", "5", "--s", "0.5,0.25,0.1"]
    d1, d2 = tmp_path / "seq", tmp_path / "par"
    assert main(argv + ["--out", str(d1)]) == 0
    assert main(argv + ["--out", str(d2), "--parallel"]) == 0
    assert (d1 / "neck.json").read_bytes() == (d2 / "neck.json").read_bytes()
