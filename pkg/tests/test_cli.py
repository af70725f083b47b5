import json

import pytest

from corralign.cli import (
    CURVE_HEADER,
    ExperimentConfig,
    UsageError,
    main,
    parse_config,
    resolve_config,
)


class TestConfigRoundTrip:
    def test_simulate_round_trip(self):
        cfg = ExperimentConfig(
            command="simulate-detection",
            n=50,
            d=100,
            rho=0.3,
            trials=500,
            seed=9,
            threads=2,
            threshold=12.5,
        )
        assert parse_config(cfg.render()) == cfg

    def test_curve_round_trip(self):
        cfg = ExperimentConfig(
            command="curve",
            n=1000,
            axis="d",
            grid=(100.0, 5000.0, 7),
            risk=0.05,
            kstar=40,
            margin=0.2,
            epsilon_d=0.1,
            format="json",
        )
        assert parse_config(cfg.render()) == cfg

    def test_unknown_field_rejected(self):
        with pytest.raises(UsageError, match="bogus"):
            parse_config(json.dumps({"command": "verify", "bogus": 1}))

    def test_unknown_command_rejected(self):
        with pytest.raises(UsageError, match="unknown command"):
            parse_config(json.dumps({"command": "flyswatter"}))

    def test_missing_required_named(self):
        with pytest.raises(UsageError, match="'rho'"):
            parse_config(
                json.dumps({"command": "simulate-detection", "n": 3, "d": 3})
            )

    def test_grid_string_form(self):
        cfg = parse_config(
            json.dumps({"command": "curve", "axis": "d", "grid": "10:90:5", "n": 100})
        )
        assert cfg.grid == (10.0, 90.0, 5)

    def test_grid_malformed(self):
        with pytest.raises(UsageError, match="grid"):
            parse_config(
                json.dumps({"command": "curve", "axis": "d", "grid": "10:90", "n": 5})
            )

    def test_validation_messages_name_field(self):
        with pytest.raises(UsageError, match="'trials'"):
            parse_config(
                json.dumps(
                    {"command": "verify", "trials": 0}
                )
            )
        with pytest.raises(UsageError, match="'risk'"):
            parse_config(json.dumps({"command": "verify", "risk": 2.0}))


class TestResolveConfig:
    def test_flags_win_over_config_file(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(
            json.dumps(
                {"command": "verify", "seed": 1, "threads": 2, "format": "csv"}
            )
        )
        cfg = resolve_config(["verify", "--config", str(path), "--seed", "42"])
        assert cfg.seed == 42  # flag wins
        assert cfg.threads == 2  # file value survives
        assert cfg.format == "csv"

    def test_config_command_mismatch(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"command": "curve"}))
        with pytest.raises(UsageError, match="conflicts"):
            resolve_config(["verify", "--config", str(path)])

    def test_missing_config_file_is_io_error(self):
        from corralign.cli import OutputError

        with pytest.raises(OutputError):
            resolve_config(["verify", "--config", "/nonexistent/c.json"])

    def test_usage_error_for_bad_flag_value(self):
        with pytest.raises(UsageError):
            resolve_config(["curve", "--axis", "q"])

    def test_no_command_is_usage_error(self):
        with pytest.raises(UsageError):
            resolve_config([])


class TestMainExitCodes:
    def test_usage_error_is_1(self, capsys):
        assert main(["curve", "--axis", "q"]) == 1
        assert "usage error" in capsys.readouterr().err

    def test_missing_params_is_1(self, capsys):
        assert main(["simulate-detection", "--n", "3"]) == 1
        err = capsys.readouterr().err
        assert "'d'" in err or "'rho'" in err

    def test_io_error_is_3(self, tmp_path, capsys):
        out = tmp_path / "no" / "such" / "dir" / "x.csv"
        code = main(
            [
                "curve",
                "--axis",
                "d",
                "--grid",
                "500:1000:2",
                "--n",
                "100",
                "--out",
                str(out),
            ]
        )
        assert code == 3
        assert "cannot write" in capsys.readouterr().err

    def test_simulate_detection_json(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code = main(
            [
                "simulate-detection",
                "--n", "5", "--d", "10", "--rho", "0.5",
                "--trials", "50", "--seed", "3", "--out", str(out),
            ]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["schema"] == 1
        assert payload["config"]["trials"] == 50
        assert 0.0 <= payload["results"]["risk"] <= 2.0
        assert "timestamp" in payload

    def test_simulate_recovery_runs(self, tmp_path):
        out = tmp_path / "r.json"
        code = main(
            [
                "simulate-recovery",
                "--n", "5", "--d", "30", "--rho", "0.8",
                "--trials", "40", "--seed", "4", "--out", str(out),
            ]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["results"]["error_bound"] > 0.0


class TestCurveOutput:
    def test_csv_golden_header(self, tmp_path):
        out = tmp_path / "curve.csv"
        code = main(
            [
                "curve",
                "--axis", "d", "--grid", "500:2000:3", "--n", "1000",
                "--out", str(out),
            ]
        )
        assert code == 0
        text = out.read_text(encoding="utf-8")
        lines = text.split("\n")
        assert lines[0] == CURVE_HEADER
        assert len(lines) == 5  # header + 3 rows + trailing newline
        assert text.endswith("\n") and "\r" not in text

    def test_csv_seventeen_digit_round_trip(self, tmp_path):
        out = tmp_path / "curve.csv"
        main(["curve", "--axis", "d", "--grid", "1000:1000:1", "--n", "1000",
              "--out", str(out)])
        row = out.read_text().splitlines()[1].split(",")
        from corralign.bounds import invert_for_rho2

        expect = invert_for_rho2("det-ach", 1000, 1000, 0.1)
        assert float(row[1]) == expect  # no precision lost in the file

    def test_json_format(self, tmp_path):
        out = tmp_path / "curve.json"
        code = main(
            [
                "curve", "--axis", "n", "--grid", "200:400:2", "--d", "500",
                "--format", "json", "--out", str(out),
            ]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["schema"] == 1
        assert len(payload["rows"]) == 2
        assert set(payload["rows"][0]) == {
            "axis", "rho2_det_ach", "rho2_det_conv", "rho2_rec_ach", "rho2_rec_conv",
        }

    def test_stdout_when_no_out(self, capsys):
        code = main(["curve", "--axis", "d", "--grid", "800:900:2", "--n", "500"])
        assert code == 0
        captured = capsys.readouterr()
        assert captured.out.startswith(CURVE_HEADER)
        assert "config:" in captured.err  # diagnostics stay on stderr

    def test_deterministic_bytes(self, tmp_path):
        args = ["curve", "--axis", "d", "--grid", "500:1500:3", "--n", "2000"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(a), "--threads", "1"]) == 0
        assert main(args + ["--out", str(b), "--threads", "2"]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestSimulateDeterminism:
    def test_csv_report_byte_identical(self, tmp_path):
        args = [
            "simulate-detection", "--n", "4", "--d", "8", "--rho", "0.4",
            "--trials", "60", "--seed", "11", "--format", "csv",
        ]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(a), "--threads", "1"]) == 0
        assert main(args + ["--out", str(b), "--threads", "3"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_json_report_identical_minus_timestamp(self, tmp_path):
        args = [
            "simulate-detection", "--n", "4", "--d", "8", "--rho", "0.4",
            "--trials", "60", "--seed", "11",
        ]
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b), "--threads", "2"]) == 0
        pa, pb = json.loads(a.read_text()), json.loads(b.read_text())
        ta, tb = pa.pop("timestamp"), pb.pop("timestamp")
        for payload in (pa, pb):
            payload["config"].pop("threads")
            payload["config"].pop("out")
        assert pa == pb
        assert ta and tb
