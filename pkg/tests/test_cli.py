import json

import numpy as np
import pytest

from sbpdiss.cli import parse_config, resolve_epsilon
from sbpdiss.core.exceptions import ConfigParseError, ConfigValidationError
from sbpdiss.main import run
from sbpdiss.services.experiment_service import ExperimentService


class TestPresets:
    def test_large_preset(self, make_config):
        config = make_config(command="spectra", p=3, N=20, eps="large")
        assert config.s == 4
        assert config.eps_resolved == pytest.approx(0.005)

    def test_small_preset(self, make_config):
        assert make_config(command="spectra", p=4, N=20, eps="small").eps_resolved == pytest.approx(0.0002)

    def test_spectral_element_preset(self, make_config):
        config = make_config(command="spectra", family="LGL", p=3, eps="se")
        assert config.s == 3
        assert config.eps_resolved == pytest.approx(0.1 * 2.25**-3)

    @pytest.mark.parametrize("p, expected", [(3, 0.01), (5, 0.002), (8, 0.0002)])
    def test_khi_table(self, settings, p, expected):
        assert resolve_epsilon("se-khi", p, p, settings.presets) == expected

    def test_khi_table_range(self, settings):
        with pytest.raises(ConfigValidationError, match="se-khi"):
            resolve_epsilon("se-khi", 9, 9, settings.presets)

    def test_numeric_string(self, settings):
        assert resolve_epsilon("0.01", 4, 3, settings.presets) == 0.01

    def test_unknown_preset(self, settings):
        with pytest.raises(ConfigValidationError, match="Available"):
            resolve_epsilon("huge", 4, 3, settings.presets)

    def test_negative_strength(self, make_config):
        with pytest.raises(ConfigValidationError) as info:
            make_config(command="spectra", p=3, N=20, eps=-0.1)
        assert info.value.fields == ["eps"]


class TestParsing:
    def test_missing_degree(self, make_config):
        with pytest.raises(ConfigValidationError) as info:
            make_config(command="verify")
        assert "p" in info.value.fields

    def test_parse_error_location(self):
        with pytest.raises(ConfigParseError) as info:
            parse_config('{"command": "verify",\n  "p": }')
        assert info.value.line == 2
        assert info.value.to_record()["exit_code"] == 2

    def test_unknown_key(self, make_config):
        with pytest.raises(ConfigValidationError) as info:
            make_config(command="verify", p=2, dissipation_strength=1.0)
        assert info.value.fields == ["dissipation_strength"]

    def test_top_level_must_be_object(self):
        with pytest.raises(ConfigValidationError):
            parse_config("[1, 2]")

    def test_command_line_must_agree_with_file(self):
        with pytest.raises(ConfigValidationError, match="command line"):
            parse_config('{"command": "verify", "p": 2}', overrides={"command": "spectra"})

    def test_overrides_replace_file_values(self):
        config = parse_config('{"command": "verify", "p": 2, "seed": 1}', overrides={"seed": 7, "threads": None})
        assert config.seed == 7
        assert config.threads == 1

    def test_defaults(self, make_config):
        config = make_config(command="spectra", p=3, N=20)
        assert (config.s, config.pde, config.problem) == (4, "linear-convection", "gaussian")
        assert config.n == 20
        assert make_config(command="run1d", p=2, N=20).problem == "burgers-sine"
        assert make_config(command="khi-demo", family="LGL", p=3).problem == "khi"
        assert make_config(command="vortex", p=2, N=20).pde == "euler-2d"

    def test_resolved_config_uses_file_names(self, make_config):
        resolved = make_config(command="spectra", p=3, N=20, eps="large").resolved()
        assert resolved["N"] == 20
        assert resolved["eps"] == "large"


class TestMain:
    def test_dump_dissipation(self, write_config, tmp_path, capsys):
        out = tmp_path / "out"
        path = write_config(command="dump-dissipation", p=1, N=12, s=2)
        assert run(["dump-dissipation", "--config", str(path), "--out", str(out)]) == 0

        payload = json.loads(capsys.readouterr().out)
        assert payload["status"] == "ok"
        assert "A_D_times_dx.txt" in payload["files"]
        assert (out / "A_D.txt").read_text(encoding="utf-8").startswith("# 12 12\n")
        scaled = np.loadtxt(out / "A_D_times_dx.txt")
        np.testing.assert_allclose(scaled[0, :3], [-2.0, 4.0, -2.0], atol=1e-12)
        manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
        assert manifest["config_hash"] == payload["config_hash"]

    def test_dump_operator(self, write_config, tmp_path, capsys):
        out = tmp_path / "out"
        path = write_config(command="dump-operator", family="LGL", p=4)
        assert run(["dump-operator", "--config", str(path), "--out", str(out)]) == 0
        assert np.loadtxt(out / "D.txt").shape == (5, 5)

    def test_parse_error_exit_code(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text('{"command": "verify", "p": ', encoding="utf-8")
        out = tmp_path / "out"
        assert run(["verify", "--config", str(path), "--out", str(out)]) == 2
        record = json.loads((out / "error.json").read_text(encoding="utf-8"))
        assert record["error"] == "ConfigParseError"
        assert json.loads(capsys.readouterr().out)["exit_code"] == 2

    def test_validation_error_lists_fields(self, write_config, tmp_path, capsys):
        path = write_config(command="spectra", N=20)
        assert run(["spectra", "--config", str(path), "--out", str(tmp_path / "out")]) == 2
        record = json.loads(capsys.readouterr().out)
        assert [item["field"] for item in record["fields"]] == ["p"]

    def test_missing_config_file(self, tmp_path, capsys):
        assert run(["verify", "--config", str(tmp_path / "absent.json"), "--out", str(tmp_path / "out")]) == 2

    def test_verify_passes(self, write_config, tmp_path, capsys):
        out = tmp_path / "out"
        path = write_config(command="verify", p=2, samples=50)
        assert run(["verify", "--config", str(path), "--out", str(out), "--seed", "7"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["summary"]["failed"] == []
        assert payload["summary"]["seed"] == 7
        assert (out / "verify.csv").exists()

    def test_verify_reports_matrix_block_dissipativity_as_skipped(self, write_config, tmp_path, capsys):
        out = tmp_path / "out"
        path = write_config(command="verify", p=2, samples=20)
        assert run(["verify", "--config", str(path), "--out", str(out), "--seed", "3"]) == 0
        skipped = json.loads(capsys.readouterr().out)["summary"]["skipped"]
        assert sorted(skipped) == [
            "dissipation:euler-1d-p2-MatrixBlock:dissipativity",
            "dissipation:euler-1d-p3-MatrixBlock:dissipativity",
            "dissipation:euler-2d-MatrixBlock-dir0:dissipativity",
            "dissipation:euler-2d-MatrixBlock-dir1:dissipativity",
        ]
        assert all("not symmetric" in reason for reason in skipped.values())
        table = (out / "verify.csv").read_text(encoding="utf-8")
        assert "dissipation:euler-1d-p2-MatrixBlock:dissipativity,,,," in table

    def test_same_config_and_seed_give_identical_tables(self, write_config, tmp_path, capsys):
        out = tmp_path / "out"
        path = write_config(command="verify", p=2, samples=20)
        argv = ["verify", "--config", str(path), "--out", str(out), "--seed", "11"]
        assert run(argv) == 0
        first = (out / "verify.csv").read_bytes()
        assert run(argv) == 0
        assert (out / "verify.csv").read_bytes() == first

    def test_result_tables_mirror_written_tables(self, settings, make_config, tmp_path):
        result = ExperimentService(settings).run_command(
            make_config(command="dump-dissipation", p=1, N=12, s=2), tmp_path / "out"
        )
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text(encoding="utf-8"))
        assert manifest["tables"] == result.tables
