import json

import numpy as np
import pytest

from sbpdiss.utils.output_writer import OutputWriter, config_hash


@pytest.fixture
def writer(tmp_path):
    return OutputWriter(tmp_path, {"command": "spectra", "p": 3, "eps": "large"})


def test_config_hash_ignores_key_order():
    assert config_hash({"a": 1, "b": [1.5, 2]}) == config_hash({"b": [1.5, 2], "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})


def test_csv_layout(writer):
    path = writer.write_csv("table.csv", [{"name": "x", "value": 0.1, "passed": True, "count": 3, "missing": None}])
    raw = path.read_bytes().decode("utf-8")
    lines = raw.split("\r\n")
    assert lines[0] == f"# config_hash={writer.config_hash}"
    assert lines[1] == "name,value,passed,count,missing"
    assert lines[2] == "x,0.10000000000000001,true,3,"
    assert "\n" not in raw.replace("\r\n", "")


def test_complex_values_are_split(writer):
    path = writer.write_csv("eigs.csv", [{"index": 0, "lambda": complex(-0.5, 2.0)}])
    header, row = path.read_text(encoding="utf-8").splitlines()[1:3]
    assert header == "index,lambda_re,lambda_im"
    assert row == "0,-0.5,2"


def test_columns_are_the_union_of_row_keys(writer):
    path = writer.write_csv("union.csv", [{"a": 1}, {"a": 2, "b": 3}])
    assert path.read_text(encoding="utf-8").splitlines()[1:] == ["a,b", "1,", "2,3"]


def test_matrix_header_and_round_trip(writer):
    matrix = np.array([[1.0, -2.0, 1.0 / 3.0], [0.0, 4.5, 1e-20]])
    path = writer.write_matrix("A.txt", matrix)
    assert path.read_text(encoding="utf-8").splitlines()[0] == "# 2 3"
    np.testing.assert_array_equal(np.loadtxt(path, ndmin=2), matrix)


def test_manifest_lists_written_files(writer, tmp_path):
    writer.write_csv("table.csv", [{"a": 1}])
    writer.write_matrix("nested/A.txt", np.eye(2))
    writer.write_manifest("spectra", {"max_real_part": -1e-3})
    manifest = json.loads((tmp_path / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["files"] == ["table.csv", "nested/A.txt"]
    assert manifest["config_hash"] == writer.config_hash
    assert manifest["config"]["eps"] == "large"
    assert manifest["status"] == "ok"


def test_failed_manifest_records_error(writer, tmp_path):
    writer.write_manifest("spectra", {}, status="failed", exit_code=3, error={"error": "InvariantViolation"})
    manifest = json.loads((tmp_path / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["exit_code"] == 3
    assert manifest["error"]["error"] == "InvariantViolation"


def test_manifest_mirrors_csv_values_bitwise(writer, tmp_path, rng):
    values = [0.1, 1.0 / 3.0, 1e-300, -0.0, *rng.standard_normal(20).tolist()]
    rows = [{"index": k, "value": value, "lambda": complex(value, -value)} for k, value in enumerate(values)]
    path = writer.write_csv("mirror.csv", rows)
    writer.write_manifest("spectra", {})

    table = json.loads((tmp_path / "manifest.json").read_text(encoding="utf-8"))["tables"]["mirror.csv"]
    assert table["columns"] == ["index", "value", "lambda_re", "lambda_im"]
    csv_rows = [line.split(",") for line in path.read_text(encoding="utf-8").splitlines()[2:]]
    from_csv = np.array([[float(cell) for cell in row[1:]] for row in csv_rows])
    from_json = np.array([row[1:] for row in table["rows"]], dtype=float)
    np.testing.assert_array_equal(from_csv.view(np.uint64), from_json.view(np.uint64))
    assert [row[0] for row in table["rows"]] == list(range(len(values)))


def test_mirror_keeps_missing_and_boolean_cells(writer):
    writer.write_csv("flags.csv", [{"name": "a", "passed": True, "skipped": None}])
    assert writer.tables["flags.csv"]["rows"] == [["a", True, None]]
