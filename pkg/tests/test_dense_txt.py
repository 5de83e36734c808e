import numpy as np
import pytest

from mfpt import fixture_raw, load_dense, random_sparse, save_dense
from mfpt.exceptions import MatrixFormatError


def test_roundtrip_bitwise(tmp_path):
    matrix = random_sparse(12, 0.4, seed=8).entries
    path = tmp_path / "m.txt"
    save_dense(path, matrix)
    assert np.array_equal(load_dense(path), matrix)


def test_fixture_raw_roundtrip(tmp_path):
    path = tmp_path / "p4.txt"
    save_dense(path, fixture_raw("P4"))
    assert np.array_equal(load_dense(path), fixture_raw("P4"))


def test_format_layout(tmp_path):
    path = tmp_path / "m.txt"
    save_dense(path, [[0.5, 0.5], [0.25, 0.75]])
    lines = path.read_text().splitlines()
    assert lines[0] == "2"
    assert len(lines) == 3
    assert [float(v) for v in lines[1].split()] == [0.5, 0.5]


def test_empty_file(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("")
    with pytest.raises(MatrixFormatError) as exc:
        load_dense(path)
    assert exc.value.line == 1


def test_bad_size_line(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("two\n0.5 0.5\n0.5 0.5\n")
    with pytest.raises(MatrixFormatError) as exc:
        load_dense(path)
    assert exc.value.line == 1


def test_short_row_reports_line(tmp_path):
    path = tmp_path / "short.txt"
    path.write_text("2\n0.5 0.5\n0.5\n")
    with pytest.raises(MatrixFormatError) as exc:
        load_dense(path)
    assert exc.value.line == 3


def test_non_numeric_reports_line(tmp_path):
    path = tmp_path / "nan.txt"
    path.write_text("2\n0.5 oops\n0.5 0.5\n")
    with pytest.raises(MatrixFormatError) as exc:
        load_dense(path)
    assert exc.value.line == 2


def test_truncated_file(tmp_path):
    path = tmp_path / "trunc.txt"
    path.write_text("3\n0.5 0.25 0.25\n")
    with pytest.raises(MatrixFormatError):
        load_dense(path)
