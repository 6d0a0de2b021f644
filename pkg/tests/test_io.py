import numpy as np
import pytest

from pairdesign import data_io
from pairdesign.errors import DimensionMismatch, InvalidLabel, ParseError


def test_features_round_trip(tmp_path, rng):
    x = rng.normal(size=(12, 5))
    path = tmp_path / "features.csv"
    data_io.write_features(path, x)
    loaded = data_io.load_features(path)
    assert np.array_equal(loaded, x)  # %.17g round-trips float64 exactly


def test_absolute_round_trip(tmp_path):
    labels = [(0, 1), (3, -1), (7, 1)]
    path = tmp_path / "absolute.csv"
    data_io.write_absolute(path, labels)
    assert data_io.load_absolute(path, n=10) == labels


def test_comparisons_round_trip(tmp_path):
    labels = [((0, 1), 1), ((2, 9), -1)]
    path = tmp_path / "comparisons.csv"
    data_io.write_comparisons(path, labels)
    assert data_io.load_comparisons(path, n=10) == labels


def test_load_dataset(tmp_path, rng):
    x = rng.normal(size=(6, 3))
    data_io.write_features(tmp_path / "x.csv", x)
    data_io.write_absolute(tmp_path / "a.csv", [(1, -1)])
    data_io.write_comparisons(tmp_path / "c.csv", [((0, 5), 1)])
    loaded, data = data_io.load_dataset(
        tmp_path / "x.csv", tmp_path / "a.csv", tmp_path / "c.csv"
    )
    assert np.array_equal(loaded, x)
    assert data.absolute == [(1, -1)]
    assert data.comparisons == [((0, 5), 1)]


def _write(path, text):
    path.write_text(text)
    return path


def test_features_errors(tmp_path):
    with pytest.raises(ParseError):
        data_io.load_features(_write(tmp_path / "empty.csv", ""))
    with pytest.raises(ParseError):
        data_io.load_features(_write(tmp_path / "h.csv", "idx,f0\n0,1.0\n"))
    with pytest.raises(ParseError):
        data_io.load_features(_write(tmp_path / "h2.csv", "id,g0\n0,1.0\n"))
    with pytest.raises(DimensionMismatch):
        data_io.load_features(_write(tmp_path / "w.csv", "id,f0,f1\n0,1.0\n"))
    err = None
    try:
        data_io.load_features(_write(tmp_path / "nan.csv", "id,f0\n0,nan\n"))
    except ParseError as exc:
        err = exc
    assert err is not None and err.line == 2
    with pytest.raises(ParseError):
        data_io.load_features(_write(tmp_path / "dup.csv", "id,f0\n0,1.0\n0,2.0\n"))
    with pytest.raises(ParseError):
        data_io.load_features(_write(tmp_path / "gap.csv", "id,f0\n0,1.0\n2,2.0\n"))
    with pytest.raises(ParseError):
        data_io.load_features(_write(tmp_path / "bad.csv", "id,f0\n0,abc\n"))


def test_absolute_errors(tmp_path):
    with pytest.raises(ParseError):
        data_io.load_absolute(_write(tmp_path / "h.csv", "id,y\n0,1\n"), n=5)
    with pytest.raises(InvalidLabel):
        data_io.load_absolute(_write(tmp_path / "l.csv", "id,label\n0,2\n"), n=5)
    with pytest.raises(InvalidLabel):
        data_io.load_absolute(_write(tmp_path / "l2.csv", "id,label\n0,up\n"), n=5)
    with pytest.raises(DimensionMismatch):
        data_io.load_absolute(_write(tmp_path / "r.csv", "id,label\n9,1\n"), n=5)


def test_comparison_errors(tmp_path):
    with pytest.raises(ParseError):
        data_io.load_comparisons(_write(tmp_path / "h.csv", "a,b,label\n0,1,1\n"), n=5)
    with pytest.raises(DimensionMismatch):
        data_io.load_comparisons(_write(tmp_path / "o.csv", "i,j,label\n1,0,1\n"), n=5)
    with pytest.raises(DimensionMismatch):
        data_io.load_comparisons(_write(tmp_path / "s.csv", "i,j,label\n2,2,1\n"), n=5)
    with pytest.raises(DimensionMismatch):
        data_io.load_comparisons(_write(tmp_path / "r.csv", "i,j,label\n0,7,1\n"), n=5)
    with pytest.raises(InvalidLabel):
        data_io.load_comparisons(_write(tmp_path / "l.csv", "i,j,label\n0,1,0\n"), n=5)


def test_invalid_label_is_parse_error():
    assert issubclass(InvalidLabel, ParseError)
