"""CSV ingestion and emission for feature matrices and label sets.

Formats:
  features:    header ``id,f0,...,f{d-1}``; ids must cover 0..N-1
  absolute:    header ``id,label``; label in {-1, 1}
  comparisons: header ``i,j,label``; 0 <= i < j, label in {-1, 1}
"""

from __future__ import annotations

import csv

import numpy as np

from .errors import DimensionMismatch, InvalidLabel, ParseError
from .model import LabeledData

_FLOAT_FMT = "%.17g"


def _read_rows(path):
    with open(path, newline="") as fh:
        yield from enumerate(csv.reader(fh), start=1)


def load_features(path) -> np.ndarray:
    rows = _read_rows(path)
    try:
        _, header = next(rows)
    except StopIteration:
        raise ParseError("empty features file", line=1) from None
    if not header or header[0] != "id":
        raise ParseError(f"expected 'id' header, got {header[:1]}", line=1)
    d = len(header) - 1
    if d < 1:
        raise ParseError("no feature columns", line=1)
    expected = ["id"] + [f"f{c}" for c in range(d)]
    if header != expected:
        raise ParseError(f"expected header {','.join(expected)}", line=1)
    entries = {}
    for lineno, row in rows:
        if len(row) != d + 1:
            raise DimensionMismatch(f"line {lineno}: expected {d + 1} columns, got {len(row)}")
        try:
            idx = int(row[0])
            values = [float(v) for v in row[1:]]
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        if not all(np.isfinite(values)):
            raise ParseError("non-finite feature value", line=lineno)
        if idx in entries:
            raise ParseError(f"duplicate id {idx}", line=lineno)
        entries[idx] = values
    n = len(entries)
    if sorted(entries) != list(range(n)):
        raise ParseError(f"ids must cover 0..{n - 1}")
    return np.array([entries[i] for i in range(n)])


def _parse_label(token, lineno) -> int:
    try:
        value = int(token)
    except ValueError:
        raise InvalidLabel(f"label {token!r} is not an integer", line=lineno) from None
    if value not in (-1, 1):
        raise InvalidLabel(f"label must be -1 or 1, got {value}", line=lineno)
    return value


def load_absolute(path, n: int) -> list[tuple[int, int]]:
    rows = _read_rows(path)
    try:
        _, header = next(rows)
    except StopIteration:
        raise ParseError("empty absolute-label file", line=1) from None
    if header != ["id", "label"]:
        raise ParseError("expected header id,label", line=1)
    out = []
    for lineno, row in rows:
        if len(row) != 2:
            raise ParseError(f"expected 2 columns, got {len(row)}", line=lineno)
        try:
            idx = int(row[0])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        if not 0 <= idx < n:
            raise DimensionMismatch(f"line {lineno}: id {idx} out of range for {n} samples")
        out.append((idx, _parse_label(row[1], lineno)))
    return out


def load_comparisons(path, n: int) -> list[tuple[tuple[int, int], int]]:
    rows = _read_rows(path)
    try:
        _, header = next(rows)
    except StopIteration:
        raise ParseError("empty comparison-label file", line=1) from None
    if header != ["i", "j", "label"]:
        raise ParseError("expected header i,j,label", line=1)
    out = []
    for lineno, row in rows:
        if len(row) != 3:
            raise ParseError(f"expected 3 columns, got {len(row)}", line=lineno)
        try:
            i, j = int(row[0]), int(row[1])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        if not (0 <= i < j < n):
            raise DimensionMismatch(f"line {lineno}: pair ({i}, {j}) invalid for {n} samples")
        out.append(((i, j), _parse_label(row[2], lineno)))
    return out


def load_dataset(features_csv, absolute_csv=None, comparisons_csv=None):
    """Parse a feature matrix with optional label files."""
    x = load_features(features_csv)
    n = x.shape[0]
    data = LabeledData()
    if absolute_csv is not None:
        data.absolute = load_absolute(absolute_csv, n)
    if comparisons_csv is not None:
        data.comparisons = load_comparisons(comparisons_csv, n)
    return x, data


def write_features(path, x: np.ndarray) -> None:
    x = np.asarray(x)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id"] + [f"f{c}" for c in range(x.shape[1])])
        for i, row in enumerate(x):
            writer.writerow([i] + [_FLOAT_FMT % v for v in row])


def write_absolute(path, labels) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "label"])
        for idx, y in labels:
            writer.writerow([idx, y])


def write_comparisons(path, labels) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["i", "j", "label"])
        for (i, j), y in labels:
            writer.writerow([i, j, y])
