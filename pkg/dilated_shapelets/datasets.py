"""
UCR-style TSV datasets, synthetic datasets and stratified resampling.

A TSV row is the class label followed by the series values, tab separated,
no header. Files ending in ``.gz`` are read and written through gzip.
"""

import gzip
import logging
from enum import Enum
from pathlib import Path
from typing import IO, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .exceptions import ConfigError, DataError, DataValidationError, ParseError
from .models.series import (
    IssueKind,
    LabeledDataset,
    TimeSeries,
    ValidationIssue,
    ValidationReport,
    validate_dataset,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _open(path: PathLike, mode: str) -> IO[str]:
    if str(path).endswith(".gz"):
        return gzip.open(path, mode + "t", encoding="utf-8")  # type: ignore[return-value]
    return open(path, mode, encoding="utf-8")


def _parse_label(token: str) -> Union[int, str]:
    try:
        return int(token)
    except ValueError:
        pass
    try:
        number = float(token)
    except ValueError:
        return token
    if number.is_integer():
        return int(number)
    return token


def _parse_rows(path: PathLike, labeled: bool) -> tuple[list[list[float]], list[str]]:
    rows: list[list[float]] = []
    tokens: list[str] = []
    width: Optional[int] = None
    with _open(path, "r") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            cells = line.split("\t")
            if labeled:
                tokens.append(cells[0].strip())
                cells = cells[1:]
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise ParseError(
                    f"expected {width} values, found {len(cells)}", line_number
                )
            values = []
            for column, cell in enumerate(cells, start=2 if labeled else 1):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ParseError(f"not a number: {cell!r}", line_number, column)
            if len(values) < 2:
                raise ParseError("a series needs at least 2 values", line_number)
            rows.append(values)
    return rows, tokens


def _encode_labels(
    tokens: list[str], label_names: Optional[Sequence[str]] = None
) -> tuple[list[int], Optional[tuple[str, ...]]]:
    """Integer codes plus the table mapping codes back to text labels.

    Integer labels are kept as they are and need no table. Text labels are
    numbered in sorted order of the distinct tokens; with ``label_names``
    (the training table) known tokens keep their codes and unseen tokens
    are appended after them.
    """
    if label_names is None:
        parsed = [_parse_label(token) for token in tokens]
        if all(isinstance(label, int) for label in parsed):
            return [int(label) for label in parsed], None
        table = sorted(set(tokens))
        logger.info(f"Mapped label tokens to integers: {dict(zip(table, range(len(table))))}")
    else:
        table = list(label_names)
        unseen = sorted(set(tokens) - set(table))
        if unseen:
            logger.warning(f"Labels not in the training table: {unseen}")
            table.extend(unseen)
    lookup = {token: code for code, token in enumerate(table)}
    return [lookup[token] for token in tokens], tuple(table)


def _require_structure(dataset: LabeledDataset, for_training: bool) -> LabeledDataset:
    report = validate_dataset(dataset, for_training=for_training)
    if not report.passed:
        raise DataValidationError(report)
    return dataset


def load_tsv(
    path: PathLike,
    for_training: bool = False,
    label_names: Optional[Sequence[str]] = None,
) -> LabeledDataset:
    """Read a labeled dataset; equal lengths and finite values are required.

    Pass the training set's ``label_names`` when reading test or prediction
    files so text labels get the same codes as in training.
    """
    rows, tokens = _parse_rows(path, labeled=True)
    if not rows:
        raise DataValidationError(
            ValidationReport(
                issues=(
                    ValidationIssue(
                        kind=IssueKind.TOO_FEW_SERIES, message=f"{path} holds no series"
                    ),
                )
            )
        )
    labels, names = _encode_labels(tokens, label_names)
    dataset = LabeledDataset.from_arrays(rows, labels, names)
    logger.info(f"Loaded {dataset.n_series} series of length {len(rows[0])} from {path}")
    return _require_structure(dataset, for_training)


def load_unlabeled_tsv(path: PathLike) -> tuple[TimeSeries, ...]:
    """Read series from a file without a label column."""
    rows, _ = _parse_rows(path, labeled=False)
    if not rows:
        raise DataError(f"{path} holds no series")
    series = tuple(TimeSeries(values=row) for row in rows)
    bad = [i for i, s in enumerate(series) if not s.is_finite]
    if bad:
        raise ParseError(f"non-finite values in series {bad[0]}", bad[0] + 1)
    return series


def save_tsv(dataset: LabeledDataset, path: PathLike) -> None:
    with _open(path, "w") as handle:
        for series, label in zip(dataset.series, dataset.labels):
            handle.write(
                "\t".join([dataset.label_name(label), *(repr(float(v)) for v in series.values)])
                + "\n"
            )


class SyntheticRegime(str, Enum):
    """How the two synthetic classes differ."""

    PRESENCE = "presence"
    LOCATION = "location"
    SCALE = "scale"
    OCCURRENCE = "occurrence"


class SyntheticSpec(BaseModel):
    n_per_class: int = Field(default=50, gt=0)
    length: int = Field(default=256, ge=2)
    pattern_length: int = Field(default=11, ge=2)
    pattern_dilation: int = Field(default=4, ge=1)
    noise_std: float = Field(default=0.2, ge=0.0)
    seed: int = Field(default=0, ge=0)
    regime: SyntheticRegime = SyntheticRegime.PRESENCE

    model_config = ConfigDict(frozen=True)

    @property
    def span(self) -> int:
        return (self.pattern_length - 1) * self.pattern_dilation + 1

    @model_validator(mode="after")
    def validate_fit(self) -> "SyntheticSpec":
        if self.span > self.length:
            raise ValueError(
                f"Pattern spans {self.span} samples, series have {self.length}"
            )
        needs_two = self.regime in (SyntheticRegime.LOCATION, SyntheticRegime.OCCURRENCE)
        if needs_two and 2 * self.span > self.length:
            raise ValueError(
                f"Regime {self.regime.value} needs two pattern spans "
                f"({2 * self.span}) within {self.length} samples"
            )
        return self


# Amplitude of the injected pattern relative to unit-variance draws
PATTERN_SCALE = 2.0


def _inject(row: np.ndarray, pattern: np.ndarray, start: int, dilation: int) -> None:
    row[start : start + (len(pattern) - 1) * dilation + 1 : dilation] = pattern


def make_synthetic(spec: SyntheticSpec) -> LabeledDataset:
    """Two-class Gaussian-noise dataset; class 0 rows first, then class 1."""
    rng = np.random.default_rng(spec.seed)
    pattern = PATTERN_SCALE * rng.standard_normal(spec.pattern_length)
    m, span, d = spec.length, spec.span, spec.pattern_dilation
    half = m // 2
    rows = []
    labels = []
    for label in (0, 1):
        for _ in range(spec.n_per_class):
            row = rng.normal(0.0, spec.noise_std, m) if spec.noise_std else np.zeros(m)
            if spec.regime == SyntheticRegime.PRESENCE:
                if label == 1:
                    _inject(row, pattern, int(rng.integers(m - span + 1)), d)
            elif spec.regime == SyntheticRegime.SCALE:
                amplitude = 3.0 if label == 1 else 1.0
                _inject(row, amplitude * pattern, int(rng.integers(m - span + 1)), d)
            elif spec.regime == SyntheticRegime.LOCATION:
                if label == 0:
                    start = int(rng.integers(half - span + 1))
                else:
                    start = half + int(rng.integers(m - half - span + 1))
                _inject(row, pattern, start, d)
            else:
                first = int(rng.integers(m - 2 * span + 1))
                _inject(row, pattern, first, d)
                if label == 1:
                    second = first + span + int(rng.integers(m - first - 2 * span + 1))
                    _inject(row, pattern, second, d)
            rows.append(row)
            labels.append(label)
    return LabeledDataset.from_arrays(rows, labels)


def make_synthetic_split(
    spec: SyntheticSpec, n_test_per_class: Optional[int] = None
) -> tuple[LabeledDataset, LabeledDataset]:
    """Train and test sets sharing one pattern.

    Per class, the first ``spec.n_per_class`` rows go to train and the next
    ``n_test_per_class`` (default: as many) to test.
    """
    n_test = spec.n_per_class if n_test_per_class is None else n_test_per_class
    if n_test < 1:
        raise ConfigError(f"n_test_per_class must be >= 1, got {n_test}")
    per_class = spec.n_per_class + n_test
    full = make_synthetic(spec.model_copy(update={"n_per_class": per_class}))
    train_rows = [c * per_class + i for c in (0, 1) for i in range(spec.n_per_class)]
    test_rows = [
        c * per_class + i for c in (0, 1) for i in range(spec.n_per_class, per_class)
    ]
    return full.subset(train_rows), full.subset(test_rows)


def stratified_resample(
    dataset: LabeledDataset, train_fraction: float, seed: int
) -> tuple[LabeledDataset, LabeledDataset]:
    """Per-class proportional split; both parts keep the input row order."""
    if not 0.0 < train_fraction < 1.0:
        raise ConfigError(f"train_fraction must be in (0, 1), got {train_fraction}")
    rng = np.random.default_rng(seed)
    train_rows: list[int] = []
    test_rows: list[int] = []
    for label, members in dataset.class_members().items():
        if len(members) < 2:
            raise ConfigError(
                f"Class {label} has {len(members)} member(s); "
                "it cannot contribute to both splits"
            )
        n_train = int(round(train_fraction * len(members)))
        n_train = min(max(n_train, 1), len(members) - 1)
        shuffled = rng.permutation(members)
        train_rows.extend(int(i) for i in shuffled[:n_train])
        test_rows.extend(int(i) for i in shuffled[n_train:])
    return dataset.subset(sorted(train_rows)), dataset.subset(sorted(test_rows))


def pool(*datasets: LabeledDataset) -> LabeledDataset:
    """Concatenate datasets; their label tables must extend one another."""
    tables = [d.label_names for d in datasets if d.label_names is not None]
    names = max(tables, key=len) if tables else None
    if names is not None:
        if len(tables) != len(datasets):
            raise DataError("Cannot pool text-labeled and integer-labeled datasets")
        if any(table != names[: len(table)] for table in tables):
            raise DataError("Datasets encode their labels with different tables")
    return LabeledDataset(
        series=tuple(s for d in datasets for s in d.series),
        labels=tuple(label for d in datasets for label in d.labels),
        label_names=names,
    )
