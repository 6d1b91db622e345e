"""
Time series and labeled dataset models with validation.
"""

from collections import Counter
from enum import Enum
from functools import cached_property
from typing import Any, Iterable, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator


def _frozen_vector(v: Any) -> np.ndarray:
    array = np.array(v, dtype=np.float64)
    if array.ndim != 1:
        raise ValueError("Expected a one-dimensional vector")
    array.setflags(write=False)
    return array


class TimeSeries(BaseModel):
    """Univariate series of real samples.

    Finiteness is checked by ``validate_dataset`` so that a dataset with
    NaN values can still be built and reported on.
    """

    values: np.ndarray

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("values", mode="before")
    @classmethod
    def validate_values(cls, v: Any) -> np.ndarray:
        array = _frozen_vector(v)
        if array.shape[0] < 2:
            raise ValueError("A time series needs at least 2 samples")
        return array

    @property
    def length(self) -> int:
        return int(self.values.shape[0])

    @property
    def is_finite(self) -> bool:
        return bool(np.isfinite(self.values).all())

    def __len__(self) -> int:
        return self.length


class IssueKind(str, Enum):
    """Dataset validation issue kinds."""

    TOO_FEW_SERIES = "too_few_series"
    UNEQUAL_LENGTHS = "unequal_lengths"
    NON_FINITE = "non_finite"
    TOO_FEW_CLASSES = "too_few_classes"
    SINGLETON_CLASS = "singleton_class"


class IssueSeverity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


class ValidationIssue(BaseModel):
    kind: IssueKind
    severity: IssueSeverity = IssueSeverity.ERROR
    message: str

    model_config = ConfigDict(frozen=True)


class ValidationReport(BaseModel):
    """Outcome of ``validate_dataset``; callers decide what to do with it."""

    issues: tuple[ValidationIssue, ...] = ()

    model_config = ConfigDict(frozen=True)

    @property
    def errors(self) -> list[ValidationIssue]:
        return [i for i in self.issues if i.severity == IssueSeverity.ERROR]

    @property
    def warnings(self) -> list[ValidationIssue]:
        return [i for i in self.issues if i.severity == IssueSeverity.WARNING]

    @property
    def passed(self) -> bool:
        return not self.errors

    def has(self, kind: IssueKind) -> bool:
        return any(issue.kind == kind for issue in self.issues)


class LabeledDataset(BaseModel):
    """Series with integer class labels, in input order.

    ``label_names`` maps codes back to the text labels of the source file
    when the file did not use integer labels.
    """

    series: tuple[TimeSeries, ...]
    labels: tuple[int, ...]
    label_names: Optional[tuple[str, ...]] = None

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def validate_pairing(self) -> "LabeledDataset":
        if len(self.series) != len(self.labels):
            raise ValueError(
                f"{len(self.series)} series but {len(self.labels)} labels"
            )
        if self.label_names is not None:
            if len(set(self.label_names)) != len(self.label_names):
                raise ValueError("Label names must be distinct")
            if any(not 0 <= label < len(self.label_names) for label in self.labels):
                raise ValueError("Labels must index the label names")
        return self

    @classmethod
    def from_arrays(
        cls,
        values: Iterable[Sequence[float]],
        labels: Iterable[int],
        label_names: Optional[Sequence[str]] = None,
    ) -> "LabeledDataset":
        return cls(
            series=tuple(TimeSeries(values=row) for row in values),
            labels=tuple(int(label) for label in labels),
            label_names=tuple(label_names) if label_names is not None else None,
        )

    def label_name(self, label: int) -> str:
        if self.label_names is None:
            return str(label)
        return self.label_names[label]

    @cached_property
    def class_table(self) -> tuple[int, ...]:
        """Sorted distinct labels; position is the encoded class index."""
        return tuple(sorted(set(self.labels)))

    @cached_property
    def encoded_labels(self) -> np.ndarray:
        lookup = {label: index for index, label in enumerate(self.class_table)}
        return np.array([lookup[label] for label in self.labels], dtype=np.int64)

    @cached_property
    def values(self) -> np.ndarray:
        """``(n, m)`` matrix of the series; requires equal lengths."""
        lengths = {s.length for s in self.series}
        if len(lengths) != 1:
            raise ValueError(f"Series have unequal lengths {sorted(lengths)}")
        matrix = np.ascontiguousarray(np.vstack([s.values for s in self.series]))
        matrix.setflags(write=False)
        return matrix

    @property
    def length(self) -> int:
        return int(self.values.shape[1])

    @property
    def n_series(self) -> int:
        return len(self.series)

    def class_members(self) -> dict[int, np.ndarray]:
        """Row indices per raw label, ascending."""
        labels = np.asarray(self.labels)
        return {
            label: np.flatnonzero(labels == label) for label in self.class_table
        }

    def subset(self, indices: Iterable[int]) -> "LabeledDataset":
        rows = [int(i) for i in indices]
        return LabeledDataset(
            series=tuple(self.series[i] for i in rows),
            labels=tuple(self.labels[i] for i in rows),
            label_names=self.label_names,
        )

    def __len__(self) -> int:
        return len(self.series)


def validate_dataset(
    dataset: LabeledDataset, for_training: bool = True
) -> ValidationReport:
    """Check every dataset invariant and report all violations.

    With ``for_training=False`` the class-count requirements are skipped,
    which is what prediction inputs need.
    """
    issues: list[ValidationIssue] = []

    if for_training and len(dataset.series) < 2:
        issues.append(
            ValidationIssue(
                kind=IssueKind.TOO_FEW_SERIES,
                message=f"Need at least 2 series, got {len(dataset.series)}",
            )
        )

    lengths = sorted({s.length for s in dataset.series})
    if len(lengths) > 1:
        issues.append(
            ValidationIssue(
                kind=IssueKind.UNEQUAL_LENGTHS,
                message=f"Series have unequal lengths {lengths}",
            )
        )

    bad_rows = [i for i, s in enumerate(dataset.series) if not s.is_finite]
    if bad_rows:
        shown = ", ".join(str(i) for i in bad_rows[:10])
        issues.append(
            ValidationIssue(
                kind=IssueKind.NON_FINITE,
                message=f"Non-finite values in series {shown}"
                + (" ..." if len(bad_rows) > 10 else ""),
            )
        )

    counts = Counter(dataset.labels)
    if for_training and len(counts) < 2:
        issues.append(
            ValidationIssue(
                kind=IssueKind.TOO_FEW_CLASSES,
                message=f"Need at least 2 classes, got {len(counts)}",
            )
        )
    singletons = sorted(label for label, count in counts.items() if count == 1)
    if singletons:
        issues.append(
            ValidationIssue(
                kind=IssueKind.SINGLETON_CLASS,
                severity=IssueSeverity.WARNING,
                message=f"Classes with a single member: {singletons}",
            )
        )

    return ValidationReport(issues=tuple(issues))
