"""
Explanations from ridge weights: rankings, placements and weight summaries.

Weights refer to standardized features; exports carry each feature's mean
and std so values can be read in raw units.
"""

import csv
import io
import json
import logging
from collections import defaultdict
from typing import Any, Iterable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..exceptions import DimensionMismatchError, UnknownClassError
from ..models.features import FEATURE_ORDER, FeatureType
from ..models.ridge import RidgeModel
from ..models.series import LabeledDataset
from ..models.shapelet import DilatedShapelet, ShapeletBank
from .distance import DEGENERATE_STD, distance_vector, extract_features

logger = logging.getLogger(__name__)

GROUPINGS = ("feature", "dilation", "length", "normalized")
RECORD_COLUMNS = (
    "shapelet",
    "feature",
    "weight",
    "abs_weight",
    "length",
    "dilation",
    "normalized",
    "lambda",
    "feature_mean",
    "feature_std",
)


class RankedFeature(BaseModel):
    shapelet: int
    feature: FeatureType
    weight: float
    abs_weight: float
    length: int
    dilation: int
    normalized: bool
    threshold: float
    feature_mean: float
    feature_std: float

    model_config = ConfigDict(frozen=True)

    def to_record(self) -> dict[str, Any]:
        return {
            "shapelet": self.shapelet,
            "feature": self.feature.value,
            "weight": self.weight,
            "abs_weight": self.abs_weight,
            "length": self.length,
            "dilation": self.dilation,
            "normalized": self.normalized,
            "lambda": self.threshold,
            "feature_mean": self.feature_mean,
            "feature_std": self.feature_std,
        }


class Placement(BaseModel):
    """Best match of a shapelet on one series, ready to draw."""

    start: int
    positions: tuple[int, ...]
    values: tuple[float, ...]
    aligned_values: tuple[float, ...]
    min_distance: float
    normalized: bool
    window_mean: Optional[float] = None
    window_std: Optional[float] = None

    model_config = ConfigDict(frozen=True)


class GroupSummary(BaseModel):
    grouping: str
    key: str
    class_id: int
    count: int
    weights: tuple[float, ...]
    mean: float
    abs_mean: float
    q1: float
    median: float
    q3: float

    model_config = ConfigDict(frozen=True)


def _check_compatible(model: RidgeModel, bank: ShapeletBank) -> None:
    if model.n_features != bank.n_features:
        raise DimensionMismatchError(
            f"Model has {model.n_features} features, bank produces {bank.n_features}"
        )


def _class_row(model: RidgeModel, class_id: int) -> int:
    row = model.class_index(class_id)
    if row is None:
        raise UnknownClassError(
            f"Unknown class {class_id}; known classes are {list(model.class_table)}"
        )
    return row


def rank_shapelets(
    model: RidgeModel, bank: ShapeletBank, class_id: int
) -> list[RankedFeature]:
    """Every feature of the class by descending weight, column order on ties."""
    _check_compatible(model, bank)
    weights = model.weights[_class_row(model, class_id)]
    order = np.argsort(-weights, kind="stable")
    ranked = []
    for column in order:
        k, slot = divmod(int(column), 3)
        shapelet = bank.shapelets[k]
        ranked.append(
            RankedFeature(
                shapelet=k,
                feature=FEATURE_ORDER[slot],
                weight=float(weights[column]),
                abs_weight=float(abs(weights[column])),
                length=shapelet.length,
                dilation=shapelet.dilation,
                normalized=shapelet.normalized,
                threshold=shapelet.threshold,
                feature_mean=float(model.feature_means[column]),
                feature_std=float(model.feature_stds[column]),
            )
        )
    return ranked


def top_shapelets(ranking: Iterable[RankedFeature], k: int) -> list[int]:
    """First ``k`` distinct shapelet indices in ranking order."""
    seen: list[int] = []
    for entry in ranking:
        if entry.shapelet not in seen:
            seen.append(entry.shapelet)
            if len(seen) == k:
                break
    return seen


def locate_on_series(shapelet: DilatedShapelet, series: Any) -> Placement:
    """Where the shapelet matches best, with values mapped to the series scale."""
    profile = distance_vector(shapelet, series)
    start = int(np.argmin(profile))
    x = series.values if hasattr(series, "values") else np.asarray(series)
    positions = tuple(start + j * shapelet.dilation for j in range(shapelet.length))
    values = tuple(float(v) for v in shapelet.values)
    if not shapelet.normalized:
        return Placement(
            start=start,
            positions=positions,
            values=values,
            aligned_values=values,
            min_distance=float(profile[start]),
            normalized=False,
        )
    window = x[list(positions)]
    mean = float(window.mean())
    std = float(window.std())
    scale = std if std >= DEGENERATE_STD else 0.0
    return Placement(
        start=start,
        positions=positions,
        values=values,
        aligned_values=tuple(float(v * scale + mean) for v in shapelet.values),
        min_distance=float(profile[start]),
        normalized=True,
        window_mean=mean,
        window_std=std,
    )


def _group_key(grouping: str, shapelet: DilatedShapelet, feature: FeatureType) -> str:
    if grouping == "feature":
        return feature.value
    if grouping == "dilation":
        return str(shapelet.dilation)
    if grouping == "length":
        return str(shapelet.length)
    return "true" if shapelet.normalized else "false"


def _sort_key(grouping: str, key: str) -> tuple[int, str]:
    if grouping in ("dilation", "length"):
        return int(key), key
    if grouping == "feature":
        return [f.value for f in FEATURE_ORDER].index(key), key
    return 0, key


def global_summary(
    model: RidgeModel, bank: ShapeletBank, class_id: Optional[int] = None
) -> list[GroupSummary]:
    """Weight distributions per feature type, dilation, length and normalization.

    Without ``class_id`` one set of tables is produced per class.
    """
    _check_compatible(model, bank)
    class_ids = model.class_table if class_id is None else (class_id,)
    summaries = []
    for cid in class_ids:
        weights = model.weights[_class_row(model, cid)]
        for grouping in GROUPINGS:
            groups: dict[str, list[float]] = defaultdict(list)
            for column, weight in enumerate(weights):
                k, slot = divmod(column, 3)
                key = _group_key(grouping, bank.shapelets[k], FEATURE_ORDER[slot])
                groups[key].append(float(weight))
            for key in sorted(groups, key=lambda g: _sort_key(grouping, g)):
                values = np.asarray(groups[key])
                q1, median, q3 = np.percentile(values, [25, 50, 75])
                summaries.append(
                    GroupSummary(
                        grouping=grouping,
                        key=key,
                        class_id=cid,
                        count=len(values),
                        weights=tuple(groups[key]),
                        mean=float(values.mean()),
                        abs_mean=float(np.abs(values).mean()),
                        q1=float(q1),
                        median=float(median),
                        q3=float(q3),
                    )
                )
    return summaries


def feature_distribution(
    bank: ShapeletBank, shapelet_index: int, dataset: LabeledDataset
) -> dict[str, Any]:
    """(min, argmin, SO) of one shapelet on every series, grouped by class."""
    shapelet = bank.shapelets[shapelet_index]
    per_class: dict[int, dict[str, list[float]]] = {
        label: {f.value: [] for f in FEATURE_ORDER} for label in dataset.class_table
    }
    for series, label in zip(dataset.series, dataset.labels):
        triple = extract_features(shapelet, series)
        per_class[label][FeatureType.MIN.value].append(triple.min_dist)
        per_class[label][FeatureType.ARGMIN.value].append(float(triple.argmin_idx))
        per_class[label][FeatureType.SO.value].append(float(triple.occ_count))
    return {
        "shapelet": shapelet_index,
        "classes": [
            {
                "class": label,
                "count": len(values[FeatureType.MIN.value]),
                **{
                    name: {"values": column, "mean": float(np.mean(column))}
                    for name, column in values.items()
                },
            }
            for label, values in per_class.items()
        ],
    }


def dumps_json(payload: Any) -> str:
    """Canonical JSON: sorted keys, shortest round-trip floats."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def ranking_payload(class_id: int, ranking: list[RankedFeature]) -> dict[str, Any]:
    return {"class": class_id, "entries": [entry.to_record() for entry in ranking]}


def ranking_csv(class_id: int, ranking: list[RankedFeature]) -> str:
    buffer = io.StringIO()
    columns = ["class", *RECORD_COLUMNS]
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for entry in ranking:
        record = entry.to_record()
        writer.writerow([class_id, *(record[c] for c in columns[1:])])
    return buffer.getvalue()


def summary_csv(summaries: list[GroupSummary]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["class", "grouping", "key", "count", "mean", "abs_mean", "q1", "median", "q3"]
    )
    for s in summaries:
        writer.writerow(
            [s.class_id, s.grouping, s.key, s.count, s.mean, s.abs_mean, s.q1, s.median, s.q3]
        )
    return buffer.getvalue()
