"""
Feature matrix produced by the shapelet transform.
"""

import csv
from enum import Enum
from typing import Any, TextIO

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator


class FeatureType(str, Enum):
    """Feature extracted from one distance vector, in column order."""

    MIN = "min"
    ARGMIN = "argmin"
    SO = "so"


FEATURE_ORDER = (FeatureType.MIN, FeatureType.ARGMIN, FeatureType.SO)


def column_index(shapelet: int, feature: FeatureType) -> int:
    return 3 * shapelet + FEATURE_ORDER.index(feature)


def column_names(n_shapelets: int) -> list[str]:
    return [
        f"s{k}_{feature.value}" for k in range(n_shapelets) for feature in FEATURE_ORDER
    ]


class FeatureMatrix(BaseModel):
    """``(n_series, 3 * n_shapelets)`` matrix of (min, argmin, SO) triples."""

    data: np.ndarray

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("data", mode="before")
    @classmethod
    def validate_data(cls, v: Any) -> np.ndarray:
        array = np.array(v, dtype=np.float64)
        if array.ndim != 2 or array.shape[1] % 3 != 0:
            raise ValueError("Feature matrix must be 2-D with 3 columns per shapelet")
        array.setflags(write=False)
        return array

    @property
    def rows(self) -> int:
        return int(self.data.shape[0])

    @property
    def cols(self) -> int:
        return int(self.data.shape[1])

    @property
    def n_shapelets(self) -> int:
        return self.cols // 3

    def column(self, shapelet: int, feature: FeatureType) -> np.ndarray:
        return self.data[:, column_index(shapelet, feature)]

    def write_csv(self, stream: TextIO, header: bool = True) -> None:
        """Stream rows as CSV; argmin and SO are written as integers."""
        writer = csv.writer(stream, lineterminator="\n")
        if header:
            writer.writerow(column_names(self.n_shapelets))
        for row in self.data:
            writer.writerow(
                [
                    repr(float(value)) if j % 3 == 0 else str(int(value))
                    for j, value in enumerate(row)
                ]
            )
