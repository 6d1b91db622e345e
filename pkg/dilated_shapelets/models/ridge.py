"""
Ridge classifier model and regularization grid.
"""

from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config import settings


class AlphaGrid(BaseModel):
    """Candidate regularization strengths, strictly increasing."""

    values: tuple[float, ...]

    model_config = ConfigDict(frozen=True)

    @field_validator("values", mode="before")
    @classmethod
    def validate_values(cls, v: Any) -> tuple[float, ...]:
        values = tuple(float(alpha) for alpha in v)
        if not values:
            raise ValueError("Alpha grid must not be empty")
        if any(not np.isfinite(alpha) or alpha <= 0 for alpha in values):
            raise ValueError("Alpha values must be finite and > 0")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("Alpha grid must be strictly increasing")
        return values

    @classmethod
    def default(cls) -> "AlphaGrid":
        return cls.logspace(
            settings.ridge.alpha_min, settings.ridge.alpha_max, settings.ridge.n_alphas
        )

    @classmethod
    def logspace(cls, low: float, high: float, count: int) -> "AlphaGrid":
        return cls(values=np.logspace(np.log10(low), np.log10(high), count).tolist())


class RidgeModel(BaseModel):
    """One-vs-rest ridge weights over standardized features."""

    weights: np.ndarray
    intercepts: np.ndarray
    feature_means: np.ndarray
    feature_stds: np.ndarray
    constant: np.ndarray
    alpha: float = Field(gt=0)
    class_table: tuple[int, ...]
    alpha_grid: Optional[AlphaGrid] = None
    alpha_scores: tuple[float, ...] = ()
    loo_accuracy: Optional[float] = None
    label_names: Optional[tuple[str, ...]] = None

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator(
        "weights", "intercepts", "feature_means", "feature_stds", mode="before"
    )
    @classmethod
    def validate_arrays(cls, v: Any) -> np.ndarray:
        array = np.array(v, dtype=np.float64)
        if not np.isfinite(array).all():
            raise ValueError("Model arrays must be finite")
        array.setflags(write=False)
        return array

    @field_validator("constant", mode="before")
    @classmethod
    def validate_constant(cls, v: Any) -> np.ndarray:
        array = np.array(v, dtype=np.bool_)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def validate_shapes(self) -> "RidgeModel":
        n_classes = len(self.class_table)
        if n_classes < 2:
            raise ValueError("A ridge model needs at least 2 classes")
        if self.weights.ndim != 2 or self.weights.shape[0] != n_classes:
            raise ValueError("One weight vector per class is required")
        n_features = self.weights.shape[1]
        for name in ("feature_means", "feature_stds", "constant"):
            if getattr(self, name).shape != (n_features,):
                raise ValueError(f"{name} must have {n_features} entries")
        if self.intercepts.shape != (n_classes,):
            raise ValueError("One intercept per class is required")
        if np.any(self.weights[:, self.constant] != 0):
            raise ValueError("Constant features must carry zero weight")
        return self

    @property
    def n_features(self) -> int:
        return int(self.weights.shape[1])

    def class_index(self, class_id: int) -> Optional[int]:
        try:
            return self.class_table.index(class_id)
        except ValueError:
            return None

    def label_name(self, class_id: int) -> str:
        """Text label of a class code, or the code itself for integer labels."""
        if self.label_names is None or not 0 <= class_id < len(self.label_names):
            return str(class_id)
        return self.label_names[class_id]

    def class_for_name(self, name: str) -> Optional[int]:
        """Class code of a text label; integer strings are read as codes."""
        if self.label_names is not None and name in self.label_names:
            return self.label_names.index(name)
        try:
            return int(name)
        except ValueError:
            return None
