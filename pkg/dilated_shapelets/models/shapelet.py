"""
Dilated shapelet, generation configuration and shapelet bank models.
"""

from functools import cached_property
from typing import Any, NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config import settings

# Tolerance on the moments of a z-normalized shapelet
NORMALIZED_TOLERANCE = 1e-9


class GenerationConfig(BaseModel):
    """Parameters of the randomized bank generation."""

    n_shapelets: int = Field(default_factory=lambda: settings.generation.n_shapelets, gt=0)
    lengths: tuple[int, ...] = Field(
        default_factory=lambda: tuple(settings.generation.lengths)
    )
    p_norm: float = Field(default_factory=lambda: settings.generation.p_norm, ge=0, le=1)
    p1: float = Field(default_factory=lambda: settings.generation.p1, ge=0, le=100)
    p2: float = Field(default_factory=lambda: settings.generation.p2, ge=0, le=100)

    model_config = ConfigDict(frozen=True)

    @field_validator("lengths", mode="before")
    @classmethod
    def validate_lengths(cls, v: Any) -> tuple[int, ...]:
        lengths = tuple(sorted({int(length) for length in v}))
        if not lengths:
            raise ValueError("At least one shapelet length is required")
        if lengths[0] < 2:
            raise ValueError("Shapelet lengths must be >= 2")
        return lengths

    @model_validator(mode="after")
    def validate_percentiles(self) -> "GenerationConfig":
        if self.p1 > self.p2:
            raise ValueError(f"p1 ({self.p1}) must not exceed p2 ({self.p2})")
        return self


class DilatedShapelet(BaseModel):
    """Shapelet values compared at a fixed dilation, with occurrence threshold."""

    values: np.ndarray
    dilation: int = Field(ge=1)
    threshold: float = Field(ge=0.0, alias="lambda")
    normalized: bool = False

    model_config = ConfigDict(
        frozen=True, arbitrary_types_allowed=True, populate_by_name=True
    )

    @field_validator("values", mode="before")
    @classmethod
    def validate_values(cls, v: Any) -> np.ndarray:
        array = np.array(v, dtype=np.float64)
        if array.ndim != 1 or array.shape[0] < 2:
            raise ValueError("Shapelet values must be a vector of length >= 2")
        if not np.isfinite(array).all():
            raise ValueError("Shapelet values must be finite")
        array.setflags(write=False)
        return array

    @field_validator("threshold")
    @classmethod
    def validate_threshold(cls, v: float) -> float:
        if not np.isfinite(v):
            raise ValueError("Threshold must be finite")
        return float(v)

    @model_validator(mode="after")
    def validate_normalization(self) -> "DilatedShapelet":
        if self.normalized and not self.degenerate:
            mean = float(self.values.mean())
            std = float(self.values.std())
            if abs(mean) >= NORMALIZED_TOLERANCE or abs(std - 1) >= NORMALIZED_TOLERANCE:
                raise ValueError(
                    f"Normalized shapelet has mean {mean} and std {std}"
                )
        return self

    @property
    def length(self) -> int:
        return int(self.values.shape[0])

    @property
    def span(self) -> int:
        """Number of series samples covered by one placement."""
        return (self.length - 1) * self.dilation + 1

    @property
    def degenerate(self) -> bool:
        """Normalized shapelet drawn from a constant subsequence."""
        return self.normalized and not self.values.any()

    def fits(self, m: int) -> bool:
        return (self.length - 1) * self.dilation < m


class ShapeletOrigin(BaseModel):
    """Where a generated shapelet came from."""

    series_index: int = Field(ge=0)
    start: int = Field(ge=0)
    source_class: int
    lambda_index: int = Field(ge=0)

    model_config = ConfigDict(frozen=True)


class PackedBank(NamedTuple):
    """Flat arrays consumed by the transform kernel."""

    values: np.ndarray
    offsets: np.ndarray
    lengths: np.ndarray
    dilations: np.ndarray
    thresholds: np.ndarray
    normalized: np.ndarray


class ShapeletBank(BaseModel):
    """Ordered shapelets with the configuration and seed that produced them."""

    shapelets: tuple[DilatedShapelet, ...]
    config: GenerationConfig
    seed: int = Field(ge=0, lt=2**64)
    train_length: int = Field(ge=2)
    origins: tuple[ShapeletOrigin, ...] = ()

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def validate_bank(self) -> "ShapeletBank":
        if len(self.shapelets) != self.config.n_shapelets:
            raise ValueError(
                f"Bank holds {len(self.shapelets)} shapelets, "
                f"config asks for {self.config.n_shapelets}"
            )
        if self.origins and len(self.origins) != len(self.shapelets):
            raise ValueError("One origin record per shapelet is required")
        for index, shapelet in enumerate(self.shapelets):
            if not shapelet.fits(self.train_length):
                raise ValueError(
                    f"Shapelet {index} spans {shapelet.span} samples, "
                    f"series have {self.train_length}"
                )
        return self

    @cached_property
    def packed(self) -> PackedBank:
        lengths = np.array([s.length for s in self.shapelets], dtype=np.int64)
        offsets = np.zeros(len(self.shapelets), dtype=np.int64)
        if len(lengths) > 1:
            offsets[1:] = np.cumsum(lengths)[:-1]
        return PackedBank(
            values=np.ascontiguousarray(
                np.concatenate([s.values for s in self.shapelets])
            ),
            offsets=offsets,
            lengths=lengths,
            dilations=np.array([s.dilation for s in self.shapelets], dtype=np.int64),
            thresholds=np.array(
                [s.threshold for s in self.shapelets], dtype=np.float64
            ),
            normalized=np.array([s.normalized for s in self.shapelets], dtype=np.bool_),
        )

    @property
    def n_features(self) -> int:
        return 3 * len(self.shapelets)

    def __len__(self) -> int:
        return len(self.shapelets)
