"""
Versioned JSON model archive.

The archive is self-contained: the bank, the ridge model and the training
length are enough to predict. Keys are sorted and floats use Python's
shortest round-trip form, so identical models give identical bytes.
"""

import gzip
import hashlib
import io
import json
import logging
from pathlib import Path
from typing import Any, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .exceptions import ArchiveError
from .models.ridge import AlphaGrid, RidgeModel
from .models.shapelet import (
    DilatedShapelet,
    GenerationConfig,
    ShapeletBank,
    ShapeletOrigin,
)

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

PathLike = Union[str, Path]


class ShapeletRecord(BaseModel):
    values: list[float]
    dilation: int
    threshold: float = Field(alias="lambda")
    normalized: bool

    model_config = ConfigDict(populate_by_name=True)


class RidgeRecord(BaseModel):
    class_table: list[int]
    weights: list[list[float]]
    intercepts: list[float]
    feature_means: list[float]
    feature_stds: list[float]
    constant: list[bool]
    alpha: float
    alpha_grid: Optional[list[float]] = None
    alpha_scores: list[float] = []
    loo_accuracy: Optional[float] = None
    label_names: Optional[list[str]] = None


class ModelArchive(BaseModel):
    format_version: int
    train_length: int
    seed: int
    config: GenerationConfig
    shapelets: list[ShapeletRecord]
    origins: list[ShapeletOrigin] = []
    ridge: RidgeRecord

    @field_validator("format_version")
    @classmethod
    def validate_version(cls, v: int) -> int:
        if v != FORMAT_VERSION:
            raise ValueError(
                f"Unsupported archive version {v}, expected {FORMAT_VERSION}"
            )
        return v

    @classmethod
    def from_parts(cls, bank: ShapeletBank, model: RidgeModel) -> "ModelArchive":
        return cls(
            format_version=FORMAT_VERSION,
            train_length=bank.train_length,
            seed=bank.seed,
            config=bank.config,
            shapelets=[
                ShapeletRecord(
                    values=s.values.tolist(),
                    dilation=s.dilation,
                    threshold=s.threshold,
                    normalized=s.normalized,
                )
                for s in bank.shapelets
            ],
            origins=list(bank.origins),
            ridge=RidgeRecord(
                class_table=list(model.class_table),
                weights=model.weights.tolist(),
                intercepts=model.intercepts.tolist(),
                feature_means=model.feature_means.tolist(),
                feature_stds=model.feature_stds.tolist(),
                constant=model.constant.tolist(),
                alpha=model.alpha,
                alpha_grid=list(model.alpha_grid.values) if model.alpha_grid else None,
                alpha_scores=list(model.alpha_scores),
                loo_accuracy=model.loo_accuracy,
                label_names=list(model.label_names) if model.label_names else None,
            ),
        )

    def to_bank(self) -> ShapeletBank:
        return ShapeletBank(
            shapelets=tuple(
                DilatedShapelet(
                    values=record.values,
                    dilation=record.dilation,
                    threshold=record.threshold,
                    normalized=record.normalized,
                )
                for record in self.shapelets
            ),
            origins=tuple(self.origins),
            config=self.config,
            seed=self.seed,
            train_length=self.train_length,
        )

    def to_model(self) -> RidgeModel:
        record = self.ridge
        return RidgeModel(
            weights=record.weights,
            intercepts=record.intercepts,
            feature_means=record.feature_means,
            feature_stds=record.feature_stds,
            constant=record.constant,
            alpha=record.alpha,
            class_table=tuple(record.class_table),
            alpha_grid=AlphaGrid(values=record.alpha_grid) if record.alpha_grid else None,
            alpha_scores=tuple(record.alpha_scores),
            loo_accuracy=record.loo_accuracy,
            label_names=tuple(record.label_names) if record.label_names else None,
        )

    def to_payload(self) -> dict[str, Any]:
        payload = self.model_dump(mode="python", by_alias=True)
        payload["config"]["lengths"] = list(self.config.lengths)
        return payload


def dumps_archive(bank: ShapeletBank, model: RidgeModel) -> bytes:
    payload = ModelArchive.from_parts(bank, model).to_payload()
    return (json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n").encode(
        "utf-8"
    )


def archive_digest(bank: ShapeletBank, model: RidgeModel) -> str:
    return hashlib.sha256(dumps_archive(bank, model)).hexdigest()


def save_archive(path: PathLike, bank: ShapeletBank, model: RidgeModel) -> str:
    """Write the archive (gzip when the name ends in ``.gz``); return its digest."""
    raw = dumps_archive(bank, model)
    path = Path(path)
    if path.name.endswith(".gz"):
        buffer = io.BytesIO()
        # Fixed mtime and no file name keep the gzip header reproducible
        with gzip.GzipFile(filename="", mode="wb", fileobj=buffer, mtime=0) as handle:
            handle.write(raw)
        path.write_bytes(buffer.getvalue())
    else:
        path.write_bytes(raw)
    digest = hashlib.sha256(raw).hexdigest()
    logger.info(f"Saved model archive to {path} (sha256 {digest})")
    return digest


def load_archive(path: PathLike) -> tuple[ShapeletBank, RidgeModel]:
    path = Path(path)
    try:
        raw = path.read_bytes()
        if path.name.endswith(".gz"):
            raw = gzip.decompress(raw)
        payload = json.loads(raw.decode("utf-8"))
    except (OSError, ValueError) as e:
        raise ArchiveError(f"Cannot read model archive {path}: {e}")
    try:
        archive = ModelArchive.model_validate(payload)
        return archive.to_bank(), archive.to_model()
    except ValidationError as e:
        raise ArchiveError(f"Invalid model archive {path}: {e}")
