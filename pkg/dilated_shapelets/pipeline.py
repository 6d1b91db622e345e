"""
Transform + ridge pipeline shared by the CLI and the benchmark harness.
"""

import logging
from typing import Optional

import numpy as np

from .core import ridge
from .core.sampler import generate_bank
from .core.transform import SeriesInput, transform
from .exceptions import DataValidationError
from .models.features import FeatureMatrix
from .models.ridge import AlphaGrid, RidgeModel
from .models.series import LabeledDataset, validate_dataset
from .models.shapelet import GenerationConfig, ShapeletBank
from .utils.timing import timed

logger = logging.getLogger(__name__)


class ShapeletClassifier:
    """Random dilated shapelet transform followed by a ridge classifier."""

    def __init__(
        self,
        config: Optional[GenerationConfig] = None,
        seed: int = 0,
        alpha_grid: Optional[AlphaGrid] = None,
        threads: Optional[int] = None,
    ) -> None:
        self.config = config or GenerationConfig()
        self.seed = seed
        self.alpha_grid = alpha_grid
        self.threads = threads
        self.bank: Optional[ShapeletBank] = None
        self.model: Optional[RidgeModel] = None

    @classmethod
    def from_parts(
        cls, bank: ShapeletBank, model: RidgeModel, threads: Optional[int] = None
    ) -> "ShapeletClassifier":
        classifier = cls(
            config=bank.config,
            seed=bank.seed,
            alpha_grid=model.alpha_grid,
            threads=threads,
        )
        classifier.bank = bank
        classifier.model = model
        return classifier

    @property
    def is_fitted(self) -> bool:
        return self.bank is not None and self.model is not None

    def _require_fitted(self) -> tuple[ShapeletBank, RidgeModel]:
        if self.bank is None or self.model is None:
            raise RuntimeError("Classifier is not fitted")
        return self.bank, self.model

    def fit(self, dataset: LabeledDataset) -> "ShapeletClassifier":
        report = validate_dataset(dataset)
        if not report.passed:
            raise DataValidationError(report)
        for issue in report.warnings:
            logger.warning(issue.message)
        with timed("fit"):
            self.bank = generate_bank(dataset, self.config, self.seed, self.threads)
            features = transform(self.bank, dataset, threads=self.threads)
            model = ridge.fit(features, dataset.labels, self.alpha_grid)
            self.model = model.model_copy(update={"label_names": dataset.label_names})
        return self

    def transform(self, series: SeriesInput) -> FeatureMatrix:
        bank, _ = self._require_fitted()
        return transform(bank, series, threads=self.threads)

    def decision_function(self, series: SeriesInput) -> np.ndarray:
        _, model = self._require_fitted()
        return ridge.decision_function(model, self.transform(series))

    def predict(self, series: SeriesInput) -> np.ndarray:
        _, model = self._require_fitted()
        return ridge.predict(model, self.transform(series))

    def score(self, dataset: LabeledDataset) -> float:
        return float(np.mean(self.predict(dataset) == np.asarray(dataset.labels)))
