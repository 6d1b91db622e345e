"""
End-to-end tests of the transform + ridge pipeline.
"""

import time

import numpy as np
import pytest

from dilated_shapelets.datasets import SyntheticSpec, make_synthetic_split
from dilated_shapelets.exceptions import DataValidationError
from dilated_shapelets.models.series import LabeledDataset
from dilated_shapelets.models.shapelet import GenerationConfig
from dilated_shapelets.pipeline import ShapeletClassifier


@pytest.mark.integration
class TestShapeletClassifier:
    def test_fit_predict(self, fitted_classifier, synthetic_split):
        train, test = synthetic_split
        assert fitted_classifier.is_fitted
        assert fitted_classifier.score(train) >= 0.9
        assert fitted_classifier.predict(test).shape == (len(test),)
        assert fitted_classifier.decision_function(test).shape == (len(test), 2)

    def test_unfitted(self, synthetic_split):
        _, test = synthetic_split
        with pytest.raises(RuntimeError):
            ShapeletClassifier().predict(test)

    def test_invalid_training_data(self):
        dataset = LabeledDataset.from_arrays([[0.0, np.nan, 1.0], [1.0, 2.0, 3.0]], [0, 1])
        with pytest.raises(DataValidationError):
            ShapeletClassifier(config=GenerationConfig(n_shapelets=2, lengths=[2])).fit(dataset)


@pytest.mark.e2e
@pytest.mark.slow
def test_default_parameters_on_synthetic_task():
    started = time.perf_counter()
    accuracies = []
    for seed in range(10):
        spec = SyntheticSpec(
            n_per_class=50,
            length=256,
            pattern_length=11,
            pattern_dilation=4,
            noise_std=0.2,
            seed=seed,
        )
        train, test = make_synthetic_split(spec)
        classifier = ShapeletClassifier(config=GenerationConfig(n_shapelets=1000), seed=seed)
        accuracies.append(classifier.fit(train).score(test))
    assert np.mean(accuracies) >= 0.95
    assert time.perf_counter() - started < 60.0
