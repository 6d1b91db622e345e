"""
Shared fixtures for the dilated shapelet test suite.
"""

import numpy as np
import pytest

from dilated_shapelets.datasets import SyntheticSpec, make_synthetic_split, save_tsv
from dilated_shapelets.models.shapelet import GenerationConfig
from dilated_shapelets.pipeline import ShapeletClassifier


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def synthetic_spec():
    return SyntheticSpec(
        n_per_class=20,
        length=64,
        pattern_length=7,
        pattern_dilation=2,
        noise_std=0.2,
        seed=3,
    )


@pytest.fixture(scope="session")
def synthetic_split(synthetic_spec):
    return make_synthetic_split(synthetic_spec)


@pytest.fixture(scope="session")
def small_config():
    return GenerationConfig(n_shapelets=60, lengths=(7, 9), p_norm=0.8, p1=5, p2=10)


@pytest.fixture(scope="session")
def fitted_classifier(synthetic_split, small_config):
    train, _ = synthetic_split
    return ShapeletClassifier(config=small_config, seed=7, threads=1).fit(train)


@pytest.fixture
def tsv_pair(tmp_path, synthetic_split):
    train, test = synthetic_split
    train_path = tmp_path / "Synthetic_TRAIN.tsv"
    test_path = tmp_path / "Synthetic_TEST.tsv"
    save_tsv(train, train_path)
    save_tsv(test, test_path)
    return train_path, test_path


@pytest.fixture
def level_files(tmp_path):
    """Text-labeled files where the test file lacks one training class."""
    rng = np.random.default_rng(5)

    def rows(labels):
        means = {"a": 0.0, "b": 5.0, "c": 10.0}
        return "".join(
            label
            + "\t"
            + "\t".join(repr(float(v)) for v in means[label] + 0.1 * rng.standard_normal(32))
            + "\n"
            for label in labels
        )

    train_path = tmp_path / "Levels_TRAIN.tsv"
    test_path = tmp_path / "Levels_TEST.tsv"
    train_path.write_text(rows("aaabbbccc"))
    test_path.write_text(rows("bbcc"))
    return train_path, test_path
