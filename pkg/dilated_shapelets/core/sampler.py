"""
Randomized shapelet bank generation.

Each shapelet owns a Philox stream keyed by ``(seed, index)``; its draws are
consumed in a fixed order, so a shapelet depends only on the seed, its
index and the dataset, whatever the number of worker threads.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

# math.exp2 is Python 3.11+.
_exp2 = getattr(math, "exp2", lambda v: 2.0**v)

from ..exceptions import ConfigError, DataValidationError
from ..models.series import LabeledDataset, validate_dataset
from ..models.shapelet import (
    DilatedShapelet,
    GenerationConfig,
    ShapeletBank,
    ShapeletOrigin,
)
from ..utils.parallel import resolve_threads
from ..utils.timing import timed
from .distance import distance_profile, znormalize

logger = logging.getLogger(__name__)

MAX_SEED = 2**64


def check_seed(seed: int) -> int:
    if not 0 <= seed < MAX_SEED:
        raise ConfigError(f"Seed must be in [0, 2**64), got {seed}")
    return seed


def shapelet_stream(seed: int, index: int) -> np.random.Generator:
    """Counter-based generator dedicated to shapelet ``index``."""
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return np.random.Generator(np.random.Philox(sequence))


@dataclass
class SamplerState:
    """Random stream plus the read-only inputs of one shapelet draw."""

    rng: np.random.Generator
    config: GenerationConfig
    dataset: LabeledDataset
    members: dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.members:
            self.members = self.dataset.class_members()

    @property
    def m(self) -> int:
        return self.dataset.length


def sample_length(state: SamplerState) -> int:
    lengths = state.config.lengths
    if max(lengths) > state.m:
        raise ConfigError(
            f"Shapelet length {max(lengths)} exceeds series length {state.m}"
        )
    return int(lengths[state.rng.integers(len(lengths))])


def sample_dilation(state: SamplerState, length: int, m: int) -> int:
    """``floor(2**x)`` with ``x ~ U[0, log2(m / length)]``."""
    upper = math.log2(m / length)
    x = state.rng.uniform(0.0, upper)
    dilation = int(math.floor(_exp2(x)))
    return min(max(dilation, 1), m // length)


def sample_normalization(state: SamplerState) -> bool:
    return bool(state.rng.random() < state.config.p_norm)


def sample_values(
    state: SamplerState,
    dataset: LabeledDataset,
    length: int,
    dilation: int,
    normalized: bool = False,
) -> tuple[np.ndarray, int, int, int]:
    """Dilated subsequence of a random series at a random admissible start.

    Returns ``(values, source_class, series_index, start)``.
    """
    m = dataset.length
    series_index = int(state.rng.integers(dataset.n_series))
    start = int(state.rng.integers(m - (length - 1) * dilation))
    row = dataset.values[series_index]
    values = row[start : start + (length - 1) * dilation + 1 : dilation].copy()
    if normalized:
        values = znormalize(values)
    return values, dataset.labels[series_index], series_index, start


def sample_lambda(
    state: SamplerState,
    shapelet: DilatedShapelet,
    dataset: LabeledDataset,
    source_class: int,
) -> tuple[float, int]:
    """Threshold drawn between the (p1, p2) percentiles of a same-class vector.

    Returns ``(lambda, lambda_series_index)``.
    """
    members = state.members[source_class]
    lambda_index = int(members[state.rng.integers(len(members))])
    profile = distance_profile(
        dataset.values[lambda_index],
        shapelet.values,
        shapelet.dilation,
        shapelet.normalized,
    )
    low, high = np.percentile(profile, [state.config.p1, state.config.p2])
    threshold = low if high <= low else state.rng.uniform(low, high)
    return max(float(threshold), 0.0), lambda_index


def draw_shapelet(
    state: SamplerState,
) -> tuple[DilatedShapelet, ShapeletOrigin]:
    """Full pipeline for one shapelet: length, dilation, coin, values, lambda."""
    m = state.m
    length = sample_length(state)
    dilation = sample_dilation(state, length, m)
    normalized = sample_normalization(state)
    values, source_class, series_index, start = sample_values(
        state, state.dataset, length, dilation, normalized
    )
    candidate = DilatedShapelet(
        values=values, dilation=dilation, threshold=0.0, normalized=normalized
    )
    threshold, lambda_index = sample_lambda(
        state, candidate, state.dataset, source_class
    )
    shapelet = candidate.model_copy(update={"threshold": threshold})
    origin = ShapeletOrigin(
        series_index=series_index,
        start=start,
        source_class=source_class,
        lambda_index=lambda_index,
    )
    return shapelet, origin


def _draw_range(
    dataset: LabeledDataset,
    config: GenerationConfig,
    seed: int,
    members: dict[int, np.ndarray],
    start: int,
    stop: int,
) -> list[tuple[DilatedShapelet, ShapeletOrigin]]:
    drawn = []
    for index in range(start, stop):
        state = SamplerState(
            rng=shapelet_stream(seed, index),
            config=config,
            dataset=dataset,
            members=members,
        )
        drawn.append(draw_shapelet(state))
    return drawn


def generate_bank(
    dataset: LabeledDataset,
    config: GenerationConfig,
    seed: int,
    threads: Optional[int] = None,
    chunk_size: int = 256,
) -> ShapeletBank:
    """Draw ``config.n_shapelets`` shapelets from ``dataset``."""
    check_seed(seed)
    report = validate_dataset(dataset)
    if not report.passed:
        raise DataValidationError(report)
    m = dataset.length
    if max(config.lengths) > m:
        raise ConfigError(
            f"Shapelet length {max(config.lengths)} exceeds series length {m}"
        )

    members = dataset.class_members()
    n = config.n_shapelets
    bounds = [(lo, min(lo + chunk_size, n)) for lo in range(0, n, chunk_size)]
    workers = min(resolve_threads(threads), len(bounds))

    with timed(f"generate {n} shapelets"):
        if workers <= 1:
            chunks = [
                _draw_range(dataset, config, seed, members, lo, hi) for lo, hi in bounds
            ]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                chunks = list(
                    pool.map(
                        lambda b: _draw_range(dataset, config, seed, members, *b),
                        bounds,
                    )
                )

    drawn = [item for chunk in chunks for item in chunk]
    normalized = sum(1 for shapelet, _ in drawn if shapelet.normalized)
    logger.info(
        f"Generated {n} shapelets on {dataset.n_series} series of length {m} "
        f"({normalized} normalized, seed {seed})"
    )
    return ShapeletBank(
        shapelets=tuple(shapelet for shapelet, _ in drawn),
        origins=tuple(origin for _, origin in drawn),
        config=config,
        seed=seed,
        train_length=m,
    )
