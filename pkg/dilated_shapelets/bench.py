"""
Evaluation harness: repeated resample evaluation, parameter sweeps and
scalability curves.

Accuracy records are deterministic given seeds; timings are wall-clock and
are not.
"""

import csv
import io
import itertools
import logging
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Iterable, Mapping, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError
from scipy.stats import rankdata

from .core import ridge
from .core.sampler import check_seed, generate_bank
from .core.transform import transform
from .datasets import SyntheticSpec, make_synthetic, pool, stratified_resample
from .exceptions import ConfigError
from .models.ridge import AlphaGrid
from .models.series import LabeledDataset
from .models.shapelet import GenerationConfig
from .utils.timing import timed

logger = logging.getLogger(__name__)

# Defaults held fixed while one parameter is swept
SENSITIVITY_BASELINE = GenerationConfig(
    n_shapelets=10000, lengths=(7, 9, 11), p_norm=0.9, p1=5.0, p2=15.0
)

SWEEP_COLUMNS = (
    "config_id",
    "dataset",
    "resample",
    "accuracy",
    "fit_s",
    "transform_s",
    "predict_s",
)
SCALE_COLUMNS = ("axis", "size", "fit_s", "transform_s", "total_s")
SWEEP_PARAMETERS = ("n_shapelets", "lengths", "p_norm", "percentiles")
SCALE_AXES = ("n_series", "series_length")


class StageTimings(BaseModel):
    fit_s: float
    transform_s: float
    predict_s: float

    model_config = ConfigDict(frozen=True)


class RunResult(BaseModel):
    accuracy: float
    timings: StageTimings

    model_config = ConfigDict(frozen=True)


class EvaluationReport(BaseModel):
    accuracies: list[float]
    mean: float
    std: float
    timings: list[StageTimings]
    n_resamples: int
    train_fraction: float

    def to_payload(self) -> dict[str, Any]:
        return self.model_dump(mode="json")


class SweepRecord(BaseModel):
    config_id: int
    dataset: str
    resample: int
    accuracy: float
    fit_s: float
    transform_s: float
    predict_s: float

    model_config = ConfigDict(frozen=True)


class SweepResult(BaseModel):
    configs: list[GenerationConfig]
    records: list[SweepRecord]
    datasets: list[str]
    rank_matrix: list[list[float]]
    mean_ranks: list[float]

    def mean_accuracy(self, config_id: int, dataset: str) -> float:
        values = [
            r.accuracy
            for r in self.records
            if r.config_id == config_id and r.dataset == dataset
        ]
        return float(np.mean(values))


class ScalePoint(BaseModel):
    axis: str
    size: int
    fit_s: float
    transform_s: float

    model_config = ConfigDict(frozen=True)

    @property
    def total_s(self) -> float:
        return self.fit_s + self.transform_s


def run_once(
    train: LabeledDataset,
    test: LabeledDataset,
    config: GenerationConfig,
    seed: int,
    alpha_grid: Optional[AlphaGrid] = None,
    threads: Optional[int] = None,
) -> RunResult:
    """Fit on ``train``, score on ``test``; stages are timed separately."""
    with timed("fit", logging.DEBUG) as fit_timer:
        bank = generate_bank(train, config, seed, threads)
        model = ridge.fit(transform(bank, train, threads=threads), train.labels, alpha_grid)
    with timed("transform", logging.DEBUG) as transform_timer:
        features = transform(bank, test, threads=threads)
    with timed("predict", logging.DEBUG) as predict_timer:
        predicted = ridge.predict(model, features)
    accuracy = float(np.mean(predicted == np.asarray(test.labels)))
    return RunResult(
        accuracy=accuracy,
        timings=StageTimings(
            fit_s=fit_timer.seconds,
            transform_s=transform_timer.seconds,
            predict_s=predict_timer.seconds,
        ),
    )


def resample_splits(
    train: LabeledDataset,
    test: LabeledDataset,
    n_resamples: int,
    seed: int,
    train_fraction: Optional[float] = None,
) -> tuple[float, list[tuple[LabeledDataset, LabeledDataset]]]:
    """Resample 0 is the given split; later ones re-split the pooled data."""
    check_seed(seed)
    if n_resamples < 1:
        raise ConfigError(f"n_resamples must be >= 1, got {n_resamples}")
    if train_fraction is None:
        train_fraction = train.n_series / (train.n_series + test.n_series)
    if not 0.0 < train_fraction < 1.0:
        raise ConfigError(f"train_fraction must be in (0, 1), got {train_fraction}")
    splits = [(train, test)]
    if n_resamples > 1:
        pooled = pool(train, test)
        splits.extend(
            stratified_resample(pooled, train_fraction, seed + r)
            for r in range(1, n_resamples)
        )
    return train_fraction, splits


def evaluate(
    train: LabeledDataset,
    test: LabeledDataset,
    config: GenerationConfig,
    n_resamples: int = 1,
    seed: int = 0,
    train_fraction: Optional[float] = None,
    alpha_grid: Optional[AlphaGrid] = None,
    threads: Optional[int] = None,
) -> EvaluationReport:
    fraction, splits = resample_splits(train, test, n_resamples, seed, train_fraction)
    runs = []
    for index, (fold_train, fold_test) in enumerate(splits):
        result = run_once(fold_train, fold_test, config, seed, alpha_grid, threads)
        logger.info(f"Resample {index}: accuracy {result.accuracy:.4f}")
        runs.append(result)
    accuracies = [r.accuracy for r in runs]
    return EvaluationReport(
        accuracies=accuracies,
        mean=float(np.mean(accuracies)),
        std=float(np.std(accuracies)),
        timings=[r.timings for r in runs],
        n_resamples=n_resamples,
        train_fraction=fraction,
    )


def expand_grid(
    param_grid: Mapping[str, Sequence[Any]], base: GenerationConfig
) -> list[GenerationConfig]:
    """Cartesian product of the swept values; other parameters come from ``base``.

    ``percentiles`` takes ``(p1, p2)`` pairs so the two move together.
    """
    unknown = sorted(set(param_grid) - set(SWEEP_PARAMETERS))
    if unknown:
        raise ConfigError(
            f"Unknown sweep parameters {unknown}; expected some of {list(SWEEP_PARAMETERS)}"
        )
    names = list(param_grid)
    if any(len(param_grid[name]) == 0 for name in names):
        raise ConfigError("Every swept parameter needs at least one value")
    configs = []
    for combo in itertools.product(*(param_grid[name] for name in names)):
        update = base.model_dump()
        for name, value in zip(names, combo):
            if name == "percentiles":
                update["p1"], update["p2"] = value
            elif name == "lengths":
                update["lengths"] = [value] if isinstance(value, int) else value
            else:
                update[name] = value
        try:
            configs.append(GenerationConfig(**update))
        except ValidationError as e:
            raise ConfigError(f"Invalid sweep configuration {update}: {e}")
    return configs


def mean_ranks(accuracy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rank configs (columns) within each dataset (row); best = 1, ties averaged."""
    ranks = np.vstack([rankdata(-row, method="average") for row in accuracy])
    return ranks, ranks.mean(axis=0)


SweepJob = tuple[
    int, str, int, LabeledDataset, LabeledDataset, GenerationConfig, int, Optional[int]
]


def _sweep_job(job: SweepJob) -> SweepRecord:
    config_id, name, r, fold_train, fold_test, config, seed, threads = job
    result = run_once(fold_train, fold_test, config, seed, threads=threads)
    return SweepRecord(
        config_id=config_id,
        dataset=name,
        resample=r,
        accuracy=result.accuracy,
        **result.timings.model_dump(),
    )


def sweep(
    param_grid: Mapping[str, Sequence[Any]],
    datasets: Mapping[str, tuple[LabeledDataset, LabeledDataset]],
    n_resamples: int = 1,
    seed: int = 0,
    base: GenerationConfig = SENSITIVITY_BASELINE,
    parallel: bool = False,
    threads: Optional[int] = None,
) -> SweepResult:
    """Evaluate every config on every dataset and resample.

    Configs run one after another unless ``parallel`` is set; parallel runs
    keep accuracies exact but their timings overlap.
    """
    if not datasets:
        raise ConfigError("Sweep needs at least one dataset")
    configs = expand_grid(param_grid, base)
    names = list(datasets)
    splits = {
        name: resample_splits(*datasets[name], n_resamples, seed)[1] for name in names
    }
    tasks = [
        (config_id, name, r)
        for config_id in range(len(configs))
        for name in names
        for r in range(n_resamples)
    ]

    logger.info(
        f"Sweeping {len(configs)} configs x {len(names)} datasets x "
        f"{n_resamples} resamples"
    )
    jobs = [
        (config_id, name, r, *splits[name][r], configs[config_id], seed, threads)
        for config_id, name, r in tasks
    ]
    if parallel:
        # numba's default threading layer is not thread-safe; use processes
        context = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(mp_context=context) as executor:
            records = list(executor.map(_sweep_job, jobs))
    else:
        records = [_sweep_job(job) for job in jobs]

    accuracy = np.zeros((len(names), len(configs)))
    for record in records:
        accuracy[names.index(record.dataset), record.config_id] += record.accuracy
    accuracy /= n_resamples
    ranks, means = mean_ranks(accuracy)
    return SweepResult(
        configs=configs,
        records=records,
        datasets=names,
        rank_matrix=ranks.tolist(),
        mean_ranks=means.tolist(),
    )


def _scaled_spec(template: SyntheticSpec, axis: str, size: int) -> SyntheticSpec:
    if axis not in SCALE_AXES:
        raise ConfigError(f"Unknown axis {axis!r}; expected one of {list(SCALE_AXES)}")
    if size <= 0:
        raise ConfigError(f"Scalability points must be positive, got {size}")
    fields = template.model_dump()
    if axis == "n_series":
        if size < 4:
            raise ConfigError(f"n_series must be >= 4 (2 per class), got {size}")
        fields["n_per_class"] = size // 2
    else:
        fields["length"] = size
    try:
        return SyntheticSpec(**fields)
    except ValidationError as e:
        raise ConfigError(f"Cannot build a {axis}={size} dataset: {e}")


def scalability(
    template: SyntheticSpec,
    axis: str,
    points: Iterable[int],
    config: GenerationConfig,
    repeats: int = 3,
    seed: int = 0,
    threads: Optional[int] = None,
) -> list[ScalePoint]:
    """Fit and transform timings averaged over ``repeats`` runs per size."""
    sizes = list(points)
    if not sizes:
        raise ConfigError("Scalability needs at least one point")
    if repeats < 1:
        raise ConfigError(f"repeats must be >= 1, got {repeats}")
    specs = [_scaled_spec(template, axis, size) for size in sizes]
    curve = []
    for size, spec in zip(sizes, specs):
        dataset = make_synthetic(spec)
        fit_times = []
        transform_times = []
        for _ in range(repeats):
            with timed(f"{axis}={size} fit", logging.DEBUG) as fit_timer:
                bank = generate_bank(dataset, config, seed, threads)
                ridge.fit(transform(bank, dataset, threads=threads), dataset.labels)
            with timed(f"{axis}={size} transform", logging.DEBUG) as transform_timer:
                transform(bank, dataset, threads=threads)
            fit_times.append(fit_timer.seconds)
            transform_times.append(transform_timer.seconds)
        point = ScalePoint(
            axis=axis,
            size=size,
            fit_s=float(np.mean(fit_times)),
            transform_s=float(np.mean(transform_times)),
        )
        logger.info(
            f"{axis}={size}: fit {point.fit_s:.3f}s, transform {point.transform_s:.3f}s"
        )
        curve.append(point)
    return curve


def sweep_csv(records: Iterable[SweepRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for record in records:
        writer.writerow([getattr(record, column) for column in SWEEP_COLUMNS])
    return buffer.getvalue()


def scale_csv(curve: Iterable[ScalePoint]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SCALE_COLUMNS)
    for point in curve:
        writer.writerow([getattr(point, column) for column in SCALE_COLUMNS])
    return buffer.getvalue()
