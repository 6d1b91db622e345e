"""
Shapelet transform: apply a bank to a set of series.
"""

import logging
from typing import Optional, Sequence, TextIO, Union

import numpy as np
from numba import njit, prange

from ..config import settings
from ..exceptions import LengthMismatchError
from ..models.features import FeatureMatrix
from ..models.series import LabeledDataset, TimeSeries
from ..models.shapelet import ShapeletBank
from ..utils.parallel import thread_limit
from ..utils.timing import timed
from .distance import profile_features

logger = logging.getLogger(__name__)

SeriesInput = Union[LabeledDataset, Sequence[TimeSeries], np.ndarray]


@njit(parallel=True, cache=True)
def apply_bank(X, values, offsets, lengths, dilations, thresholds, normalized, block_size):  # type: ignore[no-untyped-def]
    """One task per (series, block of shapelets); every cell has one writer."""
    n_series = X.shape[0]
    n_shapelets = lengths.shape[0]
    n_blocks = (n_shapelets + block_size - 1) // block_size
    out = np.zeros((n_series, 3 * n_shapelets), dtype=np.float64)
    for task in prange(n_series * n_blocks):
        i = task // n_blocks
        block = task % n_blocks
        stop = min((block + 1) * block_size, n_shapelets)
        for k in range(block * block_size, stop):
            best, best_idx, count = profile_features(
                X[i],
                values,
                offsets[k],
                lengths[k],
                dilations[k],
                normalized[k],
                thresholds[k],
            )
            out[i, 3 * k] = best
            out[i, 3 * k + 1] = best_idx
            out[i, 3 * k + 2] = count
    return out


def as_matrix(series: SeriesInput) -> np.ndarray:
    """Stack the input as a C-contiguous ``(n, m)`` float matrix."""
    if isinstance(series, LabeledDataset):
        return np.ascontiguousarray(series.values)
    if isinstance(series, np.ndarray):
        matrix = np.ascontiguousarray(series, dtype=np.float64)
        if matrix.ndim != 2:
            raise LengthMismatchError("Expected a 2-D array of series")
        return matrix
    lengths = sorted({s.length for s in series})
    if len(lengths) > 1:
        raise LengthMismatchError(f"Series have unequal lengths {lengths}")
    return np.ascontiguousarray(np.vstack([s.values for s in series]))


def _check_lengths(bank: ShapeletBank, series: SeriesInput) -> None:
    if isinstance(series, LabeledDataset) or not isinstance(series, np.ndarray):
        items = series.series if isinstance(series, LabeledDataset) else series
        for index, s in enumerate(items):
            if s.length != bank.train_length:
                raise LengthMismatchError(
                    f"Series {index} has length {s.length}, "
                    f"expected {bank.train_length}"
                )
    elif series.ndim == 2 and series.shape[1] != bank.train_length:
        raise LengthMismatchError(
            f"Series have length {series.shape[1]}, expected {bank.train_length}"
        )


def transform(
    bank: ShapeletBank,
    series: SeriesInput,
    threads: Optional[int] = None,
    block_size: Optional[int] = None,
) -> FeatureMatrix:
    """Row ``i`` holds the (min, argmin, SO) triples of series ``i``."""
    _check_lengths(bank, series)
    X = as_matrix(series)
    packed = bank.packed
    if block_size is None:
        block_size = settings.runtime.block_size

    with thread_limit(threads) as used, timed(
        f"transform {X.shape[0]} series x {len(bank)} shapelets"
    ):
        data = apply_bank(
            X,
            packed.values,
            packed.offsets,
            packed.lengths,
            packed.dilations,
            packed.thresholds,
            packed.normalized,
            block_size,
        )
    logger.debug(f"Transform ran on {used} threads")
    return FeatureMatrix(data=data)


def write_features_csv(
    bank: ShapeletBank,
    series: SeriesInput,
    stream: TextIO,
    threads: Optional[int] = None,
    chunk_rows: int = 256,
) -> int:
    """Transform in row chunks and stream the CSV; returns rows written."""
    _check_lengths(bank, series)
    X = as_matrix(series)
    written = 0
    for lo in range(0, X.shape[0], chunk_rows):
        chunk = transform(bank, X[lo : lo + chunk_rows], threads=threads)
        chunk.write_csv(stream, header=lo == 0)
        written += chunk.rows
    return written
