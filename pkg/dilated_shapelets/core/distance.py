"""
Dilated distance vectors and the (min, argmin, SO) feature triple.

Kernels are compiled without fastmath: the inner sum runs over shapelet
positions in ascending order so results are reproducible bit for bit.
"""

from typing import Any

import numpy as np
from numba import njit
from pydantic import BaseModel, ConfigDict, Field

from ..exceptions import ShapeTooLongError
from ..models.series import TimeSeries
from ..models.shapelet import DilatedShapelet

# Population std below which a vector is treated as constant
DEGENERATE_STD = 1e-8


class FeatureTriple(BaseModel):
    min_dist: float = Field(ge=0.0)
    argmin_idx: int = Field(ge=0)
    occ_count: int = Field(ge=0)

    model_config = ConfigDict(frozen=True)


@njit(cache=True, nogil=True)
def window_distance(x, start, values, offset, length, dilation, normalized):  # type: ignore[no-untyped-def]
    """Distance between one dilated window of ``x`` and a shapelet slice."""
    total = 0.0
    if normalized:
        mean = 0.0
        for j in range(length):
            mean += x[start + j * dilation]
        mean = mean / length
        var = 0.0
        for j in range(length):
            diff = x[start + j * dilation] - mean
            var += diff * diff
        std = np.sqrt(var / length)
        if std < DEGENERATE_STD:
            for j in range(length):
                diff = 0.0 - values[offset + j]
                total += diff * diff
        else:
            for j in range(length):
                diff = (x[start + j * dilation] - mean) / std - values[offset + j]
                total += diff * diff
        return np.sqrt(total)
    for j in range(length):
        diff = x[start + j * dilation] - values[offset + j]
        total += diff * diff
    return np.sqrt(total)


@njit(cache=True, nogil=True)
def distance_profile(x, values, dilation, normalized):  # type: ignore[no-untyped-def]
    length = values.shape[0]
    n_windows = x.shape[0] - (length - 1) * dilation
    out = np.empty(n_windows, dtype=np.float64)
    for i in range(n_windows):
        out[i] = window_distance(x, i, values, 0, length, dilation, normalized)
    return out


@njit(cache=True, nogil=True)
def profile_features(x, values, offset, length, dilation, normalized, threshold):  # type: ignore[no-untyped-def]
    """Min, first argmin and strict-threshold count without storing the vector."""
    n_windows = x.shape[0] - (length - 1) * dilation
    best = np.inf
    best_idx = 0
    count = 0
    for i in range(n_windows):
        dist = window_distance(x, i, values, offset, length, dilation, normalized)
        if dist < best:
            best = dist
            best_idx = i
        if dist < threshold:
            count += 1
    return best, best_idx, count


def _series_values(series: Any) -> np.ndarray:
    if isinstance(series, TimeSeries):
        return series.values
    return np.asarray(series, dtype=np.float64)


def _check_fit(shapelet: DilatedShapelet, m: int) -> None:
    if not shapelet.fits(m):
        raise ShapeTooLongError(
            f"Shapelet of length {shapelet.length} at dilation {shapelet.dilation} "
            f"spans {shapelet.span} samples but the series has {m}"
        )


def znormalize(values: Any) -> np.ndarray:
    """Zero mean, unit population std; all zeros when the std is below 1e-8."""
    array = np.asarray(values, dtype=np.float64)
    if array.size == 0:
        raise ValueError("Cannot normalize an empty vector")
    std = array.std()
    if std < DEGENERATE_STD:
        return np.zeros_like(array)
    out = (array - array.mean()) / std
    # Second pass: cancellation leaves a residual mean when std << |mean|
    out -= out.mean()
    return out / out.std()


def distance_vector(shapelet: DilatedShapelet, series: Any) -> np.ndarray:
    """Distances of ``shapelet`` to every dilated window of ``series``."""
    x = _series_values(series)
    _check_fit(shapelet, x.shape[0])
    return distance_profile(x, shapelet.values, shapelet.dilation, shapelet.normalized)


def extract_features(shapelet: DilatedShapelet, series: Any) -> FeatureTriple:
    x = _series_values(series)
    _check_fit(shapelet, x.shape[0])
    best, best_idx, count = profile_features(
        x,
        shapelet.values,
        0,
        shapelet.length,
        shapelet.dilation,
        shapelet.normalized,
        shapelet.threshold,
    )
    return FeatureTriple(min_dist=best, argmin_idx=best_idx, occ_count=count)
