"""
Tests for dilated distance vectors and feature extraction.
"""

import math
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dilated_shapelets.core.distance import (
    distance_vector,
    extract_features,
    znormalize,
)
from dilated_shapelets.exceptions import ShapeTooLongError
from dilated_shapelets.models.series import TimeSeries
from dilated_shapelets.models.shapelet import DilatedShapelet
from oracles import naive_contiguous_distance, naive_distance, naive_features


def random_case(rng, normalized):
    dilation = int(rng.integers(1, 33))
    length = int(rng.integers(2, 20))
    m = (length - 1) * dilation + int(rng.integers(1, 48))
    values = rng.normal(size=length)
    if normalized:
        values = znormalize(values)
    shapelet = DilatedShapelet(
        values=values, dilation=dilation, threshold=0.0, normalized=normalized
    )
    return shapelet, rng.normal(size=m) * rng.uniform(0.5, 5.0)


@pytest.mark.unit
class TestZNormalize:
    def test_constant_vector_is_degenerate(self):
        assert np.array_equal(znormalize([1, 1, 1]), [0.0, 0.0, 0.0])

    def test_two_values(self):
        np.testing.assert_allclose(znormalize([0, 2]), [-1.0, 1.0])

    def test_moments(self, rng):
        out = znormalize(rng.normal(3.0, 7.0, size=50))
        assert abs(out.mean()) < 1e-12
        assert abs(out.std() - 1.0) < 1e-12

    @pytest.mark.parametrize("offset, jitter", [(1.0, 3e-8), (1000.0, 5e-8), (-250.0, 2e-8)])
    def test_near_constant_vector_has_exact_moments(self, rng, offset, jitter):
        for _ in range(50):
            raw = offset + jitter * rng.standard_normal(11)
            out = znormalize(raw)
            if raw.std() < 1e-8:
                assert not out.any()
                continue
            assert abs(out.mean()) < 1e-9
            assert abs(out.std() - 1.0) < 1e-9
            DilatedShapelet(values=out, dilation=1, threshold=0.0, normalized=True)

    def test_empty_vector_rejected(self):
        with pytest.raises(ValueError):
            znormalize([])


@pytest.mark.unit
class TestDistanceVector:
    def test_hand_evaluated_example(self):
        shapelet = DilatedShapelet(values=[0, 2], dilation=2, threshold=2.0)
        series = TimeSeries(values=[0, 1, 2, 3, 4, 5])
        out = distance_vector(shapelet, series)
        expected = [0.0, math.sqrt(2), 2 * math.sqrt(2), 3 * math.sqrt(2)]
        assert len(out) == 4
        np.testing.assert_allclose(out, expected, rtol=1e-15)

    def test_exact_subsequence_gives_zero(self, rng):
        x = rng.normal(size=30)
        shapelet = DilatedShapelet(values=x[12:17], dilation=1, threshold=0.0)
        assert distance_vector(shapelet, x)[12] == 0.0

    def test_too_long_shapelet_rejected(self):
        shapelet = DilatedShapelet(values=[0, 1, 2], dilation=3, threshold=0.0)
        with pytest.raises(ShapeTooLongError):
            distance_vector(shapelet, np.zeros(7))

    def test_degenerate_window_compares_to_zero_vector(self):
        values = znormalize([0.0, 1.0, 2.0])
        shapelet = DilatedShapelet(values=values, dilation=1, threshold=0.0, normalized=True)
        out = distance_vector(shapelet, np.full(5, 4.0))
        np.testing.assert_allclose(out, np.sqrt(3.0))

    def test_matches_oracle_on_random_cases(self, rng):
        started = time.perf_counter()
        for case in range(1000):
            normalized = bool(case % 2)
            shapelet, x = random_case(rng, normalized)
            expected = naive_distance(shapelet.values, x, shapelet.dilation, normalized)
            out = distance_vector(shapelet, x)
            assert out.shape == (len(x) - (shapelet.length - 1) * shapelet.dilation,)
            np.testing.assert_allclose(out, expected, rtol=1e-9, atol=1e-12)
        assert time.perf_counter() - started < 10.0

    def test_unit_dilation_is_bitwise_contiguous_distance(self, rng):
        for _ in range(200):
            length = int(rng.integers(2, 20))
            x = rng.normal(size=length + int(rng.integers(0, 60)))
            shapelet = DilatedShapelet(values=rng.normal(size=length), dilation=1, threshold=0.0)
            assert np.array_equal(
                distance_vector(shapelet, x), naive_contiguous_distance(shapelet.values, x)
            )

    @pytest.mark.parametrize("a", [0.1, 3.0, 100.0])
    @pytest.mark.parametrize("b", [-5.0, 0.0, 7.0])
    def test_normalized_mode_is_affine_invariant(self, rng, a, b):
        for _ in range(100):
            shapelet, x = random_case(rng, normalized=True)
            np.testing.assert_allclose(
                distance_vector(shapelet, a * x + b),
                distance_vector(shapelet, x),
                rtol=0,
                atol=1e-6,
            )

    @settings(max_examples=60, deadline=None)
    @given(
        x=arrays(np.float64, st.integers(8, 40), elements=st.floats(-1e3, 1e3)),
        values=arrays(np.float64, st.integers(2, 4), elements=st.floats(-1e3, 1e3)),
        dilation=st.integers(1, 2),
    )
    def test_distances_are_non_negative(self, x, values, dilation):
        shapelet = DilatedShapelet(values=values, dilation=dilation, threshold=0.0)
        out = distance_vector(shapelet, x)
        assert out.shape == (len(x) - (len(values) - 1) * dilation,)
        assert (out >= 0).all()


@pytest.mark.unit
class TestExtractFeatures:
    def test_hand_evaluated_example(self):
        shapelet = DilatedShapelet(values=[0, 2], dilation=2, threshold=2.0)
        triple = extract_features(shapelet, [0, 1, 2, 3, 4, 5])
        assert (triple.min_dist, triple.argmin_idx, triple.occ_count) == (0.0, 0, 2)

    def test_zero_threshold_counts_nothing(self, rng):
        shapelet = DilatedShapelet(values=[0.0, 0.0], dilation=1, threshold=0.0)
        assert extract_features(shapelet, np.zeros(10)).occ_count == 0

    def test_constant_profile_below_threshold_counts_everything(self):
        shapelet = DilatedShapelet(values=[1.0, 1.0], dilation=3, threshold=0.5)
        assert extract_features(shapelet, np.ones(10)).occ_count == 7

    def test_argmin_is_first_minimizer(self):
        shapelet = DilatedShapelet(values=[1.0, 2.0], dilation=1, threshold=0.0)
        triple = extract_features(shapelet, [0, 1, 2, 0, 1, 2])
        assert triple.argmin_idx == 1

    def test_contracts_on_random_cases(self, rng):
        for case in range(1000):
            normalized = bool(case % 2)
            shapelet, x = random_case(rng, normalized)
            profile = naive_distance(shapelet.values, x, shapelet.dilation, normalized)
            assert len(profile) == len(x) - (shapelet.length - 1) * shapelet.dilation
            thresholds = np.linspace(0.0, profile.max() * 1.1, 10)
            counts = []
            for threshold in thresholds:
                candidate = shapelet.model_copy(update={"threshold": float(threshold)})
                triple = extract_features(candidate, x)
                best, best_idx, count = naive_features(profile, threshold)
                assert triple.argmin_idx == best_idx
                assert triple.occ_count == count
                assert triple.min_dist == pytest.approx(best, rel=1e-9, abs=1e-12)
                counts.append(triple.occ_count)
            assert counts == sorted(counts)
