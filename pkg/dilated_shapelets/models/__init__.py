"""
Domain models for the dilated shapelet toolkit.
"""

from .features import FeatureMatrix, FeatureType
from .ridge import AlphaGrid, RidgeModel
from .series import (
    LabeledDataset,
    TimeSeries,
    ValidationReport,
    validate_dataset,
)
from .shapelet import DilatedShapelet, GenerationConfig, ShapeletBank, ShapeletOrigin

__all__ = [
    "AlphaGrid",
    "DilatedShapelet",
    "FeatureMatrix",
    "FeatureType",
    "GenerationConfig",
    "LabeledDataset",
    "RidgeModel",
    "ShapeletBank",
    "ShapeletOrigin",
    "TimeSeries",
    "ValidationReport",
    "validate_dataset",
]
