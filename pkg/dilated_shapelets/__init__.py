"""
Dilated Shapelets

Random dilated shapelet transform for univariate time series classification:
randomized dilated shapelets, (min, argmin, occurrence) features, a ridge
one-vs-rest classifier and weight-based explanations.
"""

__version__ = "0.1.0"
__author__ = "Shapelet Team"
__email__ = "shapelets@example.com"
