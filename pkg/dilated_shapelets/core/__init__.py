"""
Numerical core: distances, bank sampling, transform, ridge and explanations.
"""
