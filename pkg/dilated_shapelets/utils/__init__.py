"""
Logging, timing and thread-control helpers.
"""
