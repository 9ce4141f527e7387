"""Constructive tools for 4/n = 1/x + 1/y + 1/z."""
__version__ = "0.1.0"
