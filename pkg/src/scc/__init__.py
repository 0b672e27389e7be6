"""Retrieval-augmented comment generation toolkit for smart-contract code."""

__version__ = "0.1.0"
