"""Embedding provider: HTTP service plus batch exporter for SCEB files."""

__version__ = "0.1.0"
