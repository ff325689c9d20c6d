"""Geospatial question answering: typed expert plans over live or recorded geodata."""

__version__ = "0.1.0"
