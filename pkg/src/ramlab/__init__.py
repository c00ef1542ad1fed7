"""Presentations of restricted-ramification Galois groups and class-group rank bounds."""

__version__ = "0.1.0"
