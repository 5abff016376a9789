"""Rank online news websites from user-generated content."""

__version__ = "0.1.0"
