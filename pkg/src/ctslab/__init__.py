"""Exact correct-test-sequence toolkit over prime fields."""

__version__ = "0.1.0"
