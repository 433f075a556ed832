"""Anytime-valid sequential comparison of probability forecasters."""

__version__ = "0.1.0"
