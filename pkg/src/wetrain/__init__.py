"""Reverse-link training design for multi-antenna wireless energy transfer."""

__version__ = "0.1.0"
