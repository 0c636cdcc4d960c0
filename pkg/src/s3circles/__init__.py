"""Surfaces in S^3 through products of a great and a small circle."""
from .circles import PRESETS, named_circle
from .classify import classify
from .product import build

__all__ = ["PRESETS", "named_circle", "classify", "build"]
