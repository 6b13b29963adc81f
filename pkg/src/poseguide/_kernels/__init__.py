"""Kernel selection: compiled extension when built, pure Python otherwise."""

try:
    from ._fast import IMPLEMENTATION, score_pair
except ImportError:  # extension not built on this install
    from .pure import IMPLEMENTATION, score_pair

__all__ = ["IMPLEMENTATION", "score_pair"]
