"""Exact computations with maximal subalgebras of small Lie algebras: cores,
c-sections, c-index, ideal index and primitivity types."""

__version__ = "0.1.0"
