"""Exact computations with Lie-Rinehart algebras, their Gerstenhaber algebras and BV generators."""

__version__ = "0.1.0"
