"""Certify surjectivity of adelic Galois representations of elliptic curves over cubic fields."""

__version__ = "0.1.0"
