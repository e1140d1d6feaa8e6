"""Numerical verification of elliptic hypergeometric identities."""

__version__ = "0.1.0"
