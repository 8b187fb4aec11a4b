"""Metropolis sampling of freely reduced trivial words in finitely presented groups."""

__version__ = "0.1.0"
