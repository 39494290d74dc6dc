"""Synchronous games, their *-algebras, and quantum graph isomorphism tools."""

__version__ = "0.1.0"
