"""Exact computations with finite real reflection groups.

Root systems, circuits and their acuteness graphs, Hurwitz orbits of
reflection factorizations, and the W-orbit classification of bases and full
circuits.
"""

from __future__ import annotations

from .rootsys import RootSystem, RootSystemError, build, parse_type

__all__ = ["RootSystem", "RootSystemError", "build", "parse_type"]
__version__ = "0.1.0"
