"""Finite category theory toolkit for sketches, barrels and loose bimodules."""

__version__ = "0.1.0"
