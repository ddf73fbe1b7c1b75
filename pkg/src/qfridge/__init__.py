"""Steady-state simulator for noise-driven quantum absorption refrigerators."""

__version__ = "0.1.0"
