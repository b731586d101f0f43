"""Exact pointfree topology at desk scale: finite order theory, finitely
presented frames, sublocales, a geometric-theory compiler, and certified
interval optimization over the rationals."""

__version__ = "0.1.0"
