"""Exact arithmetic layer: rationals, valuations, lattices, hulls and cones."""

from .numbers import (INF, Explicit, PAdic, Rational, fmt_rational, parse_ext,
                      to_rational, valuate)
from .linalg import hermite_unimodular_complete
from .hull import LowerFacet, convex_hull, lower_hull

__all__ = [
    "INF", "Explicit", "PAdic", "Rational", "fmt_rational", "parse_ext",
    "to_rational", "valuate", "hermite_unimodular_complete", "LowerFacet",
    "convex_hull", "lower_hull",
]
