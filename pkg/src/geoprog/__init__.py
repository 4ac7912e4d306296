"""Geometric progressions in value sets of rational functions.

Exact constructions of witnesses for ``G(a, Q) = {a Q^i}`` inside the value
set of a rational function, together with a small elliptic-curve engine
(2-isogeny descent, sieved point search) used to decide membership for
``f(x, y) = (y^2 - x^3) / x`` and ``f(x, y) = y^2 - x^3``.
"""

from fractions import Fraction

__version__ = "0.1.0"

Rat = Fraction

__all__ = ["Rat", "__version__"]
