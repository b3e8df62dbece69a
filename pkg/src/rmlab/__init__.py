"""Rank-metric code laboratory for codes spanned by x and x^(q^s) + delta x^(q^(n/2+s))."""

__version__ = "0.1.0"
