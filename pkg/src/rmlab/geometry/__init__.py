"""Curve, quadric varieties and point-count bounds behind the MRD obstruction (odd q only)."""

from .bounds import (CafureMateraBound, cafure_matera, crossover, min_q,
                     smallest_odd_prime_power_above)
from .curve import (CurveParams, CurvePoints, Witness, beta_from_alpha, curve_points,
                    genus, hasse_weil_window, witness_conditions, witness_from_point)
from .varieties import (QuadraticFormSystem, build_variety_V, build_variety_W,
                        coherence_check, correspondence_check, dimension_witness_check,
                        enumerate_W, lift_to_curve)

__all__ = [
    "CafureMateraBound", "cafure_matera", "crossover", "min_q", "smallest_odd_prime_power_above",
    "CurveParams", "CurvePoints", "Witness", "beta_from_alpha", "curve_points", "genus",
    "hasse_weil_window", "witness_conditions", "witness_from_point",
    "QuadraticFormSystem", "build_variety_V", "build_variety_W", "coherence_check",
    "correspondence_check", "dimension_witness_check", "enumerate_W", "lift_to_curve",
]
