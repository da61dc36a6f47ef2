"""Numerical verification of derivative contraction and Faber-Krahn type
bounds on the Fock space F^2_alpha."""

from .specfun import FockParams, kummer, laguerre_neg, expint_at_one
from .sequences import a_quad, a_recurrence_table, g_seq, sum_identity_residual, threshold_scan
from .inequality import PolynomialF, RadialProfile, faber_krahn_margin, sharpness_ratio

__all__ = [
    "FockParams",
    "kummer",
    "laguerre_neg",
    "expint_at_one",
    "a_quad",
    "a_recurrence_table",
    "g_seq",
    "sum_identity_residual",
    "threshold_scan",
    "PolynomialF",
    "RadialProfile",
    "faber_krahn_margin",
    "sharpness_ratio",
]

__version__ = "0.1.0"
