"""Gauss-Laguerre rules for int_0^inf e^-r g(r) dr and an adaptive panel
integrator for radial masses over disks and annuli.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .specfun import laguerre_neg, log_factorial

__all__ = [
    "QuadratureRule",
    "IntegralEstimate",
    "RuleConstructionError",
    "gauss_laguerre_rule",
    "integrate_ratio",
    "integrate_radial",
    "default_order",
    "DEFAULT_ORDER",
    "MAX_ORDER",
]

DEFAULT_ORDER = 128
MAX_ORDER = 256
RATIO_PRECISION_RTOL = 1e-9

NEWTON_MAX_ITER = 50
NEWTON_RTOL = 1e-11
PANEL_ORDER = 20
PANEL_RTOL = 1e-12
PANEL_CAP = 10_000


class RuleConstructionError(RuntimeError):
    """Newton polishing of the Laguerre roots failed to converge."""


@dataclass(frozen=True)
class QuadratureRule:
    order: int
    nodes: np.ndarray
    weights: np.ndarray
    log_weights: np.ndarray = field(repr=False)

    def apply(self, func: Callable[[np.ndarray], np.ndarray]) -> float:
        """Sum w_i func(x_i)."""
        return float(np.dot(self.weights, func(self.nodes)))


@dataclass(frozen=True)
class IntegralEstimate:
    """An integral value with a non-negative error estimate.

    The represented integral is ``value * exp(log_scale)``; ``log_scale`` is
    non-zero only for normalized results that would overflow otherwise.
    """

    value: float
    error_estimate: float
    log_scale: float = 0.0
    warning: Optional[str] = None

    @property
    def relative_error(self) -> float:
        if self.value == 0:
            return 0.0 if self.error_estimate == 0 else math.inf
        return self.error_estimate / abs(self.value)


# ---------------------------------------------------------------------------
# Gauss-Laguerre
# ---------------------------------------------------------------------------

def _laguerre_pair_scaled(order: int, x: np.ndarray):
    """Return L_N(x)/S, D_N(x)/S and ln S, where D_N = L_N - L_{N-1}.

    Runs the recurrence in difference form,
    (j+1) D_{j+1} = j D_j - x L_j,  L_{j+1} = L_j + D_{j+1},
    which avoids the cancellation of the three-term form near x = 0. S is a
    per-node rescaling that keeps large-x values inside double range.
    """
    p = np.ones_like(x)
    d = np.zeros_like(x)
    log_scale = np.zeros_like(x)
    for j in range(order):
        d = (j * d - x * p) / (j + 1)
        p = p + d
        big = np.maximum(np.abs(p), np.abs(d))
        rescale = big > 1e100
        if rescale.any():
            s = np.where(rescale, big, 1.0)
            p = p / s
            d = d / s
            log_scale = log_scale + np.log(s)
    return p, d, log_scale


@lru_cache(maxsize=32)
def gauss_laguerre_rule(order: int = DEFAULT_ORDER) -> QuadratureRule:
    """Nodes and weights of the order-N Gauss-Laguerre rule (weight e^-r).

    Initial node guesses come from the Jacobi matrix eigenvalues; each node is
    then polished by Newton iteration on L_N. Weights use
    w_i = x_i / (N L_{N-1}(x_i))^2, evaluated in logs so large-N weights
    down to ~1e-400 keep full relative accuracy.
    """
    if int(order) != order or not 1 <= order <= MAX_ORDER:
        raise ValueError(f"Gauss-Laguerre order must be in [1, {MAX_ORDER}], got {order!r}")
    order = int(order)
    j = np.arange(order, dtype=float)
    x = eigh_tridiagonal(2 * j + 1, j[1:] + 0.0, eigvals_only=True)
    x = np.sort(x)

    for _ in range(NEWTON_MAX_ITER):
        p, d, _ = _laguerre_pair_scaled(order, x)
        # L_N'(x) = N (L_N - L_{N-1}) / x
        step = x * p / (order * d)
        x = x - step
        if np.all(np.abs(step) <= NEWTON_RTOL * x):
            # quadratic convergence: one more step reaches rounding level
            p, d, _ = _laguerre_pair_scaled(order, x)
            x = x - x * p / (order * d)
            break
    else:
        raise RuleConstructionError(
            f"Newton iteration for Gauss-Laguerre order {order} did not converge")

    if np.any(np.diff(x) <= 0) or np.any(x <= 0):
        raise RuleConstructionError(f"Gauss-Laguerre order {order}: nodes not strictly increasing")

    # at a root L_{N-1} = -D_N
    _, d, log_s = _laguerre_pair_scaled(order, x)
    log_w = np.log(x) - 2.0 * (math.log(order) + np.log(np.abs(d)) + log_s)
    # renormalize so that sum(w) == 1 to rounding
    shift = np.log(np.exp(log_w).sum())
    log_w = log_w - shift
    w = np.exp(log_w)
    for arr in (x, w, log_w):
        arr.setflags(write=False)
    return QuadratureRule(order=order, nodes=x, weights=w, log_weights=log_w)


def default_order(m: int, n: int) -> int:
    """Smallest order allowed for integrate_ratio, raised to DEFAULT_ORDER."""
    need = math.ceil((m + n) / 2) + 10
    return min(MAX_ORDER, max(DEFAULT_ORDER, need))


def _ratio_sum(m: int, n: int, rule: QuadratureRule, normalize: bool) -> float:
    x = rule.nodes
    log_terms = rule.log_weights + m * np.log(x) - np.log(laguerre_neg(n, x))
    if normalize:
        log_terms = log_terms - log_factorial(m)
    return float(np.exp(log_terms).sum())


def integrate_ratio(m: int, n: int, rule: Optional[QuadratureRule] = None,
                    normalize: bool = False) -> IntegralEstimate:
    """I(m, n) = int_0^inf e^-r r^m / L_n(-r) dr by Gauss-Laguerre.

    The error estimate is the difference to the rule of twice the order
    (capped at MAX_ORDER; a MAX_ORDER rule is compared against order 192).
    With ``normalize=True`` the returned value is I(m, n) / m!, which stays
    O(1) for every m; ``log_scale`` then records ln m!.
    """
    if m < 0 or n < 0:
        raise ValueError("integrate_ratio needs m >= 0 and n >= 0")
    if rule is None:
        rule = gauss_laguerre_rule(default_order(m, n))
    if rule.order < (m + n) / 2 + 10:
        raise ValueError(f"rule order {rule.order} too small for m={m}, n={n}")
    other_order = min(2 * rule.order, MAX_ORDER)
    if other_order == rule.order:
        other_order = 3 * rule.order // 4
    value = _ratio_sum(m, n, rule, normalize=True)
    check = _ratio_sum(m, n, gauss_laguerre_rule(other_order), normalize=True)
    # the comparison rule is itself only accurate to rounding level
    err = abs(value - check) + 16 * np.finfo(float).eps * abs(check)
    warning = None
    if err > RATIO_PRECISION_RTOL * abs(value):
        warning = (f"integrate_ratio(m={m}, n={n}): order {rule.order} vs {other_order} "
                   f"differ by {err / abs(value):.2e} relative")
    if normalize:
        return IntegralEstimate(value, err, log_factorial(m), warning)
    scale = math.exp(log_factorial(m))
    return IntegralEstimate(value * scale, err * scale, 0.0, warning)


# ---------------------------------------------------------------------------
# finite-interval radial integration
# ---------------------------------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(PANEL_ORDER)


def _panel(func, a: float, b: float) -> float:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * float(np.dot(_GL_W, func(mid + half * _GL_X)))


def integrate_interval(func: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                       rtol: float = PANEL_RTOL, max_panels: int = PANEL_CAP) -> IntegralEstimate:
    """Adaptive bisection with a fixed Gauss-Legendre rule on each panel.

    A panel is accepted once its coarse and bisected values differ by less
    than ``rtol`` times the running magnitude of the integral. Panels are
    processed left to right, so the result is deterministic.
    """
    if b < a:
        raise ValueError("integrate_interval needs a <= b")
    if a == b:
        return IntegralEstimate(0.0, 0.0)
    whole = _panel(func, a, b)
    scale = abs(whole)
    stack = [(a, b, whole)]
    total = 0.0
    err = 0.0
    panels = 0
    warning = None
    while stack:
        lo, hi, coarse = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _panel(func, lo, mid)
        right = _panel(func, mid, hi)
        fine = left + right
        panels += 1
        resid = abs(fine - coarse)
        scale = max(scale, abs(total + fine))
        if resid <= rtol * scale or panels >= max_panels or mid in (lo, hi):
            if panels >= max_panels and resid > rtol * scale and warning is None:
                warning = f"panel cap {max_panels} reached on [{a}, {b}]"
            total += fine
            err += resid
            continue
        # right pushed first so the left half is processed next
        stack.append((mid, hi, right))
        stack.append((lo, mid, left))
    return IntegralEstimate(total, err, 0.0, warning)


def integrate_radial(profile, r_lo: float, r_hi: float) -> IntegralEstimate:
    """2 alpha int_{r_lo}^{r_hi} u(r) r dr for a radial profile.

    This is the normalized mass (alpha/pi) int u dA of the annulus
    r_lo < |z| < r_hi.
    """
    if r_lo < 0:
        raise ValueError("r_lo must be non-negative")
    if not math.isfinite(r_hi):
        raise ValueError("r_hi must be finite")
    if r_hi < r_lo:
        raise ValueError("need r_lo <= r_hi")
    alpha = profile.params.alpha
    return integrate_interval(lambda r: 2.0 * alpha * profile.u(r) * r, r_lo, r_hi)
