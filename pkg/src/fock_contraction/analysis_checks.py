"""Finite-difference checks of the two closed-form Laplacians:

* Delta log u = -4 alpha (1 + 1/(1 + alpha|z|^2)^2) for
  u = |f'|^2 e^{-alpha|z|^2} / (alpha (1 + alpha|z|^2)), f' zero-free;
* Delta log 1F1(1+n; 1; alpha|z|^2) = g(t), t = |z|^2, together with the
  sign of k(t) = (g(t) - 4 alpha (1+n)) F^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .inequality import PolynomialF
from .specfun import FockParams, kummer

__all__ = [
    "LaplacianSample",
    "delta_log_u_closed",
    "delta_log_u_fd",
    "log_kummer_laplacian_fd",
    "kummer_laplacian_closed",
    "k_function",
    "k_dual_discrepancy",
    "five_point_laplacian",
    "sample_delta_log_u",
    "sample_kummer_laplacian",
    "extrapolated",
    "grid_values",
    "richardson",
    "convergence_order",
    "T_GRID",
    "FD_STEPS",
]

T_GRID = (0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0)
FD_STEPS = (1e-2, 5e-3, 2.5e-3)
MIN_DERIVATIVE_MODULUS = 1e-6


@dataclass(frozen=True)
class LaplacianSample:
    r: float
    closed_form: float
    finite_difference: float
    step: float

    @property
    def error(self) -> float:
        return abs(self.closed_form - self.finite_difference)


def five_point_laplacian(func: Callable[[float, float], float], x: float, y: float, h: float) -> float:
    centre = func(x, y)
    ring = func(x + h, y) + func(x - h, y) + func(x, y + h) + func(x, y - h)
    return (ring - 4.0 * centre) / (h * h)


def richardson(values: Sequence[float]) -> float:
    """Extrapolate O(h^2) values taken at steps h, h/2, h/4 (removes the
    h^2 and h^4 error terms)."""
    if len(values) != 3:
        raise ValueError("richardson expects values at three halving steps")
    l1, l2, l3 = values
    r1 = (4.0 * l2 - l1) / 3.0
    r2 = (4.0 * l3 - l2) / 3.0
    return (16.0 * r2 - r1) / 15.0


def convergence_order(errors: Sequence[float]) -> float:
    """Observed order from errors at successively halved steps (worst pair)."""
    orders = [math.log2(a / b) for a, b in zip(errors, errors[1:]) if a > 0 and b > 0]
    return min(orders) if orders else math.inf


# ---------------------------------------------------------------------------
# n = 1: Delta log u
# ---------------------------------------------------------------------------

def delta_log_u_closed(alpha: float, r: float) -> float:
    return -4.0 * alpha * (1.0 + 1.0 / (1.0 + alpha * r * r) ** 2)


def _log_u_first_derivative(f: PolynomialF, alpha: float) -> Callable[[float, float], float]:
    def log_u(x: float, y: float) -> float:
        z = complex(x, y)
        d = abs(complex(f.derivative(1, z)))
        if d < MIN_DERIVATIVE_MODULUS:
            raise ValueError(f"f' vanishes (|f'| = {d:.3g}) near z = {z}")
        rho = x * x + y * y
        return 2.0 * math.log(d) - alpha * rho - math.log(alpha) - math.log1p(alpha * rho)
    return log_u


def delta_log_u_fd(f: PolynomialF, alpha: float, x: float, y: float, step: float) -> float:
    """5-point Laplacian of log u at (x, y), u built from f'."""
    return five_point_laplacian(_log_u_first_derivative(f, alpha), x, y, step)


# ---------------------------------------------------------------------------
# general n: Laplacian of log 1F1(1+n; 1; alpha |z|^2)
# ---------------------------------------------------------------------------

def _g_times_f_sq(params: FockParams, t: float) -> tuple[float, float]:
    """(g(t) F1^2, F1) with F1 = 1F1(1+n; 1; alpha t)."""
    n, alpha = params.n, params.alpha
    x = alpha * t
    f1 = kummer(1 + n, 1, x)
    f2 = kummer(2 + n, 2, x)
    f3 = kummer(3 + n, 3, x)
    bracket = -2.0 * (1 + n) * x * f2 * f2 + f1 * (2.0 * f2 + (2 + n) * x * f3)
    return 2.0 * (1 + n) * alpha * bracket, f1


def kummer_laplacian_closed(params: FockParams, t: float) -> float:
    """g(t) = Delta log 1F1(1+n; 1; alpha(x^2+y^2)) at x^2 + y^2 = t."""
    if t < 0:
        raise ValueError("t must be non-negative")
    gf2, f1 = _g_times_f_sq(params, t)
    return gf2 / (f1 * f1)


def log_kummer_laplacian_fd(params: FockParams, x: float, y: float, step: float) -> float:
    n, alpha = params.n, params.alpha

    def log_f(a: float, b: float) -> float:
        return math.log(kummer(1 + n, 1, alpha * (a * a + b * b)))

    return five_point_laplacian(log_f, x, y, step)


def k_function(params: FockParams, t: float) -> tuple[float, float]:
    """(closed form, from definition) of k(t).

    closed form:  -4 alpha^2 n t F[1+n,2,at] (F[1+n,1,at] + n F[1+n,2,at])
    definition:   g(t) F[1+n,1,at]^2 - 4 alpha (1+n) F[1+n,1,at]^2
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    n, alpha = params.n, params.alpha
    x = alpha * t
    f1 = kummer(1 + n, 1, x)
    f12 = kummer(1 + n, 2, x)
    closed = -4.0 * alpha * alpha * n * t * f12 * (f1 + n * f12)
    gf2, _ = _g_times_f_sq(params, t)
    definition = gf2 - 4.0 * alpha * (1 + n) * f1 * f1
    return closed, definition


def k_dual_discrepancy(params: FockParams, t: float) -> float:
    """Relative gap between the two k(t) paths.

    Where the closed form vanishes identically (t = 0 or n = 0) the definition
    path is pure cancellation noise, so it is measured against the size of the
    cancelled terms 4 alpha (1+n) F^2 instead.
    """
    closed, definition = k_function(params, t)
    if closed != 0.0:
        return abs(closed - definition) / max(abs(closed), abs(definition))
    f1 = kummer(1 + params.n, 1, params.alpha * t)
    return abs(definition) / (4.0 * params.alpha * (1 + params.n) * f1 * f1)


def sample_delta_log_u(f: PolynomialF, alpha: float, x: float, y: float,
                       steps: Sequence[float] = FD_STEPS) -> list[LaplacianSample]:
    r = math.hypot(x, y)
    closed = delta_log_u_closed(alpha, r)
    return [LaplacianSample(r, closed, delta_log_u_fd(f, alpha, x, y, h), h) for h in steps]


def sample_kummer_laplacian(params: FockParams, x: float, y: float,
                            steps: Sequence[float] = FD_STEPS) -> list[LaplacianSample]:
    t = x * x + y * y
    closed = kummer_laplacian_closed(params, t)
    return [LaplacianSample(math.sqrt(t), closed, log_kummer_laplacian_fd(params, x, y, h), h)
            for h in steps]


def extrapolated(samples: Sequence[LaplacianSample]) -> float:
    return richardson([s.finite_difference for s in samples])


def grid_values(params: FockParams, ts: Sequence[float] = T_GRID) -> np.ndarray:
    """g(t) on a t grid."""
    return np.array([kummer_laplacian_closed(params, t) for t in ts])
