"""Scalar special functions: Laguerre at negative argument, Kummer 1F1,
E_k(1), and log-factorial helpers.

Everything here works in plain double precision. Arguments are kept in the
ranges where every series has positive terms, so no cancellation occurs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "FockParams",
    "laguerre_neg",
    "kummer",
    "expint_at_one",
    "e1_at_one",
    "log_factorial",
    "factorial_ratio",
    "KummerConvergenceError",
]

KUMMER_RTOL = 1e-16
KUMMER_MAX_TERMS = 10_000

_EXACT_TABLE_SIZE = 171  # float(k!) is finite for k <= 170


class KummerConvergenceError(RuntimeError):
    """The Kummer series did not reach its stopping criterion within the cap."""


@dataclass(frozen=True)
class FockParams:
    """Gaussian weight ``alpha`` and derivative order ``n``."""

    alpha: float
    n: int = 0

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be a positive finite real, got {self.alpha!r}")
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"n must be a non-negative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))


# ---------------------------------------------------------------------------
# log-factorials
# ---------------------------------------------------------------------------

def _build_log_factorial_table() -> tuple:
    # ln of the exactly representable integer k!, correctly rounded once
    return tuple(math.log(math.factorial(k)) if k > 1 else 0.0
                 for k in range(_EXACT_TABLE_SIZE))


_LOG_FACTORIAL = _build_log_factorial_table()


def log_factorial(k: int) -> float:
    """Return ln(k!) for integer k >= 0."""
    if k < 0 or int(k) != k:
        raise ValueError(f"log_factorial needs a non-negative integer, got {k!r}")
    k = int(k)
    if k < _EXACT_TABLE_SIZE:
        return _LOG_FACTORIAL[k]
    return math.lgamma(k + 1.0)


def factorial_ratio(num: list[int], den: list[int]) -> float:
    """prod(k! for k in num) / prod(k! for k in den), through logarithms."""
    return math.exp(sum(log_factorial(k) for k in num)
                    - sum(log_factorial(k) for k in den))


# ---------------------------------------------------------------------------
# Laguerre polynomials at negative argument
# ---------------------------------------------------------------------------

def laguerre_neg(n: int, x):
    """L_n(-x) = sum_k C(n, k) x^k / k!  for x >= 0.

    All summands are positive, so the sum is evaluated directly (Horner-free)
    and is backward stable. Accepts a float or a numpy array.
    """
    if n < 0 or int(n) != n:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    if _any_negative(x):
        raise ValueError("laguerre_neg is only defined here for x >= 0")
    term = 1.0 + 0.0 * x
    total = term
    for k in range(1, int(n) + 1):
        # C(n,k)/k! from C(n,k-1)/(k-1)!
        term = term * x * (n - k + 1) / (k * k)
        total = total + term
    return total


def _any_negative(x) -> bool:
    try:
        return bool((x < 0).any())
    except AttributeError:
        return x < 0


# ---------------------------------------------------------------------------
# Kummer confluent hypergeometric function
# ---------------------------------------------------------------------------

def kummer(a: int, b: int, x: float) -> float:
    """1F1(a; b; x) for positive integers a, b and real x >= 0.

    Power series with the term ratio (a+k) x / ((b+k)(k+1)); stops once a
    term drops below KUMMER_RTOL times the partial sum.
    """
    if a < 1 or b < 1:
        raise ValueError(f"kummer expects positive integer parameters, got a={a}, b={b}")
    if x < 0:
        raise ValueError("kummer is only implemented for x >= 0")
    term = 1.0
    total = 1.0
    for k in range(KUMMER_MAX_TERMS):
        term *= (a + k) * x / ((b + k) * (k + 1.0))
        total += term
        if term <= KUMMER_RTOL * total:
            return total
    raise KummerConvergenceError(
        f"1F1({a}; {b}; {x}) did not converge in {KUMMER_MAX_TERMS} terms")


# ---------------------------------------------------------------------------
# Exponential integral E_k(1)
# ---------------------------------------------------------------------------

def _e1_continued_fraction(x: float = 1.0, tol: float = 1e-16, max_iter: int = 200) -> float:
    # modified Lentz evaluation of E_1(x) = e^-x / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, max_iter):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < tol:
            return h * math.exp(-x)
    raise RuntimeError("continued fraction for E_1 failed to converge")


E1_AT_ONE = _e1_continued_fraction(1.0)


def e1_at_one() -> float:
    """E_1(1) = int_1^inf e^-t / t dt (continued-fraction seed)."""
    return E1_AT_ONE


@lru_cache(maxsize=None)
def _expint_table(k_max: int) -> tuple:
    values = [E1_AT_ONE]
    inv_e = math.exp(-1.0)
    for k in range(1, k_max):
        values.append((inv_e - values[-1]) / k)
    return tuple(values)


def expint_at_one(k: int) -> float:
    """E_k(1) = int_1^inf e^-t t^-k dt for integer k >= 1.

    Upward recurrence E_{k+1}(1) = (1/e - E_k(1)) / k from the E_1 seed.
    Relative errors shrink by roughly 1/k per step, so this is stable.
    """
    if k < 1 or int(k) != k:
        raise ValueError(f"expint_at_one needs an integer k >= 1, got {k!r}")
    k = int(k)
    size = 64
    while size < k:
        size *= 2
    return _expint_table(size)[k - 1]
