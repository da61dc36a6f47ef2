"""The a_k / A(p) sequence (quadrature and recurrence), the g_k sequence, the
partition identity behind the recurrence, and threshold scans.

A(p) for derivative order n is

    A(p) = p! / (n! ((p-n)!)^2) * int_0^inf e^-r r^(p-n) / L_n(-r) dr,  p >= n,

the ratio of the weighted derivative mass of w^p to its Fock norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .quadrature import integrate_ratio
from .specfun import expint_at_one, log_factorial

__all__ = [
    "SequenceRecord",
    "GSequence",
    "SequenceValue",
    "a_quad",
    "a_quad_value",
    "recurrence_coefficients",
    "a_recurrence_table",
    "g_seq",
    "sum_identity_residual",
    "threshold_scan",
    "crossing_pattern",
    "VERIFIED_MAX_N",
    "RECURRENCE_TOL",
]

VERIFIED_MAX_N = 4
_EPS = 2.220446049250313e-16
RECURRENCE_TOL = 1e-7

# record statuses
VERIFIED = "VERIFIED"
INCONCLUSIVE = "INCONCLUSIVE"
VIOLATION = "CONJECTURE-VIOLATION"
EXPLORATORY = "EXPLORATORY"
BOUNDARY = "BOUNDARY"
RECURRENCE_MISMATCH = "RECURRENCE-MISMATCH"


@dataclass(frozen=True)
class SequenceValue:
    value: float
    error_estimate: float
    warning: Optional[str] = None


@dataclass(frozen=True)
class SequenceRecord:
    """One (n, k) row.

    ``lower`` is k/(k+1) with k the argument of A; the shifted reading uses
    j = k - n + 1 and is kept alongside as ``lower_shifted``.
    """

    n: int
    k: int
    a_quad: float
    error_estimate: float
    a_rec: Optional[float]
    lower: float
    lower_shifted: float
    below_one: bool
    above_lower: bool
    above_lower_shifted: bool
    status: str
    flagged: bool = False

    @property
    def gap(self) -> float:
        return 1.0 - self.a_quad


@dataclass(frozen=True)
class GSequence:
    k: int
    g: float


def _prefactor_times_factorial(n: int, k: int) -> float:
    # k! / (n! ((k-n)!)^2) * (k-n)!  =  C(k, n)
    return math.exp(log_factorial(k) - log_factorial(n) - log_factorial(k - n))


@lru_cache(maxsize=4096)
def a_quad_value(n: int, k: int) -> SequenceValue:
    """a_k(n) by Gauss-Laguerre, with the propagated quadrature error."""
    if n < 0 or k < n:
        raise ValueError(f"a_quad needs 0 <= n <= k, got n={n}, k={k}")
    est = integrate_ratio(k - n, n, normalize=True)
    pref = _prefactor_times_factorial(n, k)
    value = pref * est.value
    # rounding floor: exp() of arguments of size ln k! loses ~ln(k!) ulps
    err = pref * est.error_estimate + (8 + log_factorial(k)) * _EPS * abs(value)
    return SequenceValue(value, err, est.warning)


def a_quad(n: int, k: int) -> float:
    """a_k(n) = k!/(n! (k-n)!^2) int_0^inf e^-r r^(k-n) / L_n(-r) dr."""
    return a_quad_value(n, k).value


def recurrence_coefficients(k: int, n: int) -> tuple[float, list[float]]:
    """C(k, n) and [C_h(k, n) for h < n] of the upward recurrence

        A(k+n) = C(k, n) - sum_{h<n} C_h(k, n) A(k+h),   k >= n.
    """
    if k < n:
        raise ValueError("recurrence needs k >= n")
    lf = log_factorial
    c = math.exp(lf(k - n) + lf(k + n) - 2 * lf(k))
    ch = [math.exp(2 * lf(h + k - n) + 2 * lf(n) + lf(k + n)
                   - 2 * lf(h) - 2 * lf(k) - lf(h + k) - lf(n - h))
          for h in range(n)]
    return c, ch


def _status(n: int, a: float, err: float) -> tuple[bool, str]:
    below = (1.0 - a) > err
    if n == 0:
        return below, BOUNDARY
    if n > VERIFIED_MAX_N:
        return below, EXPLORATORY
    if below:
        return True, VERIFIED
    if a >= 1.0 + err:
        return False, VIOLATION
    return False, INCONCLUSIVE


def _record(n: int, k: int, sv: SequenceValue, a_rec: Optional[float] = None) -> SequenceRecord:
    below, status = _status(n, sv.value, sv.error_estimate)
    lower = k / (k + 1.0)
    j = k - n + 1
    lower_shifted = j / (j + 1.0)
    flagged = False
    if a_rec is not None and abs(a_rec - sv.value) > RECURRENCE_TOL:
        flagged = True
        if n <= VERIFIED_MAX_N:
            status = RECURRENCE_MISMATCH
    return SequenceRecord(
        n=n, k=k, a_quad=sv.value, error_estimate=sv.error_estimate, a_rec=a_rec,
        lower=lower, lower_shifted=lower_shifted, below_one=below,
        above_lower=sv.value > lower, above_lower_shifted=sv.value > lower_shifted,
        status=status, flagged=flagged)


def a_recurrence_table(n: int, k_max: int) -> list[SequenceRecord]:
    """A(p) for n <= p <= k_max: quadrature seeds at p < 2n, recurrence after.

    Each record also carries a fresh quadrature value; a disagreement larger
    than RECURRENCE_TOL marks the record ``flagged``.
    """
    if n < 1:
        raise ValueError("the recurrence table needs n >= 1")
    if k_max < 2 * n:
        raise ValueError(f"k_max must be at least 2n = {2 * n}")
    quad = {p: a_quad_value(n, p) for p in range(n, k_max + 1)}
    rec: dict[int, float] = {p: quad[p].value for p in range(n, 2 * n)}
    for k in range(n, k_max - n + 1):
        c, ch = recurrence_coefficients(k, n)
        rec[k + n] = c - math.fsum(ch[h] * rec[k + h] for h in range(n))
    return [_record(n, p, quad[p], rec[p] if p >= 2 * n else None)
            for p in range(n, k_max + 1)]


def g_seq(k_max: int) -> list[GSequence]:
    """g_k = k e E_k(1) via g_{k+1} = (k+1)(k - g_k)/k^2 from g_1 = e E_1(1)."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    g = math.e * expint_at_one(1)
    out = [GSequence(1, g)]
    for k in range(1, k_max):
        g = (k + 1) * (k - g) / (k * k)
        out.append(GSequence(k + 1, g))
    return out


def sum_identity_residual(n: int, k: int, values: Sequence[float]) -> float:
    """Normalized residual of

        sum_{h=0}^{n} A(h+k) (h+k-n)!^2 / (h!^2 (h+k)! (n-h)!) = (k-n)! / n!^2,

    given values = [A(k), ..., A(k+n)]. Returns (LHS - RHS) / RHS.
    """
    if k < n:
        raise ValueError("identity needs k >= n")
    if len(values) != n + 1:
        raise ValueError(f"need n+1 = {n + 1} values, got {len(values)}")
    lf = log_factorial
    log_rhs = lf(k - n) - 2 * lf(n)
    terms = [values[h] * math.exp(2 * lf(h + k - n) - 2 * lf(h) - lf(h + k) - lf(n - h) - log_rhs)
             for h in range(n + 1)]
    return math.fsum(terms) - 1.0


def threshold_scan(n: int, k_max: int) -> list[SequenceRecord]:
    """Records for n <= k <= k_max with the a < 1 and k/(k+1) flags.

    Statuses: VERIFIED / INCONCLUSIVE / CONJECTURE-VIOLATION for 1 <= n <= 4,
    EXPLORATORY for n > 4, BOUNDARY for n = 0 (where a_k is identically 1).
    For n >= 1 and k_max >= 2n the recurrence value is attached as well.
    """
    if n < 0 or k_max < n:
        raise ValueError(f"need 0 <= n <= k_max, got n={n}, k_max={k_max}")
    if n >= 1 and k_max >= 2 * n:
        return a_recurrence_table(n, k_max)
    return [_record(n, k, a_quad_value(n, k)) for k in range(n, k_max + 1)]


def crossing_pattern(n: int, j_max: int, convention: str = "argument") -> list[tuple[int, float, int]]:
    """(j, A, sign(A - j/(j+1))) for j = 1..j_max under an index convention.

    "argument": j is the argument p of A(p). For p < n the factor
    1/Gamma(1+p-n)^2 vanishes while the integral has only a simple pole, so
    A(p) = 0 there.
    "shifted": j = p - n + 1, so j = 1 is the first defined entry A(n).
    """
    out = []
    for j in range(1, j_max + 1):
        if convention == "argument":
            a = a_quad(n, j) if j >= n else 0.0
        elif convention == "shifted":
            a = a_quad(n, j + n - 1)
        else:
            raise ValueError(f"unknown convention {convention!r}")
        diff = a - j / (j + 1.0)
        out.append((j, a, (diff > 0) - (diff < 0)))
    return out

