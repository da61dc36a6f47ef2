"""Radial densities of polynomial f in the Fock space, local masses over
disks and annuli, the (1 - e^{-(n+1)s}) bound, super-level sets, pointwise
bounds and the sharpness ratio J(R, m).

Conventions
-----------
Masses are normalized by alpha/pi, i.e. mass(Omega) = (alpha/pi) int_Omega u dA,
and the measure of a radial set is s = alpha (r_hi^2 - r_lo^2), so a disk of
radius R has s = alpha R^2. For alpha = pi this is the Lebesgue measure.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaincc, logsumexp

from .quadrature import integrate_radial, integrate_interval
from .sequences import a_quad
from .specfun import FockParams, laguerre_neg, log_factorial

__all__ = [
    "PolynomialF",
    "RadialProfile",
    "LevelSet",
    "BathtubTrial",
    "BathtubReport",
    "PrecisionWarning",
    "NonUnimodalProfileError",
    "fock_norm_sq",
    "taylor_tail_norm_sq",
    "local_mass",
    "outer_mass",
    "global_mass_coefficient",
    "global_mass_identity",
    "faber_krahn_bound",
    "faber_krahn_margin",
    "superlevel_set",
    "bathtub_check",
    "random_annuli",
    "pointwise_bound_ratio",
    "kernel_polynomial",
    "sharpness_ratio",
    "auto_sharpness_radius",
]

TAIL_RTOL = 1e-10
LEVEL_SET_TOL = 1e-10
BATHTUB_TOL = 1e-10
SCAN_POINTS = 10_000
PHASES = 64


class PrecisionWarning(UserWarning):
    """A numerical tolerance could not be certified."""


class NonUnimodalProfileError(ValueError):
    """The radial profile has more than one local maximum on the scan grid."""


# ---------------------------------------------------------------------------
# polynomials and norms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolynomialF:
    """f(w) = sum_k c_k w^k with complex coefficients."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("a polynomial needs at least one coefficient")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def monomial(cls, m: int, c: complex = 1.0) -> "PolynomialF":
        return cls((0.0,) * m + (c,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def derivative_coefficients(self, n: int) -> np.ndarray:
        """Coefficients of f^(n): c_k k!/(k-n)! for k >= n."""
        out = [c * math.exp(log_factorial(k) - log_factorial(k - n))
               for k, c in enumerate(self.coefficients) if k >= n]
        return np.array(out or [0.0], dtype=complex)

    def derivative(self, n: int, z):
        """f^(n)(z) for scalar or array z."""
        coeffs = self.derivative_coefficients(n)
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), coeffs)


def _norm_terms(f: PolynomialF, alpha: float) -> list:
    return [abs(c) ** 2 * math.exp(log_factorial(k) - k * math.log(alpha))
            for k, c in enumerate(f.coefficients)]


def fock_norm_sq(f: PolynomialF, alpha: float) -> float:
    """||f||^2_{2,alpha} = sum_k |c_k|^2 k! alpha^-k."""
    return math.fsum(_norm_terms(f, alpha))


def taylor_tail_norm_sq(f: PolynomialF, alpha: float, n: int) -> float:
    """||f - T_n f||^2 where T_n f keeps the powers below n."""
    return math.fsum(_norm_terms(f, alpha)[n:])


# ---------------------------------------------------------------------------
# radial profile
# ---------------------------------------------------------------------------

class RadialProfile:
    """Phase-averaged density

        u_n(r) = sum_k |c_k k!/(k-n)!|^2 r^{2(k-n)} e^{-alpha r^2}
                 / (alpha^n n! L_n(-alpha r^2)),

    evaluated through logarithms so large degrees and radii stay finite.
    """

    def __init__(self, f: PolynomialF, params: FockParams):
        self.f = f
        self.params = params
        n = params.n
        self._log_b = []
        self._pow = []
        for k, c in enumerate(f.coefficients):
            if k < n or c == 0:
                continue
            self._log_b.append(2 * math.log(abs(c)) + 2 * (log_factorial(k) - log_factorial(k - n)))
            self._pow.append(2 * (k - n))
        self._log_b = np.array(self._log_b)
        self._pow = np.array(self._pow, dtype=float)
        self._log_const = -n * math.log(params.alpha) - log_factorial(n)

    @property
    def is_zero(self) -> bool:
        return self._log_b.size == 0

    def log_u(self, r):
        r = np.asarray(r, dtype=float)
        if self.is_zero:
            return np.full(r.shape, -np.inf)
        alpha = self.params.alpha
        with np.errstate(divide="ignore", invalid="ignore"):
            log_r = np.log(r)[..., None]
            powers = np.where(self._pow == 0, 0.0, self._pow * log_r)
        log_poly = logsumexp(self._log_b + powers, axis=-1)
        x = alpha * r * r
        return log_poly - x + self._log_const - np.log(laguerre_neg(self.params.n, x))

    def u(self, r):
        return np.exp(self.log_u(r))

    def mode_scan(self, r_max: float, points: int = SCAN_POINTS):
        """Grid, log u on it, index of the maximum and the number of changes
        of direction of the discrete derivative."""
        grid = np.linspace(0.0, r_max, points)
        lu = self.log_u(grid)
        d = np.diff(lu)
        scale = np.max(np.abs(lu[np.isfinite(lu)])) if np.any(np.isfinite(lu)) else 1.0
        # ignore rounding-level flat spots
        signs = np.sign(np.where(np.abs(d) <= 1e-13 * max(scale, 1.0), 0.0, d))
        signs = signs[signs != 0]
        changes = int(np.count_nonzero(np.diff(signs)))
        return grid, lu, int(np.argmax(lu)), changes

    def scan_radius(self, s: float = 0.0) -> float:
        """A radius comfortably past the peak and past a disk of measure s."""
        n = self.params.n
        top = float(self._pow.max()) / 2 if self._pow.size else 0.0
        return math.sqrt((2 * top + n + s + 60.0) / self.params.alpha)


# ---------------------------------------------------------------------------
# masses
# ---------------------------------------------------------------------------

def local_mass(profile: RadialProfile, r_lo: float, r_hi: float) -> float:
    """(alpha/pi) int_{r_lo < |z| < r_hi} u_n dA."""
    if r_hi < r_lo:
        raise ValueError("need r_lo <= r_hi")
    if r_hi == r_lo:
        return 0.0
    est = integrate_radial(profile, r_lo, r_hi)
    if est.warning:
        warnings.warn(est.warning, PrecisionWarning, stacklevel=2)
    return est.value


def _log_tail_bound(profile: RadialProfile, r: float) -> float:
    """ln of an upper bound for the mass outside the disk |z| < r.

    Uses L_n(-x) >= 1, which leaves incomplete gamma integrals per monomial.
    """
    alpha = profile.params.alpha
    x = alpha * r * r
    logs = []
    for log_b, p in zip(profile._log_b, profile._pow):
        j = p / 2  # k - n
        q = gammaincc(j + 1, x)
        if q == 0:
            continue
        logs.append(log_b + profile._log_const - j * math.log(alpha)
                    + math.lgamma(j + 1) + math.log(q))
    if not logs:
        return -math.inf
    return float(logsumexp(logs))


def outer_mass(profile: RadialProfile, r: float, rtol: float = TAIL_RTOL) -> float:
    """(alpha/pi) int_{|z| > r} u_n dA, truncated where the tail bound
    certifies the remainder below rtol of the accumulated value."""
    if profile.is_zero:
        return 0.0
    alpha = profile.params.alpha
    lo = r
    hi = max(r * 1.5, profile.scan_radius() * 0.5, r + 1.0 / math.sqrt(alpha))
    total = 0.0
    err = 0.0
    for _ in range(200):
        est = integrate_interval(lambda x: 2.0 * alpha * profile.u(x) * x, lo, hi)
        total += est.value
        err += est.error_estimate
        bound = _log_tail_bound(profile, hi)
        if total > 0 and bound < math.log(rtol * total):
            return total
        if total == 0 and bound < -700:
            return 0.0
        lo, hi = hi, hi + max(1.0, 0.5 * hi)
    warnings.warn(f"outer_mass: tail not certified beyond r={hi}", PrecisionWarning, stacklevel=2)
    return total


def global_mass_coefficient(f: PolynomialF, params: FockParams) -> float:
    """sum_{k>=n} a_k(n) |c_k|^2 k! alpha^-k."""
    n = params.n
    terms = _norm_terms(f, params.alpha)
    return math.fsum(a_quad(n, k) * t for k, t in enumerate(terms) if k >= n and t)


def _deficit(f: PolynomialF, params: FockParams, from_k: int = 0) -> float:
    """||f - T_{from_k} f||^2 minus the full-plane mass, from coefficients."""
    n = params.n
    terms = _norm_terms(f, params.alpha)
    parts = []
    for k, t in enumerate(terms):
        if k < from_k or not t:
            continue
        if k < n:
            parts.append(t)
        elif n > 0:
            # a_k = 1 identically for n = 0
            parts.append((1.0 - a_quad(n, k)) * t)
    return math.fsum(parts)


def global_mass_identity(f: PolynomialF, params: FockParams) -> tuple[float, float]:
    """(full-plane mass by radial quadrature, the same mass from coefficients)."""
    if f.is_zero():
        raise ValueError("f must be nonzero")
    profile = RadialProfile(f, params)
    quad = outer_mass(profile, 0.0)
    return quad, global_mass_coefficient(f, params)


def faber_krahn_bound(f: PolynomialF, params: FockParams, s: float) -> float:
    """(1 - e^{-(n+1)s}) ||f||^2."""
    return -math.expm1(-(params.n + 1) * s) * fock_norm_sq(f, params.alpha)


def faber_krahn_margin(f: PolynomialF, params: FockParams, r_lo: float, r_hi: float,
                       against: str = "norm") -> float:
    """bound - mass for the annulus r_lo < |z| < r_hi (a disk when r_lo = 0).

    Evaluated as

        (N - full mass) + mass inside r_lo + mass outside r_hi - N e^{-(n+1)s}

    with N the squared norm, which is algebraically equal to bound - mass but
    keeps full relative accuracy when both are close to N. With
    ``against="constants"`` (n = 1 only) N is the squared distance from f to
    the constants.
    """
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if r_hi < r_lo or r_lo < 0:
        raise ValueError("need 0 <= r_lo <= r_hi")
    alpha, n = params.alpha, params.n
    if against == "norm":
        norm = fock_norm_sq(f, alpha)
        deficit = _deficit(f, params, 0)
    elif against == "constants":
        if n != 1:
            raise ValueError("the distance-to-constants form is checked for n = 1 only")
        norm = taylor_tail_norm_sq(f, alpha, 1)
        deficit = _deficit(f, params, 1)
    else:
        raise ValueError(f"unknown normalization {against!r}")
    s = alpha * (r_hi * r_hi - r_lo * r_lo)
    profile = RadialProfile(f, params)
    inner = local_mass(profile, 0.0, r_lo) if r_lo > 0 else 0.0
    outer = outer_mass(profile, r_hi)
    return math.fsum([deficit, inner, outer, -norm * math.exp(-(n + 1) * s)])


# ---------------------------------------------------------------------------
# super-level sets and the bathtub comparison
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LevelSet:
    t: float
    inner_radius: float
    outer_radius: float
    normalized_measure: float


def superlevel_set(profile: RadialProfile, s: float) -> LevelSet:
    """The set {u > t} of normalized measure s, for a unimodal radial profile.

    The profile is checked for a single peak on a SCAN_POINTS grid. The outer
    radius is found by root finding on the measure as a function of the outer
    radius; the inner radius is the matching level crossing before the peak.
    """
    if not s > 0 or not math.isfinite(s):
        raise ValueError(f"measure s must be positive and finite, got {s!r}")
    if profile.is_zero:
        raise ValueError("profile is identically zero")
    alpha = profile.params.alpha
    r_scan = profile.scan_radius(s)
    grid, lu, imax, changes = profile.mode_scan(r_scan)
    if changes > 1:
        raise NonUnimodalProfileError(
            f"profile changes direction {changes} times on [0, {r_scan:.4g}]; "
            "super-level sets may not be annuli")
    # refine the mode between neighbouring grid points
    if imax == 0:
        r_mode = 0.0
    else:
        lo, hi = grid[imax - 1], grid[min(imax + 1, grid.size - 1)]
        r_mode = _golden_max(profile.log_u, lo, hi)
    lu_mode = float(profile.log_u(r_mode))

    def inner_for(r_out: float) -> float:
        level = float(profile.log_u(r_out))
        if r_mode == 0.0 or float(profile.log_u(0.0)) >= level:
            return 0.0
        a = r_mode
        while float(profile.log_u(a)) >= level:
            a *= 0.5
        return brentq(lambda r: float(profile.log_u(r)) - level, a, r_mode, xtol=1e-15, rtol=4 * np.finfo(float).eps)

    def excess(r_out: float) -> float:
        r_in = inner_for(r_out)
        return alpha * (r_out * r_out - r_in * r_in) - s

    if r_mode == 0.0:
        r_out = math.sqrt(s / alpha)
        r_in = 0.0
    else:
        hi = max(r_mode * 2.0, math.sqrt(s / alpha) + r_mode)
        while excess(hi) < 0:
            hi *= 2.0
        if excess(r_mode) >= 0:
            r_out, r_in = r_mode, r_mode
        else:
            r_out = brentq(excess, r_mode, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            r_in = inner_for(r_out)
    measure = alpha * (r_out * r_out - r_in * r_in)
    if abs(measure - s) > LEVEL_SET_TOL * max(1.0, s):
        warnings.warn(f"super-level measure {measure!r} misses target {s!r}",
                      PrecisionWarning, stacklevel=2)
    t = float(profile.u(r_out)) if r_out > 0 else math.exp(lu_mode)
    return LevelSet(t=t, inner_radius=r_in, outer_radius=r_out, normalized_measure=measure)


def _golden_max(func, a: float, b: float, iters: int = 100) -> float:
    invphi = (math.sqrt(5) - 1) / 2
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = float(func(c)), float(func(d))
    for _ in range(iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = float(func(c))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = float(func(d))
        if b - a < 1e-15 * max(1.0, b):
            break
    return 0.5 * (a + b)


@dataclass(frozen=True)
class BathtubTrial:
    r_lo: float
    r_hi: float
    mass: float
    dominated: bool


@dataclass(frozen=True)
class BathtubReport:
    level_set: LevelSet
    level_mass: float
    trials: tuple
    tolerance: float

    @property
    def all_dominated(self) -> bool:
        return all(t.dominated for t in self.trials)

    @property
    def max_excess(self) -> float:
        """Largest trial mass minus the super-level mass (<= tolerance when all pass)."""
        return max((t.mass - self.level_mass for t in self.trials), default=-math.inf)


def bathtub_check(profile: RadialProfile, s: float, trial_sets: Sequence[tuple],
                  tolerance: float = BATHTUB_TOL) -> BathtubReport:
    """Compare the super-level mass with equal-measure radial trial sets."""
    alpha = profile.params.alpha
    level = superlevel_set(profile, s)
    level_mass = local_mass(profile, level.inner_radius, level.outer_radius)
    trials = []
    for r_lo, r_hi in trial_sets:
        measure = alpha * (r_hi * r_hi - r_lo * r_lo)
        if abs(measure - s) > 1e-8 * max(1.0, s):
            raise ValueError(f"trial ({r_lo}, {r_hi}) has measure {measure}, expected {s}")
        mass = local_mass(profile, r_lo, r_hi)
        trials.append(BathtubTrial(r_lo, r_hi, mass, mass <= level_mass + tolerance))
    return BathtubReport(level, level_mass, tuple(trials), tolerance)


def random_annuli(alpha: float, s: float, count: int, seed: int,
                  max_inner_measure: float = 10.0) -> list[tuple[float, float]]:
    """Seeded annuli of normalized measure s with random inner measure."""
    rng = np.random.default_rng(seed)
    out = []
    for sigma in rng.uniform(0.0, max_inner_measure, size=count):
        out.append((math.sqrt(sigma / alpha), math.sqrt((sigma + s) / alpha)))
    return out


# ---------------------------------------------------------------------------
# pointwise bound and sharpness
# ---------------------------------------------------------------------------

def pointwise_bound_ratio(f: PolynomialF, params: FockParams, z_modulus: float,
                          phases: int = PHASES) -> float:
    """max over a phase grid of |f^(n)(z)| divided by
    e^{alpha|z|^2/2} sqrt(alpha^n n! L_n(-alpha|z|^2)) ||f - T_n f||."""
    alpha, n = params.alpha, params.n
    tail = taylor_tail_norm_sq(f, alpha, n)
    if tail <= 0:
        raise ValueError("f - T_n f vanishes; the bound is trivial")
    theta = 2 * math.pi * np.arange(phases) / phases
    z = z_modulus * np.exp(1j * theta)
    x = alpha * z_modulus ** 2
    log_bound = (0.5 * x + 0.5 * (n * math.log(alpha) + log_factorial(n)
                                  + math.log(laguerre_neg(n, x))) + 0.5 * math.log(tail))
    values = np.abs(f.derivative(n, z))
    return float(np.max(values) * math.exp(-log_bound))


def kernel_polynomial(alpha: float, z0: complex, n: int = 0, terms: int = 80) -> PolynomialF:
    """Truncation of w^n e^{alpha conj(z0) w}, the extremal function for
    f^(n)(z0)."""
    coeffs = [0.0] * n
    c = 1.0 + 0j
    a = alpha * complex(z0).conjugate()
    for k in range(terms):
        coeffs.append(c)
        c = c * a / (k + 1)
    return PolynomialF(tuple(coeffs))


def auto_sharpness_radius(m: int, alpha: float) -> float:
    """R with alpha R^2 = m + 5."""
    return math.sqrt((m + 5) / alpha)


def sharpness_ratio(R: float, m: int, params: FockParams) -> float:
    """J(R, m) = mass of z^m on |z| < R divided by the bound.

    Near 1 it is computed as 1 - margin/bound so the gap to 1 survives
    rounding; small values use mass/bound directly.
    """
    if m < params.n:
        raise ValueError("sharpness ratio needs m >= n")
    if not R > 0:
        raise ValueError("R must be positive")
    f = PolynomialF.monomial(m)
    s = params.alpha * R * R
    bound = faber_krahn_bound(f, params, s)
    direct = local_mass(RadialProfile(f, params), 0.0, R) / bound
    if direct < 0.5:
        return direct
    return 1.0 - faber_krahn_margin(f, params, 0.0, R) / bound
