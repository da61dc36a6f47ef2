"""The verification suite behind ``verify``: every check produces one or more
ReportItems with a measured value, the expected value or relation, the
tolerance, and a status."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import analysis_checks as ac
from .inequality import (
    PolynomialF,
    RadialProfile,
    auto_sharpness_radius,
    bathtub_check,
    faber_krahn_bound,
    faber_krahn_margin,
    global_mass_identity,
    kernel_polynomial,
    local_mass,
    pointwise_bound_ratio,
    random_annuli,
    sharpness_ratio,
    superlevel_set,
)
from .quadrature import DEFAULT_ORDER, MAX_ORDER, PANEL_ORDER
from .report import EXPLORATORY, FAIL, INCONCLUSIVE, PASS, ReportItem, VerificationReport
from .sequences import (
    a_quad,
    a_quad_value,
    a_recurrence_table,
    crossing_pattern,
    g_seq,
    sum_identity_residual,
    threshold_scan,
)
from .specfun import FockParams, e1_at_one, kummer, laguerre_neg

REFERENCE_N2_TABLE = {2: 0.427393, 3: 0.662691, 4: 0.784876, 5: 0.852841, 6: 0.893707, 7: 0.919951}
REFERENCE_G1 = 0.596347
REFERENCE_TOL = 5e-7

SWEEP_DISKS = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0)
SWEEP_ANNULI = ((0.1, 3.0), (0.25, 0.5), (0.5, 1.0), (0.5, 1.5), (1.0, 1.5), (1.0, 2.0),
                (1.5, 2.5), (2.0, 3.0), (2.0, 4.0), (3.0, 4.0), (3.0, 5.0), (4.0, 5.0))
SWEEP_ALPHAS = (1.0, math.pi)
SWEEP_MAX_M = 20

RANDOM_SEED = 20240611
BATHTUB_SEED = 7

HEADER = {
    "normalization": "s = alpha*|Omega|/pi (disk of radius R: s = alpha R^2); "
                     "mass = (alpha/pi) int_Omega u_n dA; bound = (1 - exp(-(n+1) s)) ||f||^2",
    "quadrature": f"Gauss-Laguerre order max({DEFAULT_ORDER}, ceil((m+n)/2)+10), error vs "
                  f"min(2N, {MAX_ORDER}); radial panels Gauss-Legendre {PANEL_ORDER}",
    "index_conventions": "argument: j = p (A(p) = 0 for p < n); shifted: j = p - n + 1",
}


@dataclass
class VerifyConfig:
    n: Optional[int] = None
    kmax: int = 200
    quick: bool = False

    def orders(self, default: Iterable[int]) -> list:
        return [self.n] if self.n is not None else list(default)


def _item(check_id, measured, expected, tol, ok, note="", status=None) -> ReportItem:
    return ReportItem(check_id, measured, expected, tol, status or (PASS if ok else FAIL), note)


# ---------------------------------------------------------------------------
# sequence checks
# ---------------------------------------------------------------------------

def check_reference_table(cfg: VerifyConfig) -> list:
    if cfg.n not in (None, 2):
        return []
    out = []
    for k, expected in REFERENCE_N2_TABLE.items():
        a = a_quad(2, k)
        out.append(_item(f"A01.reference_table.n2.k{k}", a, expected, REFERENCE_TOL,
                         abs(a - expected) <= REFERENCE_TOL))
    return out


def check_seed() -> list:
    g1 = math.e * e1_at_one()
    return [_item("A02.g1_seed", g1, REFERENCE_G1, REFERENCE_TOL, abs(g1 - REFERENCE_G1) <= REFERENCE_TOL)]


def check_below_one(cfg: VerifyConfig) -> list:
    out = []
    kmax = 60 if cfg.quick else cfg.kmax
    for n in cfg.orders(range(1, 5)):
        if n == 0 or n > kmax:
            continue
        records = threshold_scan(n, kmax)
        statuses = {r.status for r in records}
        worst = min(records, key=lambda r: r.gap - r.error_estimate)
        margin = worst.gap - worst.error_estimate
        note = f"k={n}..{kmax}; worst k={worst.k}"
        if n > 4:
            status = EXPLORATORY
        elif "CONJECTURE-VIOLATION" in statuses or "RECURRENCE-MISMATCH" in statuses:
            status = FAIL
        elif "INCONCLUSIVE" in statuses:
            status = INCONCLUSIVE
        else:
            status = PASS
        out.append(_item(f"A03.below_one.n{n}", margin, "> 0 (min of 1-a-err)", 0.0,
                         margin > 0, note, status))
    return out


def check_threshold_pattern(cfg: VerifyConfig) -> list:
    out = []
    if cfg.n in (None, 4):
        results = {}
        for conv in ("argument", "shifted"):
            signs = [s for _, _, s in crossing_pattern(4, 27, conv)]
            results[conv] = signs == [-1] * 16 + [1] * 11
        realized = [c for c, ok in results.items() if ok]
        out.append(_item("A04.threshold_pattern.n4", len(realized), ">= 1 convention", 0,
                         bool(realized), "realized: " + (",".join(realized) or "none")))
    if cfg.n in (None, 2):
        for conv in ("argument", "shifted"):
            first = next(j for j, _, s in crossing_pattern(2, 12, conv) if s > 0)
            out.append(_item(f"A04.crossing_index.n2.{conv}", first, "reported", "",
                             True, "first j with A > j/(j+1)", EXPLORATORY))
    return out


def check_recurrence(cfg: VerifyConfig) -> list:
    out = []
    pmax = min(cfg.kmax, 40 if cfg.quick else 80)
    for n in cfg.orders(range(1, 5)):
        if n == 0 or pmax < 2 * n:
            continue
        table = a_recurrence_table(n, pmax)
        diff = max(abs(r.a_rec - r.a_quad) for r in table if r.a_rec is not None)
        status = EXPLORATORY if n > 4 else None
        out.append(_item(f"A05.recurrence_vs_quadrature.n{n}", diff, 0.0, 1e-7, diff <= 1e-7,
                         f"p<={pmax}", status))
    return out


def check_sum_identity(cfg: VerifyConfig) -> list:
    out = []
    kmax = min(cfg.kmax, 60)
    for n in cfg.orders(range(0, 5)):
        worst = max(abs(sum_identity_residual(n, k, [a_quad(n, k + h) for h in range(n + 1)]))
                    for k in range(n, kmax + 1))
        status = EXPLORATORY if n > 4 else None
        out.append(_item(f"A06.sum_identity.n{n}", worst, 0.0, 1e-9, worst <= 1e-9,
                         f"k<={kmax}", status))
    g = g_seq(3)
    hand = abs(g[1].g / 2 + 2 * g[2].g / 3 - 1.0)
    out.append(_item("A06.sum_identity.hand_n1_k2", hand, 0.0, 1e-12, hand <= 1e-12,
                     "g_2/2 + 2 g_3/3 = 1"))
    return out


def check_kummer_laguerre() -> list:
    worst = 0.0
    for n in range(13):
        for r in np.linspace(0.0, 50.0, 101):
            ref = math.exp(r) * laguerre_neg(n, float(r))
            worst = max(worst, abs(kummer(n + 1, 1, float(r)) - ref) / ref)
    return [_item("A07.kummer_laguerre", worst, 0.0, 1e-12, worst <= 1e-12, "n<=12, r in [0,50]")]


# ---------------------------------------------------------------------------
# inequality checks
# ---------------------------------------------------------------------------

def check_equality_case() -> list:
    out = []
    params = FockParams(math.pi, 0)
    one = PolynomialF((1.0,))
    for R in (0.5, 1.0, 2.0):
        margin = faber_krahn_margin(one, params, 0.0, R)
        out.append(_item(f"A08.equality_case.R{R:g}", margin, 0.0, 1e-12, abs(margin) <= 1e-12))
    return out


def sweep_sets():
    return [(0.0, R) for R in SWEEP_DISKS] + list(SWEEP_ANNULI)


def check_sweep(cfg: VerifyConfig) -> list:
    """Monomials z^m, m <= 20, over the fixed 24 radial sets."""
    out = []
    sets = sweep_sets()
    max_m = 8 if cfg.quick else SWEEP_MAX_M
    for n in cfg.orders(range(0, 5)):
        worst_rel = math.inf
        worst_at = ""
        count = 0
        for alpha in SWEEP_ALPHAS:
            params = FockParams(alpha, n)
            for m in range(n, max_m + 1):
                if n == 0 and m == 0:
                    continue  # equality case, checked separately
                f = PolynomialF.monomial(m)
                for r_lo, r_hi in sets:
                    s = alpha * (r_hi ** 2 - r_lo ** 2)
                    rel = faber_krahn_margin(f, params, r_lo, r_hi) / faber_krahn_bound(f, params, s)
                    count += 1
                    if rel < worst_rel:
                        worst_rel = rel
                        worst_at = f"alpha={alpha:.6g} m={m} Omega=({r_lo:g},{r_hi:g})"
        status = EXPLORATORY if n > 4 else None
        out.append(_item(f"A09.faber_krahn_sweep.n{n}", worst_rel, "> 0 (min margin/bound)", 0.0,
                         worst_rel > 0, f"{count} points; worst {worst_at}", status))
    return out


def random_polynomial(rng: np.random.Generator, degree: int, alpha: float) -> PolynomialF:
    """Complex Gaussian coefficients scaled so every monomial has comparable norm."""
    k = np.arange(degree + 1)
    scale = np.exp(0.5 * (k * math.log(alpha) - np.array([math.lgamma(j + 1) for j in k])))
    c = (rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)) * scale
    return PolynomialF(tuple(c))


def check_random_margins(cfg: VerifyConfig) -> list:
    rng = np.random.default_rng(RANDOM_SEED)
    count = 2 if cfg.quick else 5
    polys = [random_polynomial(rng, 10, 1.0) for _ in range(count)]
    out = []
    for n in cfg.orders(range(0, 5)):
        params = FockParams(1.0, n)
        worst = math.inf
        for f in polys:
            for r_lo, r_hi in SWEEP_ANNULI:
                s = r_hi ** 2 - r_lo ** 2
                worst = min(worst, faber_krahn_margin(f, params, r_lo, r_hi)
                            / faber_krahn_bound(f, params, s))
        status = EXPLORATORY if n > 4 else None
        out.append(_item(f"A09.random_polynomials.n{n}", worst, "> 0 (min margin/bound)", 0.0,
                         worst > 0, f"{count} degree-10 polynomials, seed {RANDOM_SEED}", status))
    if cfg.n in (None, 1):
        params = FockParams(1.0, 1)
        worst = min(faber_krahn_margin(f, params, r_lo, r_hi, against="constants")
                    for f in polys for r_lo, r_hi in SWEEP_ANNULI)
        out.append(_item("A09.distance_to_constants.n1", worst, "> 0 (min margin)", 0.0,
                         worst > 0, "||f||^2 replaced by d^2(f, constants)"))
    return out


def check_global_mass(cfg: VerifyConfig) -> list:
    out = []
    rng = np.random.default_rng(RANDOM_SEED + 1)
    for n in cfg.orders(range(0, 5)):
        worst = 0.0
        for alpha in (1.0, math.pi):
            params = FockParams(alpha, n)
            for f in [PolynomialF.monomial(max(n, 3)), random_polynomial(rng, 20, alpha)]:
                quad, coeff = global_mass_identity(f, params)
                worst = max(worst, abs(quad - coeff) / coeff)
        status = EXPLORATORY if n > 4 else None
        out.append(_item(f"A09.global_mass_identity.n{n}", worst, 0.0, 1e-8, worst <= 1e-8,
                         "radial quadrature vs coefficient space", status))
    return out


def check_bathtub() -> list:
    params = FockParams(math.pi, 1)
    profile = RadialProfile(PolynomialF.monomial(3), params)
    s = 1.0
    disk = (0.0, math.sqrt(s / math.pi))
    rep = bathtub_check(profile, s, [disk] + random_annuli(math.pi, s, 20, BATHTUB_SEED))
    strict = rep.level_mass - rep.trials[0].mass
    return [
        _item("A10.bathtub.disk_strict", strict, "> 0 (level - disk mass)", 0.0, strict > 0,
              f"annulus ({rep.level_set.inner_radius:.6g}, {rep.level_set.outer_radius:.6g})"),
        _item("A10.bathtub.random_annuli", rep.max_excess, "<= tol (max trial - level mass)",
              rep.tolerance, rep.all_dominated, f"20 annuli, seed {BATHTUB_SEED}"),
    ]


# ---------------------------------------------------------------------------
# Laplacian identities
# ---------------------------------------------------------------------------

DELU_POINTS = ((1.0, 0.5, 1.0), (0.3, 0.2, math.pi), (1.2, -0.7, 0.5), (0.0, 0.0, 1.0))
KUMMER_POINTS = ((1.0, 0.5), (0.3, 0.2), (1.5, 1.0), (0.0, 0.0), (2.0, 1.0))
K_ALPHAS = (0.5, 1.0, math.pi)


def check_laplacians(cfg: VerifyConfig) -> list:
    out = []
    worst = 0.0
    order = math.inf
    for f in (PolynomialF((0.0, 1.0)), PolynomialF((0.0, 1.0, 0.1))):
        for x, y, alpha in DELU_POINTS:
            samples = ac.sample_delta_log_u(f, alpha, x, y)
            worst = max(worst, abs(ac.extrapolated(samples) - samples[0].closed_form))
            order = min(order, ac.convergence_order([s.error for s in samples]))
    out.append(_item("A11.laplacian_delu.richardson", worst, 0.0, 1e-8, worst <= 1e-8))
    out.append(_item("A11.laplacian_delu.order", order, ">= 1.9", 1.9, order >= 1.9))

    worst = 0.0
    order = math.inf
    for n in range(0, 9 if not cfg.quick else 5):
        for alpha in K_ALPHAS:
            params = FockParams(alpha, n)
            for x, y in KUMMER_POINTS:
                samples = ac.sample_kummer_laplacian(params, x, y)
                worst = max(worst, abs(ac.extrapolated(samples) - samples[0].closed_form))
                if n > 0:
                    # log F is exactly quadratic for n = 0: FD has no truncation error
                    order = min(order, ac.convergence_order([s.error for s in samples]))
    out.append(_item("A11.laplacian_kummer.richardson", worst, 0.0, 1e-8, worst <= 1e-8))
    out.append(_item("A11.laplacian_kummer.order", order, ">= 1.9", 1.9, order >= 1.9))

    k_max = -math.inf
    dual = 0.0
    g_excess = -math.inf
    ts = list(ac.T_GRID) + list(np.linspace(0.0, 20.0, 41))
    for n in range(0, 9):
        for alpha in K_ALPHAS:
            params = FockParams(alpha, n)
            g0 = 4 * alpha * (1 + n)
            for t in ts:
                closed, _ = ac.k_function(params, float(t))
                k_max = max(k_max, closed)
                dual = max(dual, ac.k_dual_discrepancy(params, float(t)))
                g_excess = max(g_excess, (ac.kummer_laplacian_closed(params, float(t)) - g0) / g0)
    k_max += 0.0  # fold -0.0
    out.append(_item("A11.k_function.sign", k_max, "<= 0", 0.0, k_max <= 0, "n<=8, t in [0,20]"))
    out.append(_item("A11.k_function.dual_path", dual, 0.0, 1e-9, dual <= 1e-9))
    out.append(_item("A11.kummer_laplacian.max_over_g0", g_excess, "<= 0 ((g-g(0))/g(0))", 1e-12,
                     g_excess <= 1e-12, "rounding allowance"))
    return out


# ---------------------------------------------------------------------------
# sharpness, limit and pointwise checks
# ---------------------------------------------------------------------------

def check_sharpness(cfg: VerifyConfig) -> list:
    out = []
    worst = -math.inf
    ms = (1, 2, 5, 10, 20) if cfg.quick else (1, 2, 3, 5, 10, 20, 35, 50)
    for n in cfg.orders(range(1, 5)):
        if n == 0:
            continue
        for alpha in (1.0, math.pi):
            params = FockParams(alpha, n)
            for m in ms:
                if m < n:
                    continue
                for R in (0.5, 1.0, 2.0, auto_sharpness_radius(m, alpha)):
                    worst = max(worst, sharpness_ratio(R, m, params))
    out.append(_item("A12.sharpness.below_one", worst, "< 1 (max J)", 0.0, worst < 1))

    params = FockParams(math.pi, 1)
    R = math.sqrt(55.0 / math.pi)
    j50 = sharpness_ratio(R, 50, params)
    out.append(_item("A12.sharpness.m50", j50, ">= 0.9", 0.9, j50 >= 0.9,
                     "n=1 alpha=pi R^2=55/pi"))
    for n in cfg.orders(range(1, 5)):
        if n == 0:
            continue
        a200 = a_quad_value(n, 200).value
        status = EXPLORATORY if n > 4 else None
        out.append(_item(f"A12.limit.n{n}", a200, ">= 0.99", 0.99, a200 >= 0.99, "a_200", status))
    return out


def check_pointwise(cfg: VerifyConfig) -> list:
    rng = np.random.default_rng(RANDOM_SEED + 2)
    polys = [random_polynomial(rng, 8, 1.0) for _ in range(3 if cfg.quick else 10)]
    worst = 0.0
    for n in range(0, 5):
        for alpha in (1.0, math.pi):
            params = FockParams(alpha, n)
            for f in polys:
                for rho in (0.0, 0.5, 1.0, 2.0):
                    worst = max(worst, pointwise_bound_ratio(f, params, rho))
    out = [_item("A13.pointwise.random", worst, "<= 1", 1e-10, worst <= 1 + 1e-10)]
    best = math.inf
    for n in range(0, 5):
        for alpha, z0 in ((math.pi, 1.0), (1.0, 1.5)):
            f = kernel_polynomial(alpha, z0, n, terms=120)
            best = min(best, pointwise_bound_ratio(f, FockParams(alpha, n), abs(z0)))
    out.append(_item("A13.pointwise.kernel", best, ">= 0.999", 0.999, best >= 0.999,
                     "truncated w^n exp(alpha conj(z0) w), n<=4"))
    return out


def check_exploration(cfg: VerifyConfig) -> list:
    """The unproven j/(j+1) < A(j) < 1 pattern for j > n^2, reported only.

    Measured is the first index from which the pattern holds through the
    scan end, under each index convention.
    """
    if cfg.quick or cfg.n is not None:
        return []
    out = []
    for n in range(5, 11):
        kmax = n * n + 20
        recs = threshold_scan(n, kmax)
        for conv in ("argument", "shifted"):
            start = None
            for r in recs:
                j = r.k if conv == "argument" else r.k - n + 1
                above = r.above_lower if conv == "argument" else r.above_lower_shifted
                if r.below_one and above:
                    start = j if start is None else start
                else:
                    start = None
            ok = start is not None and start <= n * n + 1
            out.append(_item(f"X01.remark_pattern.n{n}.{conv}", start, f"<= {n * n + 1}", "",
                             ok, f"scan to k={kmax}; holds={'yes' if ok else 'no'}",
                             EXPLORATORY))
    return out


def run_verify(cfg: VerifyConfig) -> VerificationReport:
    report = VerificationReport(header=dict(HEADER))
    report.header["kmax"] = cfg.kmax
    report.header["mode"] = "quick" if cfg.quick else "full"
    report.header["n_filter"] = "all" if cfg.n is None else cfg.n
    checks = [
        check_reference_table(cfg),
        check_seed(),
        check_below_one(cfg),
        check_threshold_pattern(cfg),
        check_recurrence(cfg),
        check_sum_identity(cfg),
        check_kummer_laguerre(),
        check_equality_case(),
        check_bathtub(),
        check_laplacians(cfg),
        check_pointwise(cfg),
    ]
    if not cfg.quick:
        checks += [check_sweep(cfg), check_random_margins(cfg), check_global_mass(cfg),
                   check_sharpness(cfg), check_exploration(cfg)]
    else:
        checks += [check_sharpness(cfg)]
    for items in checks:
        for it in items:
            report.add(it)
    return report
