import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from fock_contraction.inequality import (
    NonUnimodalProfileError,
    PolynomialF,
    RadialProfile,
    auto_sharpness_radius,
    bathtub_check,
    faber_krahn_bound,
    faber_krahn_margin,
    fock_norm_sq,
    global_mass_identity,
    kernel_polynomial,
    local_mass,
    outer_mass,
    pointwise_bound_ratio,
    random_annuli,
    sharpness_ratio,
    superlevel_set,
    taylor_tail_norm_sq,
)
from fock_contraction.sequences import g_seq
from fock_contraction.specfun import FockParams, laguerre_neg

PI1 = FockParams(math.pi, 1)


def direct_mass(f, params, r_lo, r_hi):
    """(alpha/pi) int |f^(n)|^2 e^{-alpha r^2} / (alpha^n n! L_n) dA in polar form."""
    alpha, n = params.alpha, params.n
    const = alpha ** n * math.factorial(n)

    def integrand(theta, r):
        z = r * complex(math.cos(theta), math.sin(theta))
        x = alpha * r * r
        return abs(f.derivative(n, z)) ** 2 * math.exp(-x) / (const * laguerre_neg(n, x)) * r

    val, _ = integrate.dblquad(integrand, r_lo, r_hi, 0.0, 2 * math.pi, epsabs=1e-14, epsrel=1e-12)
    return alpha / math.pi * val


class TestPolynomialF:
    def test_monomial(self):
        f = PolynomialF.monomial(3, 2.0)
        assert f.degree == 3
        assert f.coefficients[3] == 2.0

    def test_derivative(self):
        f = PolynomialF((1.0, 2.0, 3.0))
        assert f.derivative(1, 2.0) == pytest.approx(2 + 6 * 2)
        assert f.derivative(2, 5.0) == pytest.approx(6.0)
        assert f.derivative(3, 1.0) == 0

    def test_zero(self):
        assert PolynomialF((0.0, 0.0)).is_zero()


def test_norms():
    f = PolynomialF((1.0, 1.0, 1.0))
    # ||z^k||^2 = k! / alpha^k
    assert fock_norm_sq(f, 2.0) == pytest.approx(1 + 0.5 + 2 / 4)
    assert taylor_tail_norm_sq(f, 2.0, 1) == pytest.approx(0.5 + 0.5)


@pytest.mark.parametrize("f,params,r_lo,r_hi", [
    (PolynomialF.monomial(1), PI1, 0.0, 1.0),
    (PolynomialF((1.0, 0.0, 1.0)), FockParams(1.0, 1), 0.0, 1.3),
    (PolynomialF((0.5, 1j, -0.3, 0.2)), FockParams(1.0, 2), 0.4, 1.8),
    (PolynomialF((1.0, 2.0)), FockParams(2.0, 0), 0.2, 0.9),
])
def test_local_mass_against_polar_integral(f, params, r_lo, r_hi):
    profile = RadialProfile(f, params)
    assert local_mass(profile, r_lo, r_hi) == pytest.approx(direct_mass(f, params, r_lo, r_hi),
                                                            rel=1e-9)


def test_local_mass_frozen():
    profile = RadialProfile(PolynomialF.monomial(1), PI1)
    assert local_mass(profile, 0.0, 1.0) == pytest.approx(0.187067394261079, rel=1e-12)


def test_local_mass_empty_and_reversed():
    profile = RadialProfile(PolynomialF.monomial(1), PI1)
    assert local_mass(profile, 1.0, 1.0) == 0.0
    with pytest.raises(ValueError):
        local_mass(profile, 2.0, 1.0)


def test_profile_below_n_is_zero():
    profile = RadialProfile(PolynomialF((1.0, 2.0)), FockParams(1.0, 2))
    assert profile.is_zero
    assert outer_mass(profile, 0.0) == 0.0


def test_profile_large_degree_log_is_finite():
    # ||z^400||^2 = 400! overflows, its logarithm does not
    profile = RadialProfile(PolynomialF.monomial(400), FockParams(1.0, 3))
    log_values = profile.log_u(np.array([1.0, 20.0, 60.0]))
    assert np.all(np.isfinite(log_values))
    assert np.argmax(log_values) == 1


def test_global_mass_identity_against_g():
    # n = 1, f = 1 + w^2: mass = a_2 ||w^2||^2 = 2 g_2
    quad, coeff = global_mass_identity(PolynomialF((1.0, 0.0, 1.0)), FockParams(1.0, 1))
    assert coeff == pytest.approx(2 * g_seq(2)[1].g, rel=1e-13)
    assert quad == pytest.approx(coeff, rel=1e-10)


@pytest.mark.parametrize("R", [0.5, 1.0, 2.0])
def test_equality_case(R):
    assert abs(faber_krahn_margin(PolynomialF((1.0,)), FockParams(math.pi, 0), 0.0, R)) <= 1e-12


def test_margin_matches_bound_minus_mass():
    f = PolynomialF((0.3, 1.0, 0.5))
    params = FockParams(1.0, 1)
    s = 1.0 - 0.25
    bound = faber_krahn_bound(f, params, s)
    mass = local_mass(RadialProfile(f, params), 0.5, 1.0)
    assert faber_krahn_margin(f, params, 0.5, 1.0) == pytest.approx(bound - mass, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(
    coeffs=st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
                    min_size=1, max_size=7),
    n=st.integers(0, 4),
    r_lo=st.floats(0.0, 2.0),
    width=st.floats(0.05, 3.0),
)
def test_margin_nonnegative_property(coeffs, n, r_lo, width):
    f = PolynomialF(tuple(coeffs))
    if f.is_zero() or max(abs(c) for c in coeffs) < 1e-3:
        return
    params = FockParams(1.0, n)
    margin = faber_krahn_margin(f, params, r_lo, r_lo + width)
    bound = faber_krahn_bound(f, params, (r_lo + width) ** 2 - r_lo ** 2)
    assert margin >= -1e-12 * fock_norm_sq(f, 1.0)
    assert margin <= bound * (1 + 1e-12) + 1e-300


def test_distance_to_constants_form():
    f = PolynomialF((5.0, 1.0, 0.5))
    params = FockParams(1.0, 1)
    plain = faber_krahn_margin(f, params, 0.0, 1.0)
    sharp = faber_krahn_margin(f, params, 0.0, 1.0, against="constants")
    # the constant term adds 25 (1 - e^{-2s}) to the norm form only
    assert plain - sharp == pytest.approx(25 * -math.expm1(-2.0), rel=1e-12)
    assert sharp > 0
    with pytest.raises(ValueError):
        faber_krahn_margin(f, FockParams(1.0, 2), 0.0, 1.0, against="constants")


def test_margin_rejects_bad_sets():
    with pytest.raises(ValueError):
        faber_krahn_margin(PolynomialF.monomial(1), PI1, 1.0, 0.5)
    with pytest.raises(ValueError):
        faber_krahn_margin(PolynomialF((0.0,)), PI1, 0.0, 0.5)


class TestSuperlevelSet:
    def test_z3_annulus(self):
        profile = RadialProfile(PolynomialF.monomial(3), PI1)
        lvl = superlevel_set(profile, 1.0)
        assert lvl.normalized_measure == pytest.approx(1.0, abs=1e-10)
        assert 0 < lvl.inner_radius < lvl.outer_radius
        assert float(profile.u(lvl.inner_radius)) == pytest.approx(lvl.t, rel=1e-9)
        assert float(profile.u(lvl.outer_radius)) == pytest.approx(lvl.t, rel=1e-9)

    def test_z2_frozen(self):
        lvl = superlevel_set(RadialProfile(PolynomialF.monomial(2), PI1), 1.0)
        assert lvl.inner_radius == pytest.approx(0.28644, abs=1e-5)
        assert lvl.outer_radius == pytest.approx(0.63274, abs=1e-5)

    def test_peak_at_origin_gives_disk(self):
        lvl = superlevel_set(RadialProfile(PolynomialF((1.0,)), FockParams(2.0, 0)), 3.0)
        assert lvl.inner_radius == 0.0
        assert lvl.outer_radius == pytest.approx(math.sqrt(1.5), rel=1e-15)

    def test_two_peaks_rejected(self):
        f = PolynomialF((1.0,) + (0.0,) * 19 + (1 / math.sqrt(math.factorial(20)),))
        with pytest.raises(NonUnimodalProfileError):
            superlevel_set(RadialProfile(f, FockParams(1.0, 0)), 1.0)

    @pytest.mark.parametrize("s", [0.0, -1.0, math.inf])
    def test_bad_measure(self, s):
        with pytest.raises(ValueError):
            superlevel_set(RadialProfile(PolynomialF.monomial(2), PI1), s)


def test_bathtub_z3():
    profile = RadialProfile(PolynomialF.monomial(3), PI1)
    disk = (0.0, math.sqrt(1 / math.pi))
    rep = bathtub_check(profile, 1.0, [disk] + random_annuli(math.pi, 1.0, 20, 7))
    assert rep.level_mass == pytest.approx(0.0565157333136, rel=1e-10)
    assert rep.trials[0].mass == pytest.approx(0.0277325450034, rel=1e-10)
    assert rep.level_mass > rep.trials[0].mass
    assert rep.all_dominated
    assert rep.max_excess < 0


def test_bathtub_rejects_wrong_measure():
    profile = RadialProfile(PolynomialF.monomial(3), PI1)
    with pytest.raises(ValueError):
        bathtub_check(profile, 1.0, [(0.0, 1.0)])


def test_random_annuli_measure_and_seed():
    a = random_annuli(2.0, 0.7, 5, seed=3)
    assert a == random_annuli(2.0, 0.7, 5, seed=3)
    for r_lo, r_hi in a:
        assert 2.0 * (r_hi ** 2 - r_lo ** 2) == pytest.approx(0.7)


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_pointwise_bound_random(n):
    rng = np.random.default_rng(11 + n)
    for _ in range(5):
        c = rng.standard_normal(9) + 1j * rng.standard_normal(9)
        c = c / np.sqrt([math.factorial(k) for k in range(9)])
        f = PolynomialF(tuple(c))
        for rho in (0.0, 0.7, 1.5):
            assert pointwise_bound_ratio(f, FockParams(1.0, n), rho) <= 1 + 1e-10


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_pointwise_bound_attained_by_kernel(n):
    f = kernel_polynomial(math.pi, 1.0, n, terms=120)
    assert pointwise_bound_ratio(f, FockParams(math.pi, n), 1.0) >= 0.999


def test_pointwise_bound_needs_tail():
    with pytest.raises(ValueError):
        pointwise_bound_ratio(PolynomialF((1.0, 2.0)), FockParams(1.0, 2), 1.0)


def test_sharpness_small_radius():
    assert sharpness_ratio(0.01, 3, PI1) == pytest.approx(2.47e-8, rel=1e-2)


def test_sharpness_m50_measured():
    # frozen value at alpha R^2 = 55; it sits below 0.9
    R = math.sqrt(55 / math.pi)
    assert R == auto_sharpness_radius(50, math.pi)
    assert sharpness_ratio(R, 50, PI1) == pytest.approx(0.8072297393854, rel=1e-10)


@pytest.mark.parametrize("s,expected_min", [(60, 0.93), (65, 0.98), (70, 0.99)])
def test_sharpness_m50_grows_with_radius(s, expected_min):
    J = sharpness_ratio(math.sqrt(s / math.pi), 50, PI1)
    assert expected_min < J < 1


@pytest.mark.parametrize("m", [1, 5, 20])
def test_sharpness_below_one_at_large_radius(m):
    assert sharpness_ratio(auto_sharpness_radius(m, 1.0) * 2, m, FockParams(1.0, 1)) < 1


def test_sharpness_domain():
    with pytest.raises(ValueError):
        sharpness_ratio(1.0, 1, FockParams(1.0, 2))
    with pytest.raises(ValueError):
        sharpness_ratio(0.0, 3, PI1)


def test_no_precision_warnings_on_sweep_corner():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        faber_krahn_margin(PolynomialF.monomial(20), FockParams(math.pi, 4), 0.0, 5.0)


@pytest.mark.parametrize("m,s", [(50, 55.0), (10, 3.0), (3, 15.0)])
def test_sharpness_against_mpmath(m, s):
    # n = 1, x = alpha r^2: J = m^2 int_0^s x^(m-1) e^-x / (1+x) dx / ((1 - e^{-2s}) m!)
    import mpmath as mp
    with mp.workdps(40):
        integral = mp.quad(lambda x: x ** (m - 1) * mp.e ** (-x) / (1 + x), [0, s / 2, s])
        ref = m * m * integral / ((1 - mp.e ** (-2 * s)) * mp.factorial(m))
    J = sharpness_ratio(math.sqrt(s / math.pi), m, PI1)
    assert J == pytest.approx(float(ref), rel=1e-11)
