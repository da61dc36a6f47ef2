import math

import mpmath as mp
import pytest

from fock_contraction.sequences import (
    RECURRENCE_TOL,
    a_quad,
    a_quad_value,
    a_recurrence_table,
    crossing_pattern,
    g_seq,
    recurrence_coefficients,
    sum_identity_residual,
    threshold_scan,
)

N2_TABLE = [0.427393, 0.662691, 0.784876, 0.852841, 0.893707, 0.919951]
G_FIVE = [0.59634736232319407, 0.80730527535361185, 0.89452104348479111,
          0.93576842511787062, 0.95757236715066543]

# 40-digit quadrature of the defining integral
A_FROZEN = {
    (1, 10): 0.98929132640646155,
    (3, 3): 0.33357122351360543,
    (3, 20): 0.97715045179662804,
    (4, 4): 0.27369423573702878,
    (4, 27): 0.97780652183466152,
    (4, 100): 0.99838718146659741,
    (1, 200): 0.99997487627826161,
    (2, 150): 0.99982110131060219,
    (4, 200): 0.99959819963284462,
}


def mp_a(n, p, dps=40):
    with mp.workdps(dps):
        integral = mp.quad(lambda r: mp.e ** (-r) * r ** (p - n) / mp.laguerre(n, 0, -r),
                           [0, 10, 40, 150, mp.inf])
        return mp.factorial(p) / (mp.factorial(n) * mp.factorial(p - n) ** 2) * integral


@pytest.mark.parametrize("k,expected", list(zip(range(2, 8), N2_TABLE)))
def test_n2_table(k, expected):
    assert abs(a_quad(2, k) - expected) <= 5e-7


@pytest.mark.parametrize("key", sorted(A_FROZEN))
def test_a_quad_frozen(key):
    n, k = key
    sv = a_quad_value(n, k)
    assert sv.value == pytest.approx(A_FROZEN[key], rel=1e-9)
    assert abs(sv.value - A_FROZEN[key]) <= sv.error_estimate


@pytest.mark.parametrize("k", [0, 1, 5, 100])
def test_a_quad_n0_is_one(k):
    assert a_quad(0, k) == pytest.approx(1.0, rel=1e-14)


def test_a_quad_domain():
    with pytest.raises(ValueError):
        a_quad(3, 2)


def test_n1_equals_g_sequence():
    g = g_seq(5)
    for rec in g:
        assert a_quad(1, rec.k) == pytest.approx(rec.g, rel=1e-13)


def test_g_seq_frozen():
    assert [x.k for x in g_seq(5)] == [1, 2, 3, 4, 5]
    for got, want in zip(g_seq(5), G_FIVE):
        assert got.g == pytest.approx(want, rel=1e-14)


def test_g_seq_matches_expint_definition():
    with mp.workdps(30):
        for rec in g_seq(40)[::7]:
            assert rec.g == pytest.approx(float(rec.k * mp.e * mp.expint(rec.k, 1)), rel=1e-12)


def test_recurrence_coefficients_n1():
    # n = 1: A(k+1) = (k+1)/k - (1/k^2)(k+1) A(k)
    c, ch = recurrence_coefficients(3, 1)
    assert c == pytest.approx(4 / 3, rel=1e-15)
    assert ch == [pytest.approx(4 / 9, rel=1e-15)]


def test_recurrence_table_shape():
    table = a_recurrence_table(3, 20)
    assert [r.k for r in table] == list(range(3, 21))
    assert all(r.a_rec is None for r in table if r.k < 6)
    assert all(r.a_rec is not None for r in table if r.k >= 6)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_recurrence_agrees_with_quadrature(n):
    table = a_recurrence_table(n, 80)
    worst = max(abs(r.a_rec - r.a_quad) for r in table if r.a_rec is not None)
    assert worst <= RECURRENCE_TOL
    assert not any(r.flagged for r in table)


def test_recurrence_domain():
    with pytest.raises(ValueError):
        a_recurrence_table(0, 10)
    with pytest.raises(ValueError):
        a_recurrence_table(3, 5)


def test_flagged_recurrence_entries_trace_to_recurrence():
    # for n = 8 the recurrence drifts; a 40-digit evaluation sides with quadrature
    table = a_recurrence_table(8, 40)
    flagged = [r for r in table if r.flagged]
    assert flagged and all(r.status == "EXPLORATORY" for r in flagged)
    for r in flagged[:2]:
        ref = float(mp_a(8, r.k))
        assert abs(r.a_quad - ref) <= 1e-9
        assert abs(r.a_rec - ref) > RECURRENCE_TOL


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_sum_identity_with_quadrature(n):
    for k in range(n, 61):
        values = [a_quad(n, k + h) for h in range(n + 1)]
        assert abs(sum_identity_residual(n, k, values)) <= 1e-9


def test_sum_identity_hand_case():
    # n = 1, k = 2 reduces to g_2/2 + 2 g_3/3 = 1
    g = g_seq(3)
    assert abs(g[1].g / 2 + 2 * g[2].g / 3 - 1) <= 1e-12
    assert abs(sum_identity_residual(1, 2, [g[1].g, g[2].g])) <= 1e-12


def test_sum_identity_n0_trivial():
    assert sum_identity_residual(0, 7, [1.0]) == 0.0


@pytest.mark.parametrize("k", [2, 4])
def test_sum_identity_with_printed_values(k):
    values = dict(zip(range(2, 8), N2_TABLE))
    residual = sum_identity_residual(2, k, [values[k], values[k + 1], values[k + 2]])
    assert abs(residual) <= 1e-6


def test_sum_identity_arity():
    with pytest.raises(ValueError):
        sum_identity_residual(2, 3, [0.5, 0.6])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_a_below_one_to_200(n):
    records = threshold_scan(n, 200)
    assert {r.status for r in records} == {"VERIFIED"}
    assert all(r.below_one for r in records)


def test_scan_statuses_outside_verified_range():
    assert {r.status for r in threshold_scan(0, 5)} == {"BOUNDARY"}
    assert {r.status for r in threshold_scan(5, 30)} == {"EXPLORATORY"}


def test_scan_short_range_without_recurrence():
    records = threshold_scan(3, 4)
    assert [r.a_rec for r in records] == [None, None]


def test_threshold_pattern_n4_argument_convention():
    signs = [s for _, _, s in crossing_pattern(4, 27, "argument")]
    assert signs == [-1] * 16 + [1] * 11


def test_threshold_pattern_n4_shifted_convention_differs():
    signs = [s for _, _, s in crossing_pattern(4, 27, "shifted")]
    assert signs[:10] == [-1] * 10
    assert signs[-1] == 1
    assert signs != [-1] * 16 + [1] * 11


def test_crossing_pattern_argument_zero_below_n():
    rows = crossing_pattern(3, 4, "argument")
    assert [a for _, a, _ in rows[:2]] == [0.0, 0.0]


def test_crossing_pattern_unknown_convention():
    with pytest.raises(ValueError):
        crossing_pattern(2, 5, "other")


def test_record_lower_bounds():
    r = threshold_scan(2, 10)[3]
    assert r.k == 5
    assert r.lower == pytest.approx(5 / 6)
    assert r.lower_shifted == pytest.approx(4 / 5)
    assert math.isclose(r.gap, 1 - r.a_quad)
