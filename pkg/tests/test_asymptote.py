import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import kraw_recurrence, log_abs_int
from puebounds.asymptote import (
    ALPHA1,
    CURVED,
    FLAT,
    NA,
    Phi,
    adaptive_simpson,
    alpha_residual,
    amrrw_exponent,
    bisect,
    bound_constants,
    curve_sweep,
    delta_lp,
    existence_exponent,
    hamming_exponent,
    hamming_params,
    hq,
    hq_inv,
    kraw_exponent,
    maximum_check,
    phi_binary,
    phi_general,
    r_lp,
    sigma0,
    sigma_opt,
    tau0,
    tau2_closed,
    tau_at,
    tau_general,
    tq,
)
from puebounds.kraw_core import F_e_closed, ParameterError

P = 0.1

# q = 4, p = 0.1 reference table: (R_Q, existence, A-MRRW, Hamming); None marks "--"
REFERENCE_TABLE = [
    (0.0, 0.5260, 0.6270, None),
    (0.1, 0.4637, 0.5458, None),
    (0.2, 0.4054, 0.4685, 0.4774),
    (0.3, 0.3509, 0.3952, 0.3951),
    (0.4, 0.3, 0.3262, 0.3216),
    (0.5, 0.25, 0.2618, 0.2567),
    (0.6, 0.2, 0.2028, 0.2003),
    (0.7, 0.15, 0.15, 0.15),
    (0.8, 0.1, 0.1, 0.1),
    (0.9, 0.05, 0.05, 0.05),
    (1.0, 0.0, 0.0, 0.0),
]


# ---------------------------------------------------------------- numerics


def test_bisect_simple_root():
    assert bisect(lambda x: x * x - 2, 0.0, 2.0) == pytest.approx(math.sqrt(2), abs=1e-12)


def test_bisect_machine_precision():
    r = bisect(lambda x: x - 0.3, 0.0, 1.0, tol=0.0)
    assert abs(r - 0.3) <= 2 * math.ulp(0.3)


def test_bisect_requires_bracket():
    with pytest.raises((ParameterError, ValueError, ArithmeticError)):
        bisect(lambda x: x + 1, 0.0, 1.0)


@pytest.mark.parametrize("f,a,b,want", [
    (math.sin, 0.0, math.pi, 2.0),
    (lambda x: x**4, 0.0, 1.0, 0.2),
    (math.sqrt, 0.0, 1.0, 2 / 3),
    (math.exp, -1.0, 1.0, math.e - 1 / math.e),
])
def test_adaptive_simpson(f, a, b, want):
    assert adaptive_simpson(f, a, b, 1e-11) == pytest.approx(want, abs=1e-9)


def test_adaptive_simpson_empty_interval():
    assert adaptive_simpson(math.cos, 0.5, 0.5) == 0.0


# ---------------------------------------------------------------- entropy


def test_hq_values():
    assert hq(0.0, 4) == 0.0
    assert hq(0.75, 4) == pytest.approx(1.0, abs=1e-15)
    assert hq(0.5, 2) == pytest.approx(1.0, abs=1e-15)
    assert hq(0.11, 2) == pytest.approx(0.4999, abs=1e-4)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_hq_inv_roundtrip(q):
    top = (q - 1) / q
    for k in range(101):
        x = top * k / 100
        assert hq_inv(hq(x, q), q) == pytest.approx(x, abs=1e-10)


def test_hq_inv_known():
    assert hq_inv(0.5, 4) == pytest.approx(0.189, abs=1e-3)
    with pytest.raises(ParameterError):
        hq_inv(1.1, 4)


def test_tq_definition():
    # T_q(x, y) = -x log_q(y/(q-1)) - (1-x) log_q(1-y)
    x, y, q = 0.2, 0.1, 4
    want = -x * math.log(y / 3, 4) - (1 - x) * math.log(1 - y, 4)
    assert tq(x, y, q) == pytest.approx(want, rel=1e-14)
    assert tq(0.3, 0.0, 4) == math.inf
    assert tq(0.0, 0.0, 4) == 0.0


@given(st.floats(0.0, 0.74), st.floats(0.001, 0.74))
@settings(max_examples=100, deadline=None)
def test_tq_dominates_hq(x, y):
    # Gibbs: T_q(x, y) >= H_q(x), equality at y = x
    assert tq(x, y, 4) >= hq(x, 4) - 1e-12


# ---------------------------------------------------------------- tau0 and LP rate


@pytest.mark.parametrize("q", [2, 3, 4])
def test_tau0_involution(q):
    top = (q - 1) / q
    worst = 0.0
    for k in range(1000):
        z = top * k / 999
        worst = max(worst, abs(tau0(tau0(z, q), q) - z))
    assert worst < 1e-12


def test_tau0_values():
    assert tau0(0.1, 4) == pytest.approx(0.4402, abs=1e-4)
    assert tau0(0.0, 4) == pytest.approx(0.75)
    assert tau0(0.75, 4) == pytest.approx(0.0, abs=1e-15)
    assert tau0(0.1, 2) == pytest.approx(0.5 - math.sqrt(0.09), abs=1e-15)


def test_r_lp_and_inverse():
    for d in (0.05, 0.1, 0.2, 0.3, 0.5):
        assert delta_lp(r_lp(d, 4), 4) == pytest.approx(d, abs=1e-10)
    assert 2 * r_lp(0.1, 4) - 1 == pytest.approx(0.687, abs=1e-3)
    assert r_lp(0.75, 4) == pytest.approx(0.0, abs=1e-12)


@given(st.floats(0.01, 0.7), st.floats(0.01, 0.7))
@settings(max_examples=60, deadline=None)
def test_r_lp_decreasing(a, b):
    if a < b:
        assert r_lp(a, 4) >= r_lp(b, 4) - 1e-14


# ---------------------------------------------------------------- Krawtchouk exponent


def test_kraw_exponent_at_zero():
    for s in (0.1, 0.3, 0.6):
        assert kraw_exponent(s, 0.0, 4) == pytest.approx(hq(s, 4), abs=1e-15)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_kraw_exponent_closed_form_at_tau0(q):
    top = (q - 1) / q
    for k in range(1, 20):
        s = top * k / 20
        x = tau0(s, q)
        want = (1 + hq(s, q) - hq(x, q)) / 2
        assert abs(kraw_exponent(s, x, q) - want) < 1e-6


@pytest.mark.parametrize("sigma,xi", [(0.3, 0.1), (0.2, 0.05), (0.5, 0.02), (0.1, 0.3)])
def test_kraw_exponent_vs_big_integers(sigma, xi):
    n, q = 2000, 4
    assert xi <= tau0(sigma, q)
    k, x = round(sigma * n), round(xi * n)
    exact = log_abs_int(kraw_recurrence(q, n, k, x)[k], q) / n
    assert abs(kraw_exponent(sigma, xi, q) - exact) < 0.01


def test_kraw_exponent_domain():
    with pytest.raises(ParameterError):
        kraw_exponent(0.5, 0.2, 4)  # beyond tau0(0.5)
    with pytest.raises(ParameterError):
        kraw_exponent(0.8, 0.0, 4)


# ---------------------------------------------------------------- phi and Phi


@pytest.mark.parametrize("tau,xi", [(0.1, 0.05), (0.15, 0.1), (0.2, 0.3), (0.3, 0.02)])
def test_phi_binary_vs_exact(tau, xi):
    n = 1000
    v = F_e_closed(2, n, round(tau * n), round(xi * n))
    assert v > 0
    assert abs(phi_binary(tau, xi) - log_abs_int(v, 2) / n) < 0.02


def test_phi_binary_slope_at_zero():
    tau, h = 0.15, 1e-6
    slope = (phi_binary(tau, h) - phi_binary(tau, 0.0)) / h
    assert slope == pytest.approx(0.5 * math.log2(4 * tau * (1 - tau)), abs=1e-4)


@pytest.mark.parametrize("tau,xi", [(0.15, 0.1), (0.1, 0.05), (0.17, 0.2), (0.3, 0.2), (0.05, 0.08)])
def test_Phi_general_vs_exact(tau, xi):
    n, q = 600, 4
    v = F_e_closed(q, n, round(tau * n), round(xi * n))
    assert v > 0
    assert abs(Phi(tau, xi, q) - log_abs_int(v, q) / n) < 0.02


def test_Phi_endpoints():
    assert Phi(0.2, 0.0, 4) == pytest.approx(1 + hq(0.2, 4))
    assert Phi(0.1, 0.21, 4) == Phi(0.1, 0.21, 2) == -math.inf
    assert F_e_closed(4, 30, 3, 7) == 0
    # at xi = 2 tau only sigma = tau - xi/2 = 0 survives
    assert Phi(0.1, 0.2, 4) == pytest.approx(phi_general(0.1, 0.0, 0.2, 4), abs=1e-12)


def test_phi_general_requires_q3():
    with pytest.raises(ParameterError):
        phi_general(0.1, 0.05, 0.1, 2)


def test_sigma_opt_is_stationary():
    for tau, xi in [(0.15, 0.1), (0.1, 0.05), (0.2, 0.3)]:
        s = sigma_opt(tau, xi, 4)
        assert abs(alpha_residual(tau, s, xi, 4)) < 1e-6
        best = phi_general(tau, s, xi, 4)
        lo, hi = max(0.0, tau - xi), tau - xi / 2
        for k in range(1, 50):
            assert phi_general(tau, lo + (hi - lo) * k / 50, xi, 4) <= best + 1e-12


# ---------------------------------------------------------------- tangency point


def test_sigma0_alpha_residual_grid():
    for p in (0.02, 0.05, 0.1, 0.2, 0.3):
        for k in range(1, 10):
            xi = p + (0.6 - p) * k / 10
            s0 = sigma0(xi, 4, p)
            tau = tau_general(xi, s0, 4, p)
            assert abs(alpha_residual(tau, s0, xi, 4)) < 1e-9


def test_tangency_by_finite_differences():
    # Z = h(x*) F_e(x) / F_e(x*) stays below h iff Phi + T_q(., p) peaks at xi*
    p, q = P, 4
    for xi in (0.15, 0.25, 0.35):
        s0 = sigma0(xi, q, p)
        tau = tau_general(xi, s0, q, p)

        def g(x):
            return Phi(tau, x, q) + tq(x, p, q)

        h = 1e-5
        assert (g(xi + h) - g(xi - h)) / (2 * h) == pytest.approx(0.0, abs=1e-5)
        grid = [2 * tau * k / 200 for k in range(201)] + [2 * tau + 0.01]
        assert g(xi) >= max(g(x) for x in grid) - 1e-9


def test_sigma0_interval_and_monotone():
    p = P
    prev = math.inf
    for k in range(1, 60):
        xi = p + (0.9 - p) * k / 60
        s0 = sigma0(xi, 4, p)
        tau = tau_at(xi, 4, p)
        assert max(0.0, tau - xi) <= s0 <= tau - xi / 2
        assert s0 < prev
        prev = s0


def test_tau_at_increasing():
    p = P
    xs = [p + (0.8 - p) * k / 80 for k in range(80)]
    ts = [tau_at(x, 4, p) for x in xs]
    assert all(a < b for a, b in zip(ts, ts[1:]))


def test_hamming_params_roundtrip():
    hp = hamming_params(0.4, P, 4)
    assert tau_at(hp.xi_star, 4, P) == pytest.approx(hp.tau, abs=1e-10)
    assert hq(hp.tau, 4) == pytest.approx(0.3, abs=1e-10)


# ---------------------------------------------------------------- exponents


@pytest.mark.parametrize("row", REFERENCE_TABLE, ids=lambda r: f"rq{r[0]}")
def test_existence_and_amrrw_table(row):
    r, ex, am, _ = row
    assert existence_exponent(r, P).value == pytest.approx(ex, abs=2e-3)
    assert amrrw_exponent(r, P).value == pytest.approx(am, abs=2e-3)


@pytest.mark.parametrize("row", [r for r in REFERENCE_TABLE if r[3] is not None], ids=lambda r: f"rq{r[0]}")
def test_hamming_table_where_defined(row):
    r, _, _, hm = row
    assert hamming_exponent(r, P).value == pytest.approx(hm, abs=2e-3)


def test_hamming_not_applicable_at_zero_rate():
    assert hamming_exponent(0.0, P) == (None, NA)


@pytest.mark.parametrize("r", [0.7, 0.8, 0.9, 1.0])
def test_flat_rows_exact(r):
    want = (1 - r) / 2
    for e in (existence_exponent(r, P), amrrw_exponent(r, P), hamming_exponent(r, P)):
        assert e.status == FLAT and abs(e.value - want) < 1e-12


def test_existence_branches():
    switch = 1 - 2 * hq(P, 4)
    assert existence_exponent(switch - 1e-6, P).status == CURVED
    assert existence_exponent(switch + 1e-6, P).status == FLAT
    below = existence_exponent(switch - 1e-9, P).value
    assert below == pytest.approx((1 - switch) / 2, abs=1e-6)


def test_amrrw_branch_continuity():
    switch = 2 * r_lp(P, 4) - 1
    e = amrrw_exponent(switch - 1e-9, P)
    assert e.status == CURVED and e.value == pytest.approx((1 - switch) / 2, abs=1e-6)


def test_hamming_flat_continuity():
    switch = 1 - 2 * hq(tau_at(P, 4, P), 4)
    e = hamming_exponent(switch - 1e-7, P)
    assert e.status == CURVED
    assert abs(e.value - (1 - switch) / 2) < 2e-3
    assert hamming_exponent(switch + 1e-7, P).status == FLAT


def test_amrrw_strict():
    assert ALPHA1[4] == pytest.approx(0.0028)
    assert amrrw_exponent(0.0, P, strict=True) == (None, NA)
    assert amrrw_exponent(0.1, P, strict=True).status == CURVED
    assert amrrw_exponent(0.0, P, q=3, strict=True) == (None, NA)


def test_hamming_beyond_p_cr():
    assert hamming_exponent(0.5, 0.35, 4) == (None, NA)


def test_binary_hamming():
    c = bound_constants(2)
    assert hamming_exponent(0.5, 0.25, 2).status == NA  # p > 0.18
    e = hamming_exponent(0.3, 0.05, 2)
    assert e.status in (CURVED, FLAT) and e.value > 0


def test_exponent_domain_errors():
    with pytest.raises(ParameterError):
        existence_exponent(1.2, P)
    with pytest.raises(ParameterError):
        amrrw_exponent(0.5, 0.8)
    with pytest.raises(ParameterError):
        hamming_exponent(-0.1, P)


# ---------------------------------------------------------------- constants


def test_binary_constants():
    c = bound_constants(2)
    assert abs(c.tau2 - 0.1) < 1e-9
    assert abs(2 * c.tau2 - tau0(c.tau2, 2)) < 1e-9
    assert abs(c.p_cr - 0.18) < 1e-12
    assert 0.10 <= c.tau1 <= 0.11
    assert c.tau_cr == pytest.approx(c.tau2)


def test_binary_maximum_check_scan():
    assert maximum_check(0.10, 2)[1]
    assert not maximum_check(0.11, 2)[1]


def test_q4_constants():
    c = bound_constants(4)
    assert c.tau2 == pytest.approx(tau2_closed(4), abs=1e-12)
    assert c.tau2 == pytest.approx(0.169906, abs=1e-6)
    assert abs(c.p_cr - 0.301) <= 2e-3
    assert c.tau_cr == c.tau2
    assert c.alpha1 == ALPHA1[4]


def test_q4_maximum_check_holds_up_to_tau2():
    t2 = bound_constants(4).tau2
    for k in range(1, 51):
        arg, ok = maximum_check(t2 * k / 50, 4)
        assert ok and arg == 0.0


def test_maximum_check_trivial():
    assert maximum_check(0.0, 4) == (0.0, True)
    with pytest.raises(ParameterError):
        maximum_check(0.9, 4)


def test_tau2_closed_matches_root():
    for q in (2, 3, 4, 8):
        t = tau2_closed(q)
        assert abs(2 * t - tau0(t, q)) < 1e-12


# ---------------------------------------------------------------- sweeps


def test_sandwich_101_points():
    grid = [k / 100 for k in range(101)]
    ex, am, hm = curve_sweep(P, 4, grid)
    for (r, e1, s1), (_, e2, s2), (_, e3, s3) in zip(ex.points, am.points, hm.points):
        assert e2 is not None and e1 <= e2 + 1e-12
        if e3 is not None:
            assert e1 <= e3 + 1e-12
        if s1 == s2 == s3 == FLAT:
            assert e1 == e2 == e3


def test_existence_nonincreasing():
    vals = [existence_exponent(k / 100, P).value for k in range(101)]
    assert all(a >= b - 1e-15 for a, b in zip(vals, vals[1:]))


def test_curve_sweep_other_q():
    ex, am, hm = curve_sweep(0.05, 3, [0.5, 0.9])
    assert all(s == NA for _, _, s in ex.points)
    assert am.values()[1] == pytest.approx(0.05)
