"""Closed-form rate functions and constant chains, frozen against independent
evaluations and checked for the documented shape properties."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hullswarm import InvalidInputError
from hullswarm.certificates import (
    build_certificates,
    certificate_report,
    direct_link_gain,
    gamma_constants,
    jlc_discrete_bound,
    load_certificates,
    relay_dwell_gain,
    relay_link_gain,
    save_certificates,
    siiss_envelope_ujlc,
    siiss_functions,
    siiss_recursion_jlc,
    siss_envelope,
    ujlc_discrete_bound,
    window_contraction_chain,
)
from hullswarm.dynamics import WeightBounds

UNIT = WeightBounds(1.0, 1.0, 1.0)
GENTLE = WeightBounds(0.3, 0.5, 0.8)  # small rates: chains stay away from 1


# -------------------------------------------------------------- link gains


def test_direct_link_gain_value_at_zero_and_frozen_point():
    assert direct_link_gain(0.0, UNIT, n=2, tau_D=1.0, T_star=4.0) == pytest.approx(1.0)
    # lam = 2: value at the dwell end is (e^-2 + 1) / 2
    val = direct_link_gain(1.0, UNIT, n=2, tau_D=1.0, T_star=4.0)
    assert val == pytest.approx(0.5676676416183064, abs=1e-12)


def test_direct_link_gain_shape():
    s = np.linspace(0.0, 4.0, 1001)
    vals = direct_link_gain(s, UNIT, n=2, tau_D=1.0, T_star=4.0)
    tau_idx = np.searchsorted(s, 1.0)
    assert np.all(np.diff(vals[: tau_idx + 1]) < 0)  # decreasing on [0, tau]
    assert np.all(np.diff(vals[tau_idx:]) > 0)       # increasing after
    assert vals[-1] < 1.0
    with pytest.raises(InvalidInputError):
        direct_link_gain(4.5, UNIT, n=2, tau_D=1.0, T_star=4.0)
    with pytest.raises(InvalidInputError):
        direct_link_gain(-0.1, UNIT, n=2, tau_D=1.0, T_star=4.0)


def test_relay_link_gain_frozen_point_and_shape():
    assert relay_link_gain(0.0, 0.5, UNIT, n=2, tau_D=1.0, T_star=4.0) == pytest.approx(1.0)
    # n=2 collapses the dwell branch to mu0 + (1 - mu0) e^{-a_lo s}
    val = relay_link_gain(1.0 - 1e-12, 0.5, UNIT, n=2, tau_D=1.0, T_star=4.0)
    assert val == pytest.approx(0.6839397205857212, abs=1e-9)
    s = np.linspace(0.0, 4.0, 1001)
    vals = relay_link_gain(s, 0.5, UNIT, n=2, tau_D=1.0, T_star=4.0)
    tau_idx = np.searchsorted(s, 1.0)
    assert np.all(np.diff(vals[: tau_idx + 1]) < 0)
    assert np.all(np.diff(vals[tau_idx:]) > 0)
    assert vals[-1] < 1.0
    with pytest.raises(InvalidInputError):
        relay_link_gain(1.0, 1.5, UNIT, n=2, tau_D=1.0, T_star=4.0)


def test_gain_continuity_at_dwell_boundary():
    for bounds, n, tau in ((UNIT, 2, 1.0), (GENTLE, 4, 0.4), (UNIT, 5, 0.25)):
        T_star = n * (2 * tau + 1.0)
        left = direct_link_gain(tau - 1e-13, bounds, n, tau, T_star)
        right = direct_link_gain(tau, bounds, n, tau, T_star)
        assert abs(left - right) <= 1e-12
        left = relay_link_gain(tau - 1e-13, 0.4, bounds, n, tau, T_star)
        right = relay_link_gain(tau, 0.4, bounds, n, tau, T_star)
        assert abs(left - right) <= 1e-12


def test_gamma_constants_frozen():
    g1, g2 = gamma_constants(UNIT, n=2, tau_D=1.0, T_star=4.0)
    assert g1 == pytest.approx(7.0710678118654755, abs=1e-12)
    assert g2 == pytest.approx(g1, abs=1e-12)  # n=2 equal weights coincide
    g1b, g2b = gamma_constants(WeightBounds(0.5, 1.5, 1.0), n=4, tau_D=0.5, T_star=8.0)
    assert g2b >= g1b  # smaller denominator when a_lo < a_hi
    with pytest.raises(InvalidInputError):
        gamma_constants(UNIT, n=1, tau_D=1.0, T_star=4.0)


def test_gamma1_dominates_c0():
    for bounds in (UNIT, GENTLE, WeightBounds(0.5, 1.5, 2.0)):
        for n in (2, 3, 6):
            for tau, T in ((0.25, 1.0), (1.0, 2.0)):
                bundle = build_certificates(bounds, n, tau, T)
                assert bundle.gamma1 > bundle.c0


# ------------------------------------------------------------------ chains


def independent_eta_chain(bounds, n, tau, T):
    """Second implementation of the window recursion, plain floats."""
    T0 = T + 2 * tau
    Ts = n * T0
    lam = bounds.b_lo + (n - 1) * bounds.a_hi
    lam1 = (n - 2) * bounds.a_hi + bounds.a_lo

    def mu(s):
        if s < tau:
            return (bounds.b_lo * math.exp(-lam * s) + (n - 1) * bounds.a_hi) / lam
        mhat = (bounds.b_lo * math.exp(-lam * tau) + (n - 1) * bounds.a_hi) / lam
        return 1 - math.exp(-(n - 1) * bounds.a_hi * (s - tau)) * (1 - mhat)

    def xi(s, m0):
        def xhat(v):
            return (
                (n - 2) * bounds.a_hi
                + (m0 + (1 - m0) * math.exp(-lam1 * v)) * bounds.a_lo
            ) / lam1

        if s < tau:
            return xhat(s)
        return 1 - math.exp(-(n - 1) * bounds.a_hi * (s - tau)) * (1 - xhat(tau))

    chain = [mu(Ts)]
    for j in range(2, n + 1):
        chain.append(xi((n - j + 1) * T0, chain[-1]))
    return chain


def test_eta_chain_matches_independent_recursion():
    for bounds, n, tau, T in (
        (GENTLE, 3, 0.4, 0.6),
        (GENTLE, 5, 0.3, 0.5),
        (UNIT, 3, 1.0, 1.0),
        (WeightBounds(0.2, 0.2, 0.5), 2, 0.5, 0.5),
    ):
        got = window_contraction_chain(bounds, n, tau, T)
        want = independent_eta_chain(bounds, n, tau, T)
        np.testing.assert_allclose(got, want, rtol=1e-12)


def test_eta_chain_n2_structure():
    bounds = WeightBounds(0.2, 0.2, 0.5)
    tau, T = 0.5, 0.5
    chain = window_contraction_chain(bounds, 2, tau, T)
    T0 = T + 2 * tau
    T_star = 2 * T0
    assert chain[0] == pytest.approx(
        float(direct_link_gain(T_star, bounds, 2, tau, T_star))
    )
    assert chain[1] == pytest.approx(
        float(relay_link_gain(T0, chain[0], bounds, 2, tau, T_star))
    )


def test_chains_inside_unit_interval_and_monotone():
    for bounds in (UNIT, GENTLE, WeightBounds(0.5, 1.5, 1.0)):
        for n in (2, 3, 4, 6, 10):
            bundle = build_certificates(bounds, n, tau_D=0.25, T=n * 0.25)
            for chain in (bundle.eta_chain, bundle.c_chain, bundle.delta_chain):
                assert np.all(chain > 0.0) and np.all(chain < 1.0)
                assert np.all(np.diff(chain) >= -1e-15)
            assert 0.0 < bundle.eta_star < 1.0
            assert 0.0 < bundle.c_hat < 1.0
            assert 0.0 < bundle.delta_hat < 1.0


def test_gentle_chains_strictly_increase():
    bundle = build_certificates(GENTLE, 4, tau_D=0.4, T=0.6)
    for chain in (bundle.eta_chain, bundle.c_chain, bundle.delta_chain):
        assert np.all(np.diff(chain) > 0.0)


# -------------------------------------------------------- envelope factories


def test_siss_envelope_frozen_coefficient():
    # independent evaluation of the printed envelope coefficient
    bundle = build_certificates(UNIT, n=2, tau_D=1.0, T=1.0)
    object.__setattr__(bundle, "eta_star", 0.9)  # pin the factor for the check
    object.__setattr__(bundle, "gamma1", math.sqrt(2) * 5)
    object.__setattr__(bundle, "gamma2", math.sqrt(2) * 5)
    object.__setattr__(bundle, "T_star", 4.0)
    beta, gamma = siss_envelope(bundle)
    assert gamma(1.0) == pytest.approx(283.24473272817244, rel=1e-12)
    assert gamma(0.0) == 0.0
    assert beta(3.7, 0.0) == pytest.approx(3.7)
    assert beta(3.7, 3.9) == pytest.approx(3.7)          # within the first window
    assert beta(3.7, 4.0) == pytest.approx(0.9 * 3.7)    # one full window


def test_siss_envelope_beta_is_decaying_and_gamma_class_k():
    bundle = build_certificates(GENTLE, n=3, tau_D=0.4, T=0.6)
    beta, gamma = siss_envelope(bundle)
    ts = np.linspace(0.0, 40.0, 200)
    vals = beta(2.0, ts)
    assert np.all(np.diff(vals) <= 1e-15)
    assert vals[-1] < vals[0]
    assert beta(0.0, 10.0) == 0.0
    ss = np.linspace(0.0, 5.0, 50)
    gs = gamma(ss)
    assert gs[0] == 0.0 and np.all(np.diff(gs) > 0)


def test_dwell_gain_and_holdover_gain_frozen():
    delta, phi = siiss_functions(UNIT, n=2, tau_D=1.0)
    assert delta(0.0) == pytest.approx(1.0)
    assert phi(0.5, 0.0) == pytest.approx(0.5)
    assert phi(0.5, math.log(2.0)) == pytest.approx(0.75, abs=1e-12)
    s = np.linspace(0, 1.0, 500)
    assert np.all(np.diff(delta(s)) < 0)
    assert np.all(np.diff(phi(0.3, s)) > 0)
    assert phi(0.3, 1e6) <= 1.0
    with pytest.raises(InvalidInputError):
        phi(1.2, 1.0)
    with pytest.raises(InvalidInputError):
        phi(0.0, 1.0)


def test_relay_dwell_gain_shape():
    s = np.linspace(0.0, 0.4, 200)
    vals = relay_dwell_gain(s, 0.6, GENTLE, n=3, tau_D=0.4)
    assert vals[0] == pytest.approx(1.0)
    assert np.all(np.diff(vals) < 0)
    assert vals[-1] > 0.6  # relaying cannot improve on the source level


def test_siiss_envelope_ujlc_frozen_gain():
    c_hat, gamma = siiss_envelope_ujlc(UNIT, n=2, tau_D=1.0, T=1.0)
    assert 0.0 < c_hat < 1.0
    assert gamma(1.0) == pytest.approx(9.0 * math.sqrt(2.0), rel=1e-12)
    c_hat2, _ = siiss_envelope_ujlc(GENTLE, n=3, tau_D=0.4, T=0.6)
    bundle = build_certificates(GENTLE, 3, 0.4, 0.6)
    assert c_hat2 == pytest.approx(bundle.c_hat)


def test_c_chain_matches_independent_recursion():
    bounds, n, tau, T = GENTLE, 4, 0.4, 0.6
    T0 = T + 2 * tau
    Ts = n * T0
    lam = bounds.b_lo + (n - 1) * bounds.a_hi
    lam1 = (n - 2) * bounds.a_hi + bounds.a_lo

    def delta(s):
        return (bounds.b_lo * math.exp(-lam * s) + (n - 1) * bounds.a_hi) / lam

    def phi(eps, s):
        return 1 - math.exp(-(n - 1) * bounds.a_hi * s) * (1 - eps)

    def varphi(d0, s):
        return (
            (n - 2) * bounds.a_hi
            + (d0 + (1 - d0) * math.exp(-lam1 * s)) * bounds.a_lo
        ) / lam1

    cs = [phi(delta(tau), Ts)]
    for _ in range(2, n + 1):
        cs.append(phi(varphi(cs[-1], tau), Ts))
    ds = [delta(tau)]
    for _ in range(2, n + 1):
        ds.append(varphi(phi(ds[-1], tau), tau))
    bundle = build_certificates(bounds, n, tau, T)
    np.testing.assert_allclose(bundle.c_chain, cs, rtol=1e-12)
    np.testing.assert_allclose(bundle.delta_chain, ds, rtol=1e-12)


# ---------------------------------------------------------- discrete bounds


def test_ujlc_discrete_bound_zero_input():
    assert ujlc_discrete_bound(0.7, 3, 2.0, [0.0, 0.0]) == pytest.approx(0.7**2 * 2.0)


def test_jlc_discrete_bound_hand_computed():
    # delta_hat=0.8, n=2, x0=3, integrals [0.5, 0.25]:
    # 0.8^2*3 + 9*sqrt(2)*(0.8*0.5 + 0.25)
    val = jlc_discrete_bound(0.8, 2, 3.0, [0.5, 0.25])
    assert val == pytest.approx(10.193149339882607, rel=1e-12)


def test_siiss_recursion_marks_validation():
    delta_hat, bound = siiss_recursion_jlc(GENTLE, 3, 0.4, [0.0, 2.0, 5.0, 9.0])
    assert 0.0 < delta_hat < 1.0
    assert bound(1.5, [0.0, 0.0, 0.0]) == pytest.approx(delta_hat**3 * 1.5)
    with pytest.raises(InvalidInputError):
        siiss_recursion_jlc(GENTLE, 3, 0.4, [1.0, 2.0])  # must start at 0
    with pytest.raises(InvalidInputError):
        siiss_recursion_jlc(GENTLE, 3, 0.4, [0.0, 2.0, 2.0])  # not increasing
    with pytest.raises(InvalidInputError):
        bound(1.0, [0.1] * 9)  # more integrals than intervals


# ------------------------------------------------------------- report file


def test_certificate_report_round_trip(tmp_path):
    bundle = build_certificates(GENTLE, 3, tau_D=0.4, T=0.6)
    report = certificate_report(bundle)
    for key in ("lambda", "T0", "T_star", "eta_star", "gamma1", "gamma2",
                "c_hat", "delta_hat"):
        assert key in report
    assert report["lambda"] == pytest.approx(
        GENTLE.b_lo + 2 * GENTLE.a_hi
    )
    path = tmp_path / "certificates.json"
    save_certificates(bundle, path)
    assert load_certificates(path) == pytest.approx(report)


def test_report_round_trips_saturated_chains(tmp_path):
    bundle = build_certificates(WeightBounds(0.5, 1.5, 1.0), 6, tau_D=0.25, T=1.5)
    path = tmp_path / "certificates.json"
    save_certificates(bundle, path)
    loaded = load_certificates(path)
    assert 0.0 < loaded["eta_star"] < 1.0


# ------------------------------------------------------ property sampling


@settings(max_examples=80, deadline=None)
@given(
    a_lo=st.floats(min_value=0.05, max_value=1.0),
    a_spread=st.floats(min_value=0.0, max_value=1.0),
    b_lo=st.floats(min_value=0.05, max_value=2.0),
    n=st.integers(min_value=2, max_value=8),
    tau=st.floats(min_value=0.05, max_value=1.0),
    T_mult=st.floats(min_value=0.5, max_value=4.0),
)
def test_bundle_invariants_hypothesis(a_lo, a_spread, b_lo, n, tau, T_mult):
    bounds = WeightBounds(a_lo, a_lo + a_spread, b_lo)
    bundle = build_certificates(bounds, n, tau, T=T_mult * tau)
    for chain in (bundle.eta_chain, bundle.c_chain, bundle.delta_chain):
        assert np.all(chain > 0.0) and np.all(chain < 1.0)
        assert np.all(np.diff(chain) >= -1e-15)
    assert bundle.gamma1 > bundle.c0
    beta, gamma = siss_envelope(bundle)
    assert gamma(0.0) == 0.0 and np.isfinite(gamma(1.0))
    assert beta(1.0, 0.0) == pytest.approx(1.0)
