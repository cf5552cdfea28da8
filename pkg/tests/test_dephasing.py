import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from dephasure.dephasing import (ConcurrenceSeries, ModelParams, alpha_derived,
                                 alpha_verbatim, concurrence_common,
                                 concurrence_individual, gamma_common,
                                 gamma_free_closed_form, gamma_individual, mode_sum)
from dephasure.schedule import PulseSchedule, uniform
from dephasure.spectral import DiscreteSpectrum, GaussianSpectrum

FREE = PulseSchedule()


def toggled_integral(omega, t, times):
    """Brute-force i*w*int_0^t f(t') exp(i w t') dt' with f flipping sign at each pulse."""
    edges = [0.0] + [x for x in times if x <= t] + [t]
    total = 0j
    for j, (a, b) in enumerate(zip(edges, edges[1:])):
        re, _ = integrate.quad(lambda x: math.cos(omega * x), a, b, epsabs=1e-14)
        im, _ = integrate.quad(lambda x: math.sin(omega * x), a, b, epsabs=1e-14)
        total += (-1) ** j * complex(re, im)
    return 1j * omega * total


# --- amplitudes ---------------------------------------------------------------

@given(st.floats(0.1, 3.0), st.floats(0.0, 40.0))
def test_free_amplitude_modulus(omega, t):
    a = alpha_derived(omega, t, FREE)
    assert abs(a) ** 2 == pytest.approx(4 * math.sin(omega * t / 2) ** 2, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 2.0), st.floats(0.0, 12.0),
       st.lists(st.floats(0.05, 12.0), max_size=6, unique=True))
def test_derived_amplitude_matches_brute_force_integral(omega, t, times):
    sched = PulseSchedule(tuple(sorted(times)))
    expected = toggled_integral(omega, t, sched.times)
    assert alpha_derived(omega, t, sched) == pytest.approx(expected, abs=1e-9)


@given(st.floats(0.0, 60.0))
def test_synchronised_train_leaves_amplitude_unchanged(t):
    omega = 1.3
    sched = uniform(2 * math.pi / omega, 70.0)
    assert abs(alpha_derived(omega, t, sched)) == pytest.approx(
        abs(1 - np.exp(1j * omega * t)), abs=1e-12)


def test_antiresonant_interval_amplifies():
    tau = math.pi
    sched = uniform(tau, 10.0)
    a = alpha_derived(1.0, 2 * tau, sched)
    assert a == pytest.approx(-4.0, abs=1e-12)
    assert abs(alpha_derived(1.0, 2 * tau, FREE)) == pytest.approx(0.0, abs=1e-12)


def test_verbatim_equals_derived_without_pulses():
    for omega in (0.3, 1.0, 1.7):
        for t in (0.0, 0.9, 5.0, 31.0):
            assert abs(alpha_verbatim(omega, t, 1.0, 0)) == pytest.approx(
                abs(alpha_derived(omega, t, FREE)), abs=1e-12)


def test_verbatim_first_pulse_agrees():
    tau = math.pi
    assert abs(alpha_verbatim(1.0, 2 * tau, tau, 1)) == pytest.approx(4.0, abs=1e-12)


def test_verbatim_discrepancy_after_two_pulses():
    tau = math.pi / 2
    sched = uniform(tau, 10.0)
    # at the pulse instant itself both moduli are 2
    assert abs(alpha_verbatim(1.0, 2 * tau, tau, 2)) == pytest.approx(2.0, abs=1e-12)
    assert abs(alpha_derived(1.0, 2 * tau, sched)) == pytest.approx(2.0, abs=1e-12)
    # between pulses they part ways; the brute-force integral sides with derived
    t = 2.5 * tau
    derived = alpha_derived(1.0, t, sched)
    verbatim = alpha_verbatim(1.0, t, tau, 2)
    assert derived == pytest.approx(toggled_integral(1.0, t, sched.times), abs=1e-10)
    assert abs(abs(verbatim) - abs(derived)) > 0.5


def test_verbatim_requires_time_past_last_pulse():
    with pytest.raises(ValueError):
        alpha_verbatim(1.0, 1.0, 1.0, 2)


def test_derived_amplitude_is_continuous_at_pulses():
    sched = uniform(0.37, 20.0)
    omega = np.linspace(0.5, 1.5, 41)
    for k, tp in enumerate(sched.times):
        before = PulseSchedule(sched.times[:k])
        left = np.abs(alpha_derived(omega, tp, before))
        right = np.abs(alpha_derived(omega, tp, sched))
        assert np.max(np.abs(left - right)) < 1e-12


def test_verbatim_amplitude_jumps_at_second_pulse():
    tau, omega = math.pi / 2, 0.7
    left = abs(alpha_verbatim(omega, 2 * tau, tau, 1))
    right = abs(alpha_verbatim(omega, 2 * tau, tau, 2))
    assert abs(left - right) > 0.1
    # no jump at the first pulse
    assert abs(alpha_verbatim(omega, tau, tau, 0)) == pytest.approx(
        abs(alpha_verbatim(omega, tau, tau, 1)), abs=1e-12)


# --- exponents ------------------------------------------------------------------

def test_gamma_zero_at_start(paper_spec):
    params = ModelParams.common(paper_spec)
    assert gamma_common(params, uniform(0.5, 10), 0.0) == 0.0


def test_free_gamma_at_one_period(paper_spec):
    params = ModelParams.common(paper_spec)
    expected = 20 * (1 - math.exp(-math.pi ** 2 / 100))
    # 1.87961 is rounded; the exact value is 1.879639
    assert expected == pytest.approx(1.87961, abs=5e-5)
    assert gamma_common(params, FREE, 2 * math.pi) == pytest.approx(expected, rel=1e-10)
    assert gamma_common(params, FREE, 2 * math.pi, method="quad") == pytest.approx(expected, rel=1e-10)


def test_free_gamma_closed_form_values(paper_spec):
    assert gamma_free_closed_form(paper_spec, 0.0) == 0.0
    assert gamma_free_closed_form(paper_spec, math.pi) == pytest.approx(
        20 * (1 + math.exp(-0.25 * (0.1 * math.pi) ** 2)), rel=1e-14)
    assert gamma_free_closed_form(paper_spec, math.pi) == pytest.approx(39.5125, abs=1e-4)
    assert gamma_free_closed_form(paper_spec, 500.0) == pytest.approx(20.0, abs=1e-12)


def test_free_gamma_quadrature_matches_closed_form(paper_spec):
    t = np.linspace(0, 40, 2001)
    g = gamma_common(ModelParams.common(paper_spec), FREE, t)
    exact = gamma_free_closed_form(paper_spec, t)
    assert g[0] == exact[0] == 0.0
    assert np.max(np.abs(g[1:] - exact[1:]) / exact[1:]) <= 1e-8


def test_discrete_sum_matches_adaptive_quadrature_with_pulses(paper_spec):
    params = ModelParams.common(paper_spec)
    sched = uniform(math.pi / 5, 40)
    t = [3.3, 17.2, 39.9]
    np.testing.assert_allclose(gamma_common(params, sched, t),
                               gamma_common(params, sched, t, method="quad"), rtol=1e-8)


def test_synchronised_train_single_mode_matches_free():
    modes = DiscreteSpectrum([1.0], [0.8])
    params = ModelParams.common(modes)
    sched = uniform(2 * math.pi, 40)
    t = np.linspace(0, 40, 401)
    np.testing.assert_allclose(gamma_common(params, sched, t), gamma_common(params, FREE, t),
                               atol=1e-9, rtol=0)


def test_synchronised_train_gaussian_bath(paper_spec):
    params = ModelParams.common(paper_spec)
    sched = uniform(2 * math.pi, 40)
    # one pulse at t = 2pi leaves every mode's amplitude at its free value
    assert gamma_common(params, sched, 2 * math.pi) == pytest.approx(
        gamma_common(params, FREE, 2 * math.pi), abs=1e-9)
    # after an even number of pulses each mode is suppressed by tan^2(w tau / 2)
    modes = params.modes()[0]
    for m in (2, 4):
        t = 2 * math.pi * m
        z = np.exp(1j * modes.omega * 2 * math.pi)
        free_amp = np.abs(z ** m - 1) ** 2
        expected = 2 * np.sum(modes.weight * np.tan(math.pi * modes.omega) ** 2 * free_amp)
        assert gamma_common(params, sched, t) == pytest.approx(expected, rel=1e-9)
        assert gamma_common(params, sched, t) < gamma_common(params, FREE, t)


def test_verbatim_rejects_nonuniform_schedule(paper_spec):
    params = ModelParams.common(paper_spec, form="verbatim")
    with pytest.raises(ValueError):
        gamma_common(params, PulseSchedule((1.0, 2.5)), 3.0)


def test_gamma_requires_matching_bath_kind(paper_spec):
    with pytest.raises(ValueError):
        gamma_common(ModelParams.individual(paper_spec), FREE, 1.0)
    with pytest.raises(ValueError):
        gamma_individual(ModelParams.common(paper_spec), FREE, 1.0)


def test_model_params_validation(paper_spec):
    with pytest.raises(ValueError):
        ModelParams((paper_spec, paper_spec), "common")
    with pytest.raises(ValueError):
        ModelParams((paper_spec,), "individual")
    with pytest.raises(ValueError):
        ModelParams.common(paper_spec, form="other")


# --- concurrence series -----------------------------------------------------------

def test_concurrence_prefactors(paper_spec):
    paper = concurrence_common(ModelParams.common(paper_spec), FREE, [0.0, 2 * math.pi])
    physical = concurrence_common(ModelParams.common(paper_spec, prefactor_mode="physical"),
                                  FREE, [0.0])
    assert paper.concurrence[0] == 0.5
    assert physical.concurrence[0] == 1.0
    assert paper.concurrence[1] == pytest.approx(0.5 * math.exp(-1.8796388842215), rel=1e-10)
    assert paper.concurrence[1] == pytest.approx(0.07632, abs=1e-5)


def test_individual_bath_halves_exponent(paper_spec):
    t = np.linspace(0, 40, 801)
    for sched in (FREE, uniform(math.pi / 5, 40), PulseSchedule((1.0, 4.5, 4.6, 9.0))):
        com = concurrence_common(ModelParams.common(paper_spec), sched, t)
        ind = concurrence_individual(ModelParams.individual(paper_spec), sched, t)
        np.testing.assert_allclose(ind.gamma, com.gamma / 2, rtol=1e-12, atol=0)
        assert np.all(com.concurrence <= ind.concurrence)


def test_individual_values(paper_spec):
    series = concurrence_individual(ModelParams.individual(paper_spec), FREE,
                                    [0.0, 2 * math.pi])
    assert series.concurrence[0] == 0.5
    assert series.concurrence[1] == pytest.approx(0.5 * math.exp(-1.8796388842215 / 2), rel=1e-10)
    assert series.concurrence[1] == pytest.approx(0.19535, abs=1e-5)


def test_distinct_individual_baths():
    a = GaussianSpectrum(2.0, 1.0, 0.1)
    b = GaussianSpectrum(4.0, 1.2, 0.2)
    t = np.linspace(0, 10, 51)
    g = gamma_individual(ModelParams.individual(a, b), FREE, t)
    expected = 0.5 * gamma_free_closed_form(a, t) / 2 + 0.5 * gamma_free_closed_form(b, t) / 2
    np.testing.assert_allclose(g, expected, rtol=1e-8, atol=1e-15)


def test_qubit_splitting_has_no_effect(paper_spec):
    t = np.linspace(0, 20, 101)
    sched = uniform(0.9, 20)
    ref = concurrence_common(ModelParams.common(paper_spec, omega_0=1.0), sched, t)
    for omega_0 in (0.0, 3.7, 250.0):
        other = concurrence_common(ModelParams.common(paper_spec, omega_0=omega_0), sched, t)
        np.testing.assert_array_equal(other.concurrence, ref.concurrence)


def test_gamma_is_nonnegative_and_order_independent(paper_spec):
    params = ModelParams.common(paper_spec)
    sched = uniform(0.8, 30)
    t = np.linspace(0, 30, 301)
    g = gamma_common(params, sched, t)
    assert np.all(g >= 0)
    perm = np.random.default_rng(3).permutation(t.size)
    np.testing.assert_array_equal(gamma_common(params, sched, t[perm]), g[perm])


def test_underflow_clamps_concurrence_but_keeps_gamma():
    series = ConcurrenceSeries.from_gamma([0.0, 1.0], [0.0, 4000.0], 0.5)
    assert series.concurrence[1] == 0.0
    assert series.gamma[1] == 4000.0


def test_mode_sum_rejects_unknown_options(paper_spec):
    with pytest.raises(ValueError):
        mode_sum(paper_spec, FREE, 1.0, method="simpson")
    with pytest.raises(ValueError):
        mode_sum(paper_spec, FREE, 1.0, form="other")
