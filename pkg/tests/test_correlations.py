"""Tests of the two-photon correlation function and the amplitude B(t)."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twoatom.correlations import (
    g2,
    g2_longtime,
    g2_normalized,
    two_photon_amplitude_B,
)
from twoatom.errors import NormalizationError, ParameterRangeError
from twoatom.model import SystemParams

OMEGA_RABI = 0.05


def _params(**kw):
    base = dict(gamma=1.0, tau=20.0, kappa=0.3, omega_l_tau=0.9, delta=0.0,
                omega_rabi=OMEGA_RABI, phi_l=0.0)
    base.update(kw)
    return SystemParams(**base)


def test_drive_required():
    with pytest.raises(ParameterRangeError):
        g2(_params(omega_rabi=0.0), 0.0, 0.0, np.array([0.0]))
    with pytest.raises(ParameterRangeError):
        two_photon_amplitude_B(_params(omega_rabi=0.0), 1.0)


def test_detector_exchange_at_zero_delay():
    params = _params(delta=0.2, phi_l=0.7)
    zero = np.array([0.0])
    for phi1, phi2 in [(0.3, 2.2), (1.0, 4.5), (0.0, math.pi / 3)]:
        a = g2(params, phi1, phi2, zero).values[0]
        b = g2(params, phi2, phi1, zero).values[0]
        assert abs(a - b) <= 1e-12 * max(a, b, 1e-30)


def test_zero_delay_depends_only_on_phase_difference():
    params = _params()
    zero = np.array([0.0])
    diff = 1.1
    values = [g2(params, base, base + diff, zero).values[0]
              for base in (0.0, 0.9, 2.5, 5.0)]
    spread = max(values) - min(values)
    assert spread <= 1e-12 * max(values)


def test_zero_delay_interference_closed_form():
    params = _params(omega_l_tau=math.pi / 2)
    zero = np.array([0.0])
    denom = (1 + params.kappa ** 2
             + 2 * params.kappa * math.cos(params.omega_l_tau))
    for phi1, phi2 in [(0.0, 0.0), (0.4, 1.9), (math.pi, math.pi / 2)]:
        expected = (64 * OMEGA_RABI ** 4 / params.gamma ** 4
                    * math.cos((phi1 - phi2) / 2) ** 2 / denom)
        value = g2(params, phi1, phi2, zero).values[0]
        assert abs(value - expected) < 1e-10 * 64 * OMEGA_RABI ** 4


def test_opposite_fringe_detectors_never_coincide():
    params = _params()
    zero = np.array([0.0])
    scale = 64 * OMEGA_RABI ** 4
    for phi1 in (0.0, 0.8, 2.0):
        value = g2(params, phi1, phi1 + math.pi, zero).values[0]
        assert value <= 1e-25 * scale


def test_long_time_factorization():
    params = _params(tau=1.0, kappa=0.25, delta=0.3, phi_l=0.8)
    t_end = (60.0 / params.gamma + 10 * params.tau) / params.tau
    value = g2(params, 0.4, 1.3, np.array([t_end])).values[0]
    plateau = g2_longtime(params, 0.4, 1.3)
    assert value == pytest.approx(plateau, rel=1e-6)


def test_normalized_plateau_is_one():
    params = _params(tau=1.0, kappa=0.0)
    tprimes = np.array([40.0 / params.gamma / params.tau])
    result = g2_normalized(params, 0.0, 0.0, tprimes)
    assert result.values[0] == pytest.approx(1.0, abs=1e-6)


def test_normalized_dark_fringe_signaled():
    params = _params(kappa=0.0)
    with pytest.raises(NormalizationError):
        g2_normalized(params, math.pi, 0.3, np.array([0.0, 1.0]))


def test_dark_fringe_transient_rate_near_gamma():
    """With no coupling the dark-fringe correlation decays at the intensity
    rate gamma (fitted within 10%)."""
    params = _params(tau=1.0, kappa=0.0)
    tprimes = np.linspace(0.5, 3.0, 30)
    values = g2(params, math.pi, 0.6, tprimes).values
    slope = np.polyfit(tprimes * params.tau, np.log(values), 1)[0]
    assert abs(-slope - params.gamma) < 0.1 * params.gamma


@settings(max_examples=100, deadline=None)
@given(
    kappa=st.floats(min_value=0.0, max_value=0.8),
    phi1=st.floats(min_value=0.0, max_value=2 * math.pi),
    phi2=st.floats(min_value=0.0, max_value=2 * math.pi),
    phi_l=st.floats(min_value=0.0, max_value=2 * math.pi),
    delta=st.floats(min_value=-0.5, max_value=0.5),
    tprime=st.floats(min_value=0.0, max_value=8.0),
)
def test_nonnegative_and_finite(kappa, phi1, phi2, phi_l, delta, tprime):
    params = _params(kappa=kappa, phi_l=phi_l, delta=delta,
                     omega0_tau=None)
    value = g2(params, phi1, phi2, np.array([tprime])).values[0]
    assert np.isfinite(value)
    assert value >= 0.0


def test_b_amplitude_uncoupled_closed_form():
    """kappa = 0: B(t) = -(Omega/alpha)^2 (1 - e^{-alpha t})^2."""
    params = _params(kappa=0.0, delta=0.3)
    alpha = params.gamma / 2 + 1j * params.delta
    for t in (0.5, 3.0, 25.0, 70.0):
        expected = (-(params.omega_rabi / alpha) ** 2
                    * (1 - np.exp(-alpha * t)) ** 2)
        assert abs(two_photon_amplitude_B(params, t) - expected) < 1e-13


def test_b_amplitude_single_term_before_delay():
    """For t < tau only the zeroth echo contributes, so kappa is irrelevant."""
    params = _params(kappa=0.6, tau=5.0)
    free = _params(kappa=0.0, tau=5.0)
    for t in (0.1, 2.0, 4.9):
        assert abs(two_photon_amplitude_B(params, t)
                   - two_photon_amplitude_B(free, t)) < 1e-15


def test_b_amplitude_reaches_steady_value():
    params = _params(tau=1.0, kappa=0.35, delta=0.2, phi_l=0.9)
    t = 80.0 / params.gamma + 10 * params.tau
    steady = two_photon_amplitude_B(params, math.inf)
    assert abs(two_photon_amplitude_B(params, t) - steady) < 1e-6 * abs(steady)


def test_b_amplitude_uncoupled_resonant_steady_value():
    params = _params(kappa=0.0, delta=0.0)
    expected = -4 * params.omega_rabi ** 2 / params.gamma ** 2
    assert two_photon_amplitude_B(params, math.inf) == pytest.approx(expected)


def test_params_hash_tracks_parameters():
    a = g2(_params(), 0.0, 1.0, np.array([0.0]))
    b = g2(_params(), 0.0, 1.0, np.array([0.0]))
    c = g2(_params(kappa=0.31), 0.0, 1.0, np.array([0.0]))
    assert a.params_hash == b.params_hash
    assert a.params_hash != c.params_hash
