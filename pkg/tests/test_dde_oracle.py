"""Tests of the delay-equation integrator and quadrature oracles.

These exercise the oracle on cases with independently known answers; the
series-vs-oracle equivalence itself lives in the verification suite.
"""

import math

import numpy as np
import pytest

from twoatom.dde_oracle import (
    b_coefficient_quadrature,
    field_amplitude_quadrature,
    integrate_driven_dde,
    integrate_free_dde,
)
from twoatom.errors import ParameterRangeError
from twoatom.model import InitialState, SystemParams


def _params(**kw):
    base = dict(gamma=1.0, tau=1.0, kappa=0.4, omega0_tau=0.8)
    base.update(kw)
    return SystemParams(**base)


def test_tolerance_range_enforced():
    params = _params()
    init = InitialState(1.0, 0.0)
    with pytest.raises(ParameterRangeError):
        integrate_free_dde(params, init, 1.0, tol=1e-13)
    with pytest.raises(ParameterRangeError):
        integrate_free_dde(params, init, 1.0, tol=1e-3)
    with pytest.raises(ParameterRangeError):
        integrate_free_dde(params, init, -1.0)


def test_uncoupled_decay_is_exact_exponential():
    params = _params(kappa=0.0)
    init = InitialState(0.6, 0.8j)
    times = np.linspace(0.0, 8.0, 60)
    trace = integrate_free_dde(params, init, t_end=8.0, tol=1e-12, times=times)
    expected = np.exp(-params.gamma * times * params.tau / 2)
    assert np.abs(trace.b1 - 0.6 * expected).max() < 1e-11
    assert np.abs(trace.b2 - 0.8j * expected).max() < 1e-11


def test_first_interval_is_coupling_independent():
    init = InitialState(1.0, 0.0)
    times = np.linspace(0.0, 0.99, 25)
    free = integrate_free_dde(_params(kappa=0.0), init, 1.0, times=times)
    coupled = integrate_free_dde(_params(kappa=0.8), init, 1.0, times=times)
    assert np.abs(free.b1 - coupled.b1).max() < 1e-12
    assert np.abs(coupled.b2).max() < 1e-12


def test_history_continuity_at_segment_boundaries():
    params = _params(kappa=0.7, omega0_tau=1.4)
    trace = integrate_free_dde(params, InitialState(1.0, 0.0), t_end=6.0,
                               tol=1e-11, times=np.array([0.0]))
    history = trace.history
    for k in range(1, 6):
        before = history(k * params.tau - 1e-13)
        after = history(k * params.tau + 1e-13)
        assert abs(before[0] - after[0]) < 1e-11
        assert abs(before[1] - after[1]) < 1e-11


def test_history_rejects_out_of_range_times():
    params = _params()
    trace = integrate_free_dde(params, InitialState(1.0, 0.0), t_end=2.0,
                               times=np.array([0.0]))
    with pytest.raises(ParameterRangeError):
        trace.history(-0.5)
    with pytest.raises(ParameterRangeError):
        trace.history(2.5)


def test_integrator_convergence_order():
    """Endpoint error vs forced step size fits the solver's nominal order
    (8th); accept +-1 order for the fit.

    The case is oscillatory and slowly decaying so that max_step, not the
    adaptive error controller, determines the step, and the h^8 error stays
    above the rounding floor.
    """
    params = SystemParams(gamma=0.2, tau=3.0, kappa=0.3, omega_l_tau=0.9,
                          delta=8.0, omega_rabi=0.02, phi_l=0.5)
    ref = integrate_driven_dde(params, t_end=3.0, tol=1e-12,
                               times=np.array([1.0]))
    errors = []
    steps = [0.1, 0.05]
    for h in steps:
        rough = integrate_driven_dde(params, t_end=3.0, tol=1e-6,
                                     times=np.array([1.0]), max_step=h)
        errors.append(abs(rough.b1[0] - ref.b1[0]))
    order = math.log(errors[0] / errors[1]) / math.log(steps[0] / steps[1])
    assert 7.0 <= order <= 9.5


def test_driven_gauges_agree_on_populations():
    params = _params(omega_l_tau=0.8, delta=0.3, omega_rabi=0.05, phi_l=1.1,
                     omega0_tau=None)
    times = np.linspace(0.0, 15.0, 80)
    sym = integrate_driven_dde(params, t_end=15.0, gauge="symmetric",
                               times=times)
    r1 = integrate_driven_dde(params, t_end=15.0, gauge="r1", times=times)
    assert np.abs(np.abs(sym.b1) - np.abs(r1.b1)).max() < 1e-10
    assert np.abs(np.abs(sym.b2) - np.abs(r1.b2)).max() < 1e-10
    # the gauges differ by the rigid phase exp(-i phi_l / 2)
    rotation = np.exp(-1j * params.phi_l / 2)
    assert np.abs(sym.b1 - rotation * r1.b1).max() < 1e-10


def test_driven_requires_drive_and_gauge():
    with pytest.raises(ParameterRangeError):
        integrate_driven_dde(_params(), t_end=1.0)
    with pytest.raises(ParameterRangeError):
        integrate_driven_dde(_params(omega_rabi=0.05, omega0_tau=None),
                             t_end=1.0, gauge="bogus")


def test_field_quadrature_matches_series_amplitude():
    from twoatom.free_evolution import photon_amplitude
    params = _params(tau=2.0, kappa=0.4, omega0_tau=1.1)
    init = InitialState(1.0, 0.0)
    for delta_mu, theta in [(0.0, math.pi / 2), (0.6, 0.4), (-1.2, 2.0)]:
        series = photon_amplitude(params, init, 9.0, delta_mu, theta)
        quad = field_amplitude_quadrature(params, init, delta_mu, theta, 9.0,
                                          tol=1e-11)
        assert abs(series - quad) < 1e-9


def test_b_quadrature_matches_series_amplitude():
    from twoatom.correlations import two_photon_amplitude_B
    params = _params(tau=1.5, kappa=0.3, omega_l_tau=0.9, delta=0.2,
                     omega_rabi=0.05, phi_l=0.7, omega0_tau=None)
    for t in (2.0, 10.0):
        series = two_photon_amplitude_B(params, t)
        quad = b_coefficient_quadrature(params, t, tol=1e-11)
        assert abs(series - quad) < 1e-10
