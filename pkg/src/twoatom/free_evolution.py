"""Closed-form series evolution of the undriven single-excitation system.

The spontaneous dynamics decompose into symmetric/antisymmetric channels
whose amplitudes are exact finite sums of delayed terms I_k(t); the photon
mode amplitudes are the companion sums of H_k(t, omega). Both families
switch on sharply at t = k*tau (Heaviside with Theta(0) = 1), so every sum
here truncates exactly at k_max = floor(t/tau) with no truncation error.

Unit conventions: scalar time arguments named `t` are in absolute units
(same units as tau and 1/gamma); grid arguments named `times` are in units
of tau, matching AmplitudeTrace.times and the CSV output columns.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterRangeError
from .model import AmplitudeTrace, InitialState, SystemParams
from .special_fns import MAX_SERIES_TERMS, regularized_lower_gamma

__all__ = [
    "AmplitudeTrace",
    "SpectrumResult",
    "i_k_term",
    "h_k_term",
    "evolve_free",
    "evolve_symmetric_channels",
    "photon_amplitude",
    "emission_spectrum",
    "two_atom_angular_spectrum",
]


@dataclass
class SpectrumResult:
    """Emission spectrum snapshot |b_g(omega, t)|^2 on a frequency grid.

    omegas holds (omega - omega0)/gamma; time is in units of tau and may be
    +inf for the steady spectrum; normalization is 'raw-shape' (bare
    |b_g|^2) or 'free-space-peak' (divided by the kappa=0 resonance peak).
    """

    omegas: np.ndarray
    values: np.ndarray
    time: float
    theta: float
    normalization: str


def _k_max(t: float, tau: float) -> int:
    if t < 0:
        return -1
    k = math.floor(t / tau)
    if k > MAX_SERIES_TERMS:
        raise ParameterRangeError(
            f"t/tau = {t / tau:g} needs more than {MAX_SERIES_TERMS} delay terms"
        )
    return k


def _checked_grid(times) -> np.ndarray:
    grid = np.asarray(times, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ParameterRangeError("time grid must be a nonempty 1D array")
    if np.any(grid < 0):
        raise ParameterRangeError("time grid must be nonnegative")
    if np.any(np.diff(grid) < 0):
        raise ParameterRangeError("time grid must be sorted ascending")
    return grid


def i_k_term(k: int, t: float, params: SystemParams) -> complex:
    """k-fold delayed decay term I_k(t); exactly 0 for t < k*tau."""
    if k < 0 or k != int(k):
        raise ParameterRangeError(f"k must be a nonnegative integer, got {k!r}")
    k = int(k)
    u = t - k * params.tau
    if u < 0:
        return 0j
    if k == 0:
        return cmath.exp(-params.gamma * u / 2)
    if u == 0 or params.kappa * params.gamma * u / 2 == 0:
        return 0j
    # ((-kappa (gamma/2) e^{i w0 tau})^k / k!) u^k e^{-gamma u / 2}, log space
    log_mag = (k * math.log(params.kappa * params.gamma * u / 2)
               - math.lgamma(k + 1) - params.gamma * u / 2)
    phase = k * (math.pi + params.omega0_tau)
    return cmath.exp(complex(log_mag, phase))


def _i_parity_sums(params: SystemParams, t_abs: np.ndarray):
    """(sum_k I_2k, sum_k I_2k+1) on an absolute-time grid."""
    even = np.zeros(t_abs.shape, dtype=complex)
    odd = np.zeros(t_abs.shape, dtype=complex)
    kmax = _k_max(float(t_abs[-1]), params.tau) if t_abs.size else -1
    for k in range(max(kmax, 0) + 1):
        u = t_abs - k * params.tau
        live = u >= 0
        if not live.any():
            break
        target = even if k % 2 == 0 else odd
        if k == 0:
            target[live] += np.exp(-params.gamma * u[live] / 2)
            continue
        if params.kappa == 0:
            break
        uk = u[live]
        vals = np.zeros(uk.shape, dtype=complex)
        pos = params.kappa * params.gamma * uk / 2 > 0
        if pos.any():
            log_mag = (k * np.log(params.kappa * params.gamma * uk[pos] / 2)
                       - math.lgamma(k + 1) - params.gamma * uk[pos] / 2)
            vals[pos] = np.exp(log_mag + 1j * k * (math.pi + params.omega0_tau))
        target[live] += vals
    return even, odd


def evolve_free(params: SystemParams, init: InitialState, times) -> AmplitudeTrace:
    """Excited-state amplitudes b1, b2 on a grid of times (units of tau)."""
    grid = _checked_grid(times)
    even, odd = _i_parity_sums(params, grid * params.tau)
    b1 = init.alpha1 * even + init.alpha2 * odd
    b2 = init.alpha2 * even + init.alpha1 * odd
    return AmplitudeTrace(times=grid, b1=b1, b2=b2, solver_tag="series")


def evolve_symmetric_channels(params: SystemParams, cplus0: complex,
                              cminus0: complex, times):
    """Symmetric/antisymmetric channel amplitudes C_+(t), C_-(t).

    C_+-(t) = C_+-(0) sum_k (+-1)^k I_k(t); the atomic amplitudes are
    reconstructed as b1 = (C_+ + C_-)/2, b2 = (C_+ - C_-)/2.
    """
    grid = _checked_grid(times)
    even, odd = _i_parity_sums(params, grid * params.tau)
    return cplus0 * (even + odd), cminus0 * (even - odd)


def _mode_alpha_K(params: SystemParams, delta_mu, omega_tau):
    alpha = params.gamma / 2 + 1j * np.asarray(delta_mu, dtype=float)
    k_omega = (params.kappa * (params.gamma / 2)
               * np.exp(1j * np.asarray(omega_tau, dtype=float)) / alpha)
    return alpha, k_omega


def _h_parity_sums(params: SystemParams, t_abs, delta_mu, omega_tau):
    """(sum_k H_2k, sum_k H_2k+1) with broadcasting over time/frequency."""
    t_abs, delta_mu, omega_tau = np.broadcast_arrays(
        np.asarray(t_abs, dtype=float),
        np.asarray(delta_mu, dtype=float),
        np.asarray(omega_tau, dtype=float),
    )
    alpha, k_omega = _mode_alpha_K(params, delta_mu, omega_tau)
    even = np.zeros(t_abs.shape, dtype=complex)
    odd = np.zeros(t_abs.shape, dtype=complex)
    kmax = _k_max(float(np.max(t_abs)), params.tau)
    factor = np.ones(t_abs.shape, dtype=complex)  # running (-K_omega)^k
    for k in range(kmax + 1):
        u = t_abs - k * params.tau
        live = u >= 0
        if not live.any():
            break
        p = np.zeros(t_abs.shape, dtype=complex)
        p[live] = regularized_lower_gamma(k + 1, (alpha * u)[live])
        target = even if k % 2 == 0 else odd
        target += factor * p
        if params.kappa == 0:
            break
        factor = factor * (-k_omega)
    return even, odd


def _h_parity_sums_inf(params: SystemParams, delta_mu, omega_tau):
    """Long-time limits: geometric sums of H_k at t = inf."""
    _, k_omega = _mode_alpha_K(params, delta_mu, omega_tau)
    denom = 1.0 - k_omega ** 2
    return 1.0 / denom, -k_omega / denom


def h_k_term(k: int, t: float, delta_mu: float, params: SystemParams) -> complex:
    """Photon-mode series term H_k(t, omega), with delta_mu = omega0 - omega.

    The mode phase omega*tau is derived from the stored reduced phase as
    omega0_tau - delta_mu*tau, so that only phase differences near resonance
    enter (never a raw optical frequency times tau).
    """
    if k < 0 or k != int(k):
        raise ParameterRangeError(f"k must be a nonnegative integer, got {k!r}")
    k = int(k)
    u = t - k * params.tau
    if u < 0:
        return 0j
    omega_tau = params.omega0_tau - delta_mu * params.tau
    alpha, k_omega = _mode_alpha_K(params, delta_mu, omega_tau)
    if k > 0 and params.kappa == 0:
        return 0j
    p = regularized_lower_gamma(k + 1, alpha * u)
    return complex((-k_omega) ** k * p)


def _mode_amplitude(params: SystemParams, init: InitialState, t, delta_mu,
                    theta, emitter: str = "both"):
    """b_g(omega, t) for an array of detunings; t may be math.inf.

    emitter selects which atom's scattered field reaches the detector:
    'both' (default, interfering sum), 'atom-1' or 'atom-2' for the
    individual emission amplitudes b_g^(j).
    """
    delta_mu = np.atleast_1d(np.asarray(delta_mu, dtype=float))
    omega_tau = params.omega0_tau - delta_mu * params.tau
    alpha, _ = _mode_alpha_K(params, delta_mu, omega_tau)
    if np.isinf(t):
        even, odd = _h_parity_sums_inf(params, delta_mu, omega_tau)
    else:
        even, odd = _h_parity_sums(params, t, delta_mu, omega_tau)
    atom1 = init.alpha1 * even + init.alpha2 * odd
    atom2 = init.alpha2 * even + init.alpha1 * odd
    if emitter == "atom-1":
        return atom1 / alpha
    phase2 = np.exp(-1j * omega_tau * math.cos(theta))
    if emitter == "atom-2":
        return phase2 * atom2 / alpha
    if emitter != "both":
        raise ParameterRangeError(f"unknown emitter {emitter!r}")
    return (atom1 + phase2 * atom2) / alpha


def photon_amplitude(params: SystemParams, init: InitialState, t: float,
                     delta_mu: float, theta: float) -> complex:
    """Photon amplitude b_g at detuning delta_mu = omega0 - omega, angle theta.

    Gauge: atom 1 sits at the phase origin; the atom-2 contribution carries
    the relative phase exp(-i (omega tau) cos theta). t is absolute time,
    math.inf selects the closed-form long-time limit.
    """
    if not np.isinf(t) and t < 0:
        raise ParameterRangeError("t must be >= 0")
    return complex(_mode_amplitude(params, init, t, delta_mu, theta)[0])


def emission_spectrum(params: SystemParams, init: InitialState, t: float,
                      theta: float, omega_grid,
                      normalization: str = "raw-shape",
                      emitter: str = "both") -> SpectrumResult:
    """|b_g|^2 over a grid of (omega - omega0)/gamma at fixed time and angle.

    emitter = 'both' gives the detected (interfering) spectrum; 'atom-1' or
    'atom-2' isolate one atom's emission probability S_j(omega, t).
    """
    grid = np.asarray(omega_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ParameterRangeError("omega grid must be a nonempty 1D array")
    if normalization not in ("raw-shape", "free-space-peak"):
        raise ParameterRangeError(f"unknown normalization {normalization!r}")
    if not np.isinf(t) and t < 0:
        raise ParameterRangeError("t must be >= 0")
    delta_mu = -grid * params.gamma
    amp = _mode_amplitude(params, init, t, delta_mu, theta, emitter=emitter)
    values = np.abs(amp) ** 2
    if normalization == "free-space-peak":
        values = values * (params.gamma / 2) ** 2
    return SpectrumResult(
        omegas=grid,
        values=values,
        time=t / params.tau if not np.isinf(t) else math.inf,
        theta=float(theta),
        normalization=normalization,
    )


def two_atom_angular_spectrum(params: SystemParams, init: InitialState,
                              omega_grid, theta_grid) -> np.ndarray:
    """Steady |b_g(omega, inf)|^2 over (theta, omega); rows follow theta_grid."""
    omegas = np.asarray(omega_grid, dtype=float)
    thetas = np.asarray(theta_grid, dtype=float)
    if omegas.ndim != 1 or thetas.ndim != 1 or omegas.size == 0 or thetas.size == 0:
        raise ParameterRangeError("omega and theta grids must be nonempty 1D arrays")
    delta_mu = -omegas * params.gamma
    out = np.empty((thetas.size, omegas.size), dtype=float)
    for i, theta in enumerate(thetas):
        amp = _mode_amplitude(params, init, math.inf, delta_mu, float(theta))
        out[i] = np.abs(amp) ** 2
    return out
