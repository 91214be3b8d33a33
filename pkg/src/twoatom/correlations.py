"""Second-order (intensity-intensity) correlations of the scattered light.

G2(phi1, phi2; t') is the unnormalized probability density for detecting a
photon at detector phase phi1 and a second one a delay t' later at phase
phi2, with both atoms weakly driven and already in steady state. The full
expression combines the driven steady amplitudes, the delayed-decay sums
I_k(t'), and the driven-response sums H_k(t', omega_L); all series truncate
exactly through their step functions.
"""

from __future__ import annotations

import cmath
import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .errors import NormalizationError, ParameterRangeError
from .free_evolution import (
    _checked_grid,
    _h_parity_sums,
    _h_parity_sums_inf,
    _i_parity_sums,
    _k_max,
)
from .model import SystemParams, coupling_K
from .special_fns import regularized_lower_gamma

__all__ = ["G2Result", "g2", "g2_normalized", "g2_longtime", "two_photon_amplitude_B"]


@dataclass
class G2Result:
    """Correlation values over a delay grid for one detector-phase pair."""

    phi1: float
    phi2: float
    tprimes: np.ndarray
    values: np.ndarray
    params_hash: str


def _params_hash(params: SystemParams) -> str:
    return hashlib.sha256(repr(params).encode()).hexdigest()[:16]


def _prefactor(params: SystemParams) -> float:
    K = coupling_K(params)
    return (16 * params.omega_rabi ** 4
            / ((params.gamma ** 2 + 4 * params.delta ** 2) ** 2
               * abs(1 - K ** 2) ** 2))


def _detector_coefficients(params: SystemParams, phi1: float, phi2: float):
    K = coupling_K(params)
    e1 = cmath.exp(1j * phi1)
    e2 = cmath.exp(1j * phi2)
    el = cmath.exp(1j * params.phi_l)
    first_det = 1 + e1 * el - K * (e1 + e2)
    h_even_c = 1 + e2 * el
    h_odd_c = el + e2
    i_scale = el * (1 - K * math.cos(params.phi_l))
    i_even_c = e1 + e2
    i_odd_c = 1 + e1 * e2
    return first_det, h_even_c, h_odd_c, i_scale, i_even_c, i_odd_c


def g2(params: SystemParams, phi1: float, phi2: float, tprimes) -> G2Result:
    """Unnormalized G2 over a delay grid (units of tau)."""
    if params.omega_rabi <= 0:
        raise ParameterRangeError("g2 requires omega_rabi > 0")
    grid = _checked_grid(tprimes)
    t_abs = grid * params.tau
    first_det, h_even_c, h_odd_c, i_scale, i_even_c, i_odd_c = \
        _detector_coefficients(params, phi1, phi2)
    h_even, h_odd = _h_parity_sums(params, t_abs, params.delta, params.omega_l_tau)
    i_even, i_odd = _i_parity_sums(params, t_abs)
    rotation = np.exp(-1j * params.delta * t_abs)
    amp = (first_det * (h_even_c * h_even + h_odd_c * h_odd)
           + i_scale * rotation * (i_even_c * i_even + i_odd_c * i_odd))
    values = _prefactor(params) * np.abs(amp) ** 2
    return G2Result(
        phi1=float(phi1), phi2=float(phi2), tprimes=grid, values=values,
        params_hash=_params_hash(params),
    )


def g2_longtime(params: SystemParams, phi1: float, phi2: float) -> float:
    """Factorized t' -> inf limit of G2 (product of steady detector rates)."""
    first_det, h_even_c, h_odd_c, _, _, _ = \
        _detector_coefficients(params, phi1, phi2)
    h_even, h_odd = _h_parity_sums_inf(params, params.delta, params.omega_l_tau)
    amp = first_det * (h_even_c * h_even + h_odd_c * h_odd)
    return float(_prefactor(params) * abs(complex(amp)) ** 2)


def g2_normalized(params: SystemParams, phi1: float, phi2: float,
                  tprimes) -> G2Result:
    """G2 divided by its factorized long-time plateau, so g2(inf) -> 1."""
    raw = g2(params, phi1, phi2, tprimes)
    plateau = g2_longtime(params, phi1, phi2)
    if not math.isfinite(plateau) or plateau <= 1e-20 * _prefactor(params):
        raise NormalizationError(
            "long-time plateau vanishes (dark-fringe detector); "
            "normalized correlation undefined"
        )
    return G2Result(
        phi1=raw.phi1, phi2=raw.phi2, tprimes=raw.tprimes,
        values=raw.values / plateau, params_hash=raw.params_hash,
    )


def _echo_term(k: int, s: complex) -> complex:
    """(-1)^k e^{-2s} gamma(k+1, -s)/k!, the reflected part of F_k."""
    sign = -1.0 if k % 2 else 1.0
    if abs(s) <= k + 8:
        return sign * cmath.exp(-2 * s) * regularized_lower_gamma(k + 1, -s)
    # complement form: e^{-2s} gamma(k+1,-s)/k! = e^{-2s} - sum_m e^{-s}(-s)^m/m!
    log_ms = cmath.log(-s)
    acc = cmath.exp(-2 * s)
    for m in range(k + 1):
        acc -= cmath.exp(m * log_ms - s - math.lgamma(m + 1))
    return sign * acc


def two_photon_amplitude_B(params: SystemParams, t: float) -> complex:
    """Two-photon excitation amplitude B(t) = <e,e,0|U(t)|g,g,0>.

    Second order in the drive; the symmetric phase convention is used, in
    which the closed long-time form is
    -(Omega^2/2) (2 - 2 K cos phi_l) / (alpha^2 (1 - K^2)).
    """
    if params.omega_rabi <= 0:
        raise ParameterRangeError("two_photon_amplitude_B requires omega_rabi > 0")
    alpha = params.gamma / 2 + 1j * params.delta
    K = complex(coupling_K(params))
    pref = -params.omega_rabi ** 2 / alpha ** 2
    if np.isinf(t):
        return pref * (1 - K * math.cos(params.phi_l)) / (1 - K ** 2)
    if t < 0:
        raise ParameterRangeError("t must be >= 0")
    even = 0j
    odd = 0j
    factor = 1.0 + 0j  # running (-K)^k
    for k in range(_k_max(t, params.tau) + 1):
        u = t - k * params.tau
        s = alpha * u
        f_k = factor * 0.5 * (regularized_lower_gamma(k + 1, s)
                              + _echo_term(k, s)) if u > 0 else 0j
        if k % 2 == 0:
            even += f_k
        else:
            odd += f_k
        factor *= -K
    return pref * (2 * even + 2 * math.cos(params.phi_l) * odd)
