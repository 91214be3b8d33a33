"""Weakly driven dynamics: transients, steady states, rates, visibilities.

Amplitudes are first order in the drive Omega; the laser enters through the
detuning delta, the path phase omega_l_tau, and the geometry phase phi_l.
Atom 1 is the phase origin (r1 gauge): the drive source for atom 2 carries
exp(i phi_l). Populations and rates are gauge independent.

Elastic scattering rates are reported as the dimensionless coefficient
multiplying 2*pi*delta(omega - omega_L) * g^2 * Omega^2; the delta-function
line itself is not representable numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NormalizationError, ParameterRangeError
from .free_evolution import _checked_grid, _h_parity_sums, _h_parity_sums_inf
from .model import AmplitudeTrace, SystemParams, coupling_K

__all__ = [
    "RateResult",
    "evolve_driven",
    "steady_excitation",
    "first_order_excitation",
    "rate_incoherent",
    "rate_coherent_farfield",
    "rate_lens_mode",
    "rate_lens_total",
    "scan_rate",
    "visibility",
]

DETECTORS = (
    "incoherent-sum",
    "coherent-farfield",
    "lens-mode-1",
    "lens-mode-2",
    "lens-mode-total",
)


@dataclass
class RateResult:
    """Dimensionless elastic-rate coefficient for a named detector geometry."""

    detector: str
    value: float
    geometry: dict


def _alpha(params: SystemParams) -> complex:
    return params.gamma / 2 + 1j * params.delta


def _require_atom(atom: int) -> int:
    if atom not in (1, 2):
        raise ParameterRangeError(f"atom must be 1 or 2, got {atom!r}")
    return atom


def evolve_driven(params: SystemParams, times) -> AmplitudeTrace:
    """Driven amplitudes c1(t), c2(t) from |g,g,0> on a grid (units of tau)."""
    if params.omega_rabi <= 0:
        raise ParameterRangeError("evolve_driven requires omega_rabi > 0")
    grid = _checked_grid(times)
    even, odd = _h_parity_sums(
        params, grid * params.tau, params.delta, params.omega_l_tau
    )
    pref = -1j * params.omega_rabi / _alpha(params)
    phase = np.exp(1j * params.phi_l)
    c1 = pref * (even + phase * odd)
    c2 = pref * (phase * even + odd)
    return AmplitudeTrace(times=grid, b1=c1, b2=c2, solver_tag="series")


def steady_excitation(params: SystemParams, atom: int = 1) -> float:
    """Steady excited-state population |c_e|^2(t -> inf) of one atom."""
    _require_atom(atom)
    sign = 1.0 if atom == 1 else -1.0
    K = coupling_K(params)
    numer = abs(1.0 - K * np.exp(1j * sign * params.phi_l)) ** 2
    denom = (params.gamma ** 2 / 4 + params.delta ** 2) * abs(1.0 - K ** 2) ** 2
    return params.omega_rabi ** 2 * numer / denom


def first_order_excitation(params: SystemParams, atom: int = 1) -> float:
    """Steady population expanded to first order in kappa.

    Equals (Omega^2/(gamma^2/4 + Delta^2)) *
    (1 - 2 kappa A cos[omega_l_tau +- phi_l - phi]) with A, phi the
    resonance-weight amplitude and phase, A = 1/sqrt(1 + (2 Delta/gamma)^2),
    tan phi = 2 Delta / gamma. Intended for kappa << 1.
    """
    _require_atom(atom)
    sign = 1.0 if atom == 1 else -1.0
    a_weight = 1.0 / math.sqrt(1.0 + (2 * params.delta / params.gamma) ** 2)
    phi = math.atan2(2 * params.delta, params.gamma)
    pref = params.omega_rabi ** 2 / (params.gamma ** 2 / 4 + params.delta ** 2)
    modulation = math.cos(params.omega_l_tau + sign * params.phi_l - phi)
    return pref * (1.0 - 2 * params.kappa * a_weight * modulation)


def _rate_denominator(params: SystemParams) -> float:
    K = coupling_K(params)
    return (params.gamma ** 2 / 4 + params.delta ** 2) * abs(1.0 - K ** 2) ** 2


def rate_incoherent(params: SystemParams) -> RateResult:
    """Both atoms' elastic lines summed without mutual interference."""
    K = coupling_K(params)
    denom = _rate_denominator(params)
    value = sum(
        abs(1.0 - K * np.exp(1j * sign * params.phi_l)) ** 2 / denom
        for sign in (1.0, -1.0)
    )
    return RateResult(
        detector="incoherent-sum",
        value=float(value),
        geometry={"phi_l": params.phi_l, "omega_l_tau": params.omega_l_tau},
    )


def rate_coherent_farfield(params: SystemParams, phi_minus: float,
                           phi_plus: float) -> RateResult:
    """Far-field detector summing both atoms' fields coherently.

    phi_minus and phi_plus are the detector-geometry phases
    (k_L -+ k_mu) . (r1 - r2) / 2.
    """
    K = coupling_K(params)
    value = 4 * abs(math.cos(phi_minus) - K * math.cos(phi_plus)) ** 2
    value /= _rate_denominator(params)
    return RateResult(
        detector="coherent-farfield",
        value=float(value),
        geometry={
            "phi_minus": phi_minus,
            "phi_plus": phi_plus,
            "phi_l": params.phi_l,
            "omega_l_tau": params.omega_l_tau,
        },
    )


def rate_lens_mode(params: SystemParams, atom: int = 1) -> RateResult:
    """Elastic rate into one of the two lens-coupled mode families."""
    _require_atom(atom)
    sign = 1.0 if atom == 1 else -1.0
    phi_l = sign * params.phi_l
    K = coupling_K(params)
    value = 4 * abs(
        math.cos((phi_l - params.omega_l_tau) / 2)
        - K * math.cos((phi_l + params.omega_l_tau) / 2)
    ) ** 2 / _rate_denominator(params)
    return RateResult(
        detector=f"lens-mode-{atom}",
        value=float(value),
        geometry={"phi_l": params.phi_l, "omega_l_tau": params.omega_l_tau},
    )


def rate_lens_total(params: SystemParams) -> RateResult:
    """Sum of the two lens-mode rates (the quantity measured behind the lens)."""
    total = rate_lens_mode(params, 1).value + rate_lens_mode(params, 2).value
    return RateResult(
        detector="lens-mode-total",
        value=total,
        geometry={"phi_l": params.phi_l, "omega_l_tau": params.omega_l_tau},
    )


def scan_rate(params: SystemParams, detector: str, scan_values,
              scan_parameter: str = "omega_l_tau",
              phi_minus: float = 0.0, phi_plus: float = 0.0):
    """Evaluate a named rate over a scan of omega_l_tau or phi_l.

    Returns (rate_atom1, rate_atom2, rate_total) arrays; the per-atom columns
    are zero-filled for the coherent far-field detector, which has no
    per-atom decomposition.
    """
    if detector not in DETECTORS:
        raise ParameterRangeError(f"unknown detector {detector!r}")
    if scan_parameter not in ("omega_l_tau", "phi_l"):
        raise ParameterRangeError(f"unknown scan parameter {scan_parameter!r}")
    values = np.asarray(scan_values, dtype=float)
    r1 = np.zeros(values.shape)
    r2 = np.zeros(values.shape)
    total = np.zeros(values.shape)
    for i, v in enumerate(values):
        fields = {
            "gamma": params.gamma, "tau": params.tau, "kappa": params.kappa,
            "omega_l_tau": params.omega_l_tau, "delta": params.delta,
            "omega_rabi": params.omega_rabi, "phi_l": params.phi_l,
        }
        fields[scan_parameter] = float(v)
        p = SystemParams(**fields)
        if detector == "incoherent-sum":
            K = coupling_K(p)
            denom = _rate_denominator(p)
            r1[i] = abs(1.0 - K * np.exp(1j * p.phi_l)) ** 2 / denom
            r2[i] = abs(1.0 - K * np.exp(-1j * p.phi_l)) ** 2 / denom
        elif detector == "coherent-farfield":
            total[i] = rate_coherent_farfield(p, phi_minus, phi_plus).value
            continue
        elif detector in ("lens-mode-1", "lens-mode-2"):
            atom = int(detector[-1])
            value = rate_lens_mode(p, atom).value
            (r1 if atom == 1 else r2)[i] = value
            total[i] = value
            continue
        else:
            r1[i] = rate_lens_mode(p, 1).value
            r2[i] = rate_lens_mode(p, 2).value
        total[i] = r1[i] + r2[i]
    return r1, r2, total


def visibility(scan) -> float:
    """(max - min)/(max + min) of a scanned rate."""
    values = np.asarray(
        [r.value for r in scan] if len(scan) and isinstance(scan[0], RateResult)
        else scan,
        dtype=float,
    )
    if values.size < 2:
        raise ParameterRangeError("visibility needs a scan of at least 2 points")
    hi, lo = float(values.max()), float(values.min())
    if hi + lo == 0:
        raise NormalizationError("degenerate scan: max = min = 0")
    return (hi - lo) / (hi + lo)
