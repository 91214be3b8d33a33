"""Parameter bundles, initial states, and the lens-geometry coupling fraction.

Conventions used throughout the package:

  * gamma is the free-space decay rate of the excited state, tau the photon
    propagation time between the atoms through the optical element.
  * The optical phases omega0_tau and omega_l_tau are stored as reduced
    phases (radians), never as products of a ~1e15 rad/s frequency with tau;
    only their values mod 2*pi are physical and the product would destroy
    all significant digits.
  * delta = omega0 - omega_L is the laser detuning, phi_l the laser-geometry
    phase picked up between the two atom positions.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy import integrate

from .errors import ParameterRangeError

WEAK_DRIVE_FRACTION = 0.1
STATE_NORM_TOL = 1e-12
PHASE_CONSISTENCY_TOL = 1e-9

PARAM_FILE_KEYS = (
    "gamma",
    "tau",
    "kappa",
    "omega0_tau",
    "omega_l_tau",
    "delta",
    "omega_rabi",
    "phi_l",
    "alpha1_re",
    "alpha1_im",
    "alpha2_re",
    "alpha2_im",
)


class WeakDriveWarning(UserWarning):
    """The drive exceeds the weak-excitation regime the formulas assume."""


class PhaseConsistencyWarning(UserWarning):
    """omega0_tau, omega_l_tau and delta*tau are mutually inconsistent."""


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ParameterRangeError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the coupled two-atom system.

    omega0_tau defaults to omega_l_tau + delta*tau when not given, keeping
    the three phase-related inputs consistent by construction.
    """

    gamma: float
    tau: float
    kappa: float = 0.0
    omega0_tau: float | None = None
    omega_l_tau: float = 0.0
    delta: float = 0.0
    omega_rabi: float = 0.0
    phi_l: float = 0.0

    def __post_init__(self):
        for name in ("gamma", "tau", "kappa", "omega_l_tau", "delta",
                     "omega_rabi", "phi_l"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if self.gamma <= 0:
            raise ParameterRangeError(f"gamma must be > 0, got {self.gamma}")
        if self.tau <= 0:
            raise ParameterRangeError(f"tau must be > 0, got {self.tau}")
        if not 0 <= self.kappa < 1:
            raise ParameterRangeError(f"kappa must lie in [0, 1), got {self.kappa}")
        if self.omega_rabi < 0:
            raise ParameterRangeError(f"omega_rabi must be >= 0, got {self.omega_rabi}")
        if self.omega0_tau is None:
            object.__setattr__(
                self, "omega0_tau", self.omega_l_tau + self.delta * self.tau
            )
        else:
            object.__setattr__(self, "omega0_tau",
                               _finite("omega0_tau", self.omega0_tau))
            if self.omega_rabi > 0:
                mismatch = self.omega0_tau - self.omega_l_tau - self.delta * self.tau
                mismatch = (mismatch + math.pi) % (2 * math.pi) - math.pi
                if abs(mismatch) > PHASE_CONSISTENCY_TOL:
                    warnings.warn(
                        "omega0_tau - omega_l_tau differs from delta*tau by "
                        f"{mismatch:.3e} rad (mod 2*pi)",
                        PhaseConsistencyWarning,
                        stacklevel=3,
                    )
        if self.omega_rabi > WEAK_DRIVE_FRACTION * self.gamma:
            warnings.warn(
                f"omega_rabi = {self.omega_rabi:g} exceeds "
                f"{WEAK_DRIVE_FRACTION:g}*gamma; first-order-in-drive results "
                "are unreliable",
                WeakDriveWarning,
                stacklevel=3,
            )


@dataclass(frozen=True)
class InitialState:
    """Single-excitation initial state alpha1 |e,g> + alpha2 |g,e>."""

    alpha1: complex
    alpha2: complex

    def __post_init__(self):
        a1 = complex(self.alpha1)
        a2 = complex(self.alpha2)
        if not all(math.isfinite(v) for v in (a1.real, a1.imag, a2.real, a2.imag)):
            raise ParameterRangeError("initial amplitudes must be finite")
        norm = abs(a1) ** 2 + abs(a2) ** 2
        if abs(norm - 1.0) > STATE_NORM_TOL:
            raise ParameterRangeError(
                f"initial state norm is {norm!r}, must be 1 within {STATE_NORM_TOL}"
            )
        object.__setattr__(self, "alpha1", a1)
        object.__setattr__(self, "alpha2", a2)


@dataclass(frozen=True)
class LensGeometry:
    """Aperture half-angle and dipole orientation relative to the lens axis."""

    half_angle: float
    dipole_polar_angle: float = 0.0

    def __post_init__(self):
        ha = _finite("half_angle", self.half_angle)
        if not 0 < ha <= math.pi:
            raise ParameterRangeError(
                f"half_angle must lie in (0, pi], got {ha}"
            )
        object.__setattr__(self, "half_angle", ha)
        object.__setattr__(
            self, "dipole_polar_angle",
            _finite("dipole_polar_angle", self.dipole_polar_angle),
        )


@dataclass
class AmplitudeTrace:
    """Excited-state amplitudes of both atoms on a common time grid.

    times is stored in units of tau. solver_tag records whether the values
    come from the closed-form series or the delay-equation integrator.
    """

    times: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    solver_tag: str
    history: Any = field(default=None, repr=False, compare=False)


def coupling_K(params: SystemParams) -> complex:
    """Round-trip scattering amplitude K = kappa (gamma/2) e^{i w_L tau} / (gamma/2 + i Delta)."""
    alpha = params.gamma / 2 + 1j * params.delta
    return params.kappa * (params.gamma / 2) * np.exp(1j * params.omega_l_tau) / alpha


def kappa_from_geometry(geom: LensGeometry, epsabs: float = 1e-12) -> float:
    """Fraction of dipole emission collected by the lens aperture.

    kappa = (3/8 pi) * integral over the cone of half-angle theta0 of
    (1 - |D.n|^2) dOmega, with D the unit dipole vector. Evaluated by 2D
    adaptive quadrature of the full integrand (no azimuthal shortcut).
    """
    a = geom.dipole_polar_angle
    dx, dz = math.sin(a), math.cos(a)

    def integrand(phi: float, theta: float) -> float:
        st = math.sin(theta)
        d_dot_n = dx * st * math.cos(phi) + dz * math.cos(theta)
        return (1.0 - d_dot_n * d_dot_n) * st

    value, err = integrate.dblquad(
        integrand, 0.0, geom.half_angle, 0.0, 2 * math.pi,
        epsabs=epsabs, epsrel=epsabs,
    )
    kappa = 3.0 / (8.0 * math.pi) * value
    return min(kappa, 1.0) if kappa > 1.0 - 1e-14 else kappa


def load_param_file(path) -> dict[str, float]:
    """Read a flat key=value parameter file; '#' starts a comment."""
    values: dict[str, float] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterRangeError(
                    f"{path}:{lineno}: expected key=value, got {raw.rstrip()!r}"
                )
            key, _, text = line.partition("=")
            key = key.strip()
            if key not in PARAM_FILE_KEYS:
                raise ParameterRangeError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = float(text.strip())
            except ValueError as exc:
                raise ParameterRangeError(
                    f"{path}:{lineno}: bad numeric value {text.strip()!r}"
                ) from exc
    return values


def params_from_values(values: dict[str, float]) -> tuple[SystemParams, InitialState]:
    """Build (SystemParams, InitialState) from parameter-file style values."""
    params = SystemParams(
        gamma=values.get("gamma", 1.0),
        tau=values.get("tau", 1.0),
        kappa=values.get("kappa", 0.0),
        omega0_tau=values.get("omega0_tau"),
        omega_l_tau=values.get("omega_l_tau", 0.0),
        delta=values.get("delta", 0.0),
        omega_rabi=values.get("omega_rabi", 0.0),
        phi_l=values.get("phi_l", 0.0),
    )
    init = InitialState(
        alpha1=complex(values.get("alpha1_re", 1.0), values.get("alpha1_im", 0.0)),
        alpha2=complex(values.get("alpha2_re", 0.0), values.get("alpha2_im", 0.0)),
    )
    return params, init
