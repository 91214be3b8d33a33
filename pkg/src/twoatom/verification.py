"""Self-contained verification suite: oracle equivalence and closed-form checks.

Each check returns a CheckResult with the worst measured error and its
tolerance; the CLI `verify` subcommand renders these as a report table and
the test suite asserts them individually. Checks are deterministic: equal
inputs produce equal measured values and equal report bytes.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass

import numpy as np

from .correlations import g2
from .dde_oracle import integrate_driven_dde, integrate_free_dde
from .driven_evolution import (
    evolve_driven,
    scan_rate,
    steady_excitation,
    visibility,
)
from .free_evolution import emission_spectrum, evolve_free, i_k_term
from .model import InitialState, LensGeometry, SystemParams, kappa_from_geometry

FAST_SUITE = (
    "free-space-limits",
    "enhancement-factor",
    "g2-closed-form",
    "kappa-geometry",
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str
    runtime: float


# ---------------------------------------------------------------------------
# individual checks


def check_free_oracle() -> tuple[bool, float, float, str]:
    """Series solution vs delay-equation integrator, undriven decay."""
    times = np.linspace(0.0, 10.0, 200)
    worst = 0.0
    init = InitialState(1.0, 0.0)
    for gamma_tau in (10.0, 0.4, 1.0):
        for kappa in (0.0, 0.2, 0.4, 0.8):
            for omega0_tau in (0.0, math.pi / 2, math.pi):
                params = SystemParams(gamma=1.0, tau=gamma_tau, kappa=kappa,
                                      omega0_tau=omega0_tau)
                series = evolve_free(params, init, times)
                oracle = integrate_free_dde(params, init,
                                            t_end=10 * params.tau,
                                            tol=1e-10, times=times)
                worst = max(
                    worst,
                    float(np.abs(series.b1 - oracle.b1).max()),
                    float(np.abs(series.b2 - oracle.b2).max()),
                )
    return worst <= 1e-8, worst, 1e-8, "max |b_series - b_dde| over 36 cases"


def check_driven_oracle() -> tuple[bool, float, float, str]:
    """Series solution vs delay-equation integrator, laser-driven."""
    times = np.linspace(0.0, 10.0, 200)
    worst = 0.0
    for gamma_tau in (10.0, 0.4, 1.0):
        for kappa in (0.0, 0.2, 0.4, 0.8):
            for omega_l_tau in (0.0, math.pi / 2, math.pi):
                params = SystemParams(gamma=1.0, tau=gamma_tau, kappa=kappa,
                                      omega_l_tau=omega_l_tau,
                                      omega_rabi=0.05, phi_l=0.7)
                series = evolve_driven(params, times)
                oracle = integrate_driven_dde(params, t_end=10 * params.tau,
                                              tol=1e-10, gauge="r1",
                                              times=times)
                worst = max(
                    worst,
                    float(np.abs(series.b1 - oracle.b1).max()),
                    float(np.abs(series.b2 - oracle.b2).max()),
                )
    return worst <= 1e-8, worst, 1e-8, "max |c_series - c_dde| over 36 cases"


def check_free_space_limits() -> tuple[bool, float, float, str]:
    """kappa = 0: pure exponential decay and Lorentzian steady spectrum."""
    params = SystemParams(gamma=1.0, tau=1.0, kappa=0.0)
    init = InitialState(0.8, 0.6j)
    times = np.linspace(0.0, 10.0, 400)
    trace = evolve_free(params, init, times)
    decay_err = float(np.abs(
        np.abs(trace.b1) - abs(init.alpha1) * np.exp(-params.gamma * times / 2)
    ).max()) / 1e-10
    grid = np.linspace(-5.0, 5.0, 401)
    spec = emission_spectrum(params, InitialState(1.0, 0.0), math.inf,
                             math.pi / 2, grid)
    lorentz = 1.0 / (params.gamma ** 2 / 4 + (grid * params.gamma) ** 2)
    spec_err = float(np.abs(spec.values / lorentz - 1.0).max()) / 1e-12
    worst = max(decay_err, spec_err)
    return worst <= 1.0, worst, 1.0, \
        "worst error over its tolerance (decay/1e-10, Lorentzian/1e-12)"


def check_steady_state() -> tuple[bool, float, float, str]:
    """Evolved driven population vs closed steady form; tau independence."""
    worst = 0.0
    for kappa in (0.1, 0.2, 0.4):
        for delta in (0.0, 0.5, 1.0):
            for phi_l in (0.0, 1.3, math.pi):
                params = SystemParams(gamma=1.0, tau=1.0, kappa=kappa,
                                      omega_l_tau=0.9, delta=delta,
                                      omega_rabi=0.05, phi_l=phi_l)
                t_end = 60.0 / params.gamma + 10 * params.tau
                trace = evolve_driven(params, np.array([0.0, t_end / params.tau]))
                evolved = abs(trace.b1[-1]) ** 2
                closed = steady_excitation(params, 1)
                worst = max(worst, abs(evolved - closed) / closed)
    rel_err = worst / 1e-6

    # kappa = 0.1 keeps the slowest collective mode fast enough that the
    # transient is below 1e-9 by t_end for every tau in the sweep
    values = []
    for tau in (0.1, 1.0, 10.0):
        params = SystemParams(gamma=1.0, tau=tau, kappa=0.1, omega_l_tau=0.9,
                              delta=0.5, omega_rabi=0.05, phi_l=1.3)
        t_end = 60.0 / params.gamma + 10 * params.tau
        trace = evolve_driven(params, np.array([0.0, t_end / params.tau]))
        values.append(abs(trace.b1[-1]) ** 2)
    spread = (max(values) - min(values)) / max(values) / 1e-9
    worst = max(rel_err, spread)
    return worst <= 1.0, worst, 1.0, \
        "worst error over its tolerance (27-point grid/1e-6, tau spread/1e-9)"


def check_enhancement() -> tuple[bool, float, float, str]:
    """Incoherent-rate fringe: peak = (1+kappa)/(1-kappa) x the fringe mean."""
    kappa = 0.2
    params = SystemParams(gamma=1.0, tau=1.0, kappa=kappa, delta=0.0,
                          phi_l=0.0)
    phases = np.linspace(0.0, 4 * math.pi, 500, endpoint=False)
    _, _, total = scan_rate(params, "incoherent-sum", phases)
    peak_over_mean = total.max() / total.mean()
    err_peak = abs(peak_over_mean - (1 + kappa) / (1 - kappa))
    err_ratio = abs(total.max() / total.min()
                    - (1 + kappa) ** 2 / (1 - kappa) ** 2)
    worst = max(err_peak, err_ratio)
    return worst <= 1e-9, worst, 1e-9, \
        "peak/mean vs 1.5 and max/min vs 2.25 on a 500-point scan"


def _lens_visibility(kappa: float, delta: float, phi_l: float,
                     n_points: int = 4000) -> float:
    params = SystemParams(gamma=1.0, tau=1.0, kappa=kappa, delta=delta,
                          phi_l=phi_l)
    phases = np.linspace(0.0, 4 * math.pi, n_points, endpoint=False)
    _, _, total = scan_rate(params, "lens-mode-total", phases)
    return visibility(total)


def check_visibility_first_order() -> tuple[bool, float, float, str]:
    """Classical fringe visibility |cos phi_l| at vanishing coupling, and the
    doubled fringe frequency of the residual at phi_l = pi/2."""
    worst = 0.0
    for phi_l in np.linspace(0.0, 2 * math.pi, 25):
        v = _lens_visibility(1e-6, 0.0, float(phi_l), n_points=720)
        worst = max(worst, abs(v - abs(math.cos(phi_l))))
    err = worst / 1e-4

    params = SystemParams(gamma=1.0, tau=1.0, kappa=0.2, delta=0.0,
                          phi_l=math.pi / 2)
    phases = np.linspace(0.0, 2 * math.pi, 256, endpoint=False)
    _, _, total = scan_rate(params, "lens-mode-total", phases)
    spectrum = np.abs(np.fft.rfft(total - total.mean()))
    dominant = int(np.argmax(spectrum))
    ok = err <= 1.0 and dominant == 2
    measured = max(err, 0.0 if dominant == 2 else 2.0)
    return ok, measured, 1.0, \
        "V1 error over 1e-4, and dominant fringe harmonic must be 2"


def check_visibility_second_order() -> tuple[bool, float, float, str]:
    """Residual-fringe visibility vs the first-order value kappa*A.

    The scan visibility of the exact rate contains O(kappa^2) corrections, so
    this check is expected to fail at the stated 1e-3 tolerance for the
    near-resonant cases; it is evaluated faithfully and reported as is.
    """
    worst = 0.0
    cases = []
    for kappa in (0.1, 0.2):
        for delta in (0.0, 0.5, 1.0):
            v = _lens_visibility(kappa, delta, math.pi / 2)
            target = kappa / math.sqrt(1.0 + 4 * delta ** 2)
            err = abs(v - target)
            cases.append(f"kappa={kappa},delta={delta}:{err:.2e}")
            worst = max(worst, err)
    return worst <= 1e-3, worst, 1e-3, "; ".join(cases)


def check_g2_closed_form() -> tuple[bool, float, float, str]:
    """g2 at zero delay vs its closed spatial-interference form."""
    zero = np.array([0.0])
    worst = 0.0
    zero_worst = 0.0
    omega_rabi = 0.05
    scale = 64 * omega_rabi ** 4
    for omega_l_tau in (0.0, math.pi / 2, math.pi, 3.9, 5.5):
        params = SystemParams(gamma=1.0, tau=20.0, kappa=0.3,
                              omega_l_tau=omega_l_tau, delta=0.0,
                              omega_rabi=omega_rabi, phi_l=0.0)
        denom = 1 + params.kappa ** 2 + 2 * params.kappa * math.cos(omega_l_tau)
        for phi1 in np.linspace(0.0, 2 * math.pi, 20):
            for phi2 in np.linspace(0.0, 2 * math.pi, 20):
                value = g2(params, float(phi1), float(phi2), zero).values[0]
                expected = scale * math.cos((phi1 - phi2) / 2) ** 2 / denom
                worst = max(worst, abs(value - expected) / scale)
        for phi1 in (0.0, 0.7, 2.1):
            value = g2(params, phi1, phi1 + math.pi, zero).values[0]
            zero_worst = max(zero_worst, value / scale)
    err = max(worst / 1e-10, zero_worst / 1e-25)
    return err <= 1.0, err, 1.0, \
        "closed-form error over 1e-10; dark zeros over 1e-25 (relative)"


def _alternating_i_sum(params: SystemParams, t_abs: float) -> complex:
    total = 0j
    k = 0
    while k * params.tau <= t_abs:
        total += (-1) ** k * i_k_term(k, t_abs, params)
        k += 1
    return total


def check_g2_asymptotics() -> tuple[bool, float, float, str]:
    """Short-delay dark-fringe form, and kappa^2 scaling of the revivals."""
    omega_rabi = 0.05
    params = SystemParams(gamma=1.0, tau=20.0, kappa=0.4, omega_l_tau=math.pi,
                          delta=0.0, omega_rabi=omega_rabi, phi_l=0.0)
    tprimes = np.linspace(0.0, 0.999, 40)
    result = g2(params, math.pi, math.pi, tprimes)
    denom = 1 + params.kappa ** 2 + 2 * params.kappa * math.cos(params.omega0_tau)
    scale = 64 * omega_rabi ** 4
    worst = 0.0
    for tp, value in zip(tprimes, result.values):
        i_sum = _alternating_i_sum(params, tp * params.tau)
        expected = (32 * omega_rabi ** 4 * (1 - math.cos(math.pi)) / denom
                    * abs(i_sum) ** 2)
        worst = max(worst, abs(value - expected) / scale)
    short_err = worst / 1e-10

    revivals = []
    for kappa in (0.2, 0.1):
        p = SystemParams(gamma=1.0, tau=20.0, kappa=kappa,
                         omega_l_tau=math.pi / 2, delta=0.0,
                         omega_rabi=omega_rabi, phi_l=0.0)
        revivals.append(g2(p, math.pi, math.pi / 2,
                           np.array([1.5])).values[0])
    ratio = revivals[0] / revivals[1]
    ok = short_err <= 1.0 and abs(ratio - 4.0) <= 0.6
    measured = max(short_err, abs(ratio - 4.0) / 0.6)
    return ok, measured, 1.0, \
        f"short-delay error over 1e-10; revival ratio {ratio:.3f} vs 4.0 +- 0.6"


def _fwhm(grid: np.ndarray, values: np.ndarray) -> float:
    peak = values.argmax()
    half = values[peak] / 2
    left = np.where(values[:peak] < half)[0]
    right = np.where(values[peak:] < half)[0]
    if len(left) == 0 or len(right) == 0:
        raise ValueError("half maximum not bracketed by the grid")
    i = left[-1]
    x_left = np.interp(half, [values[i], values[i + 1]], [grid[i], grid[i + 1]])
    j = peak + right[0]
    x_right = np.interp(half, [values[j], values[j - 1]], [grid[j], grid[j - 1]])
    return float(x_right - x_left)


def check_spectrum_structure() -> tuple[bool, float, float, str]:
    """Multi-mode peak spacing pi/tau; single-mode sub/superradiant widths.

    Both parts use the per-atom steady spectrum, which carries the
    round-trip (2*tau) comb structure. The nominal comb spacing pi/tau is
    pulled inward by the atomic phase response: adjacent resonances sit
    pi / (tau + (2/gamma) / (1 + (2*delta/gamma)^2)) apart, which at
    gamma*tau = 10 is a 17-19% central deviation, so the 5% spacing budget
    is not met; the deviation is reported as measured.
    """
    init = InitialState(1.0, 0.0)
    params = SystemParams(gamma=1.0, tau=10.0, kappa=0.4, omega0_tau=math.pi)
    grid = np.linspace(-2.0, 2.0, 16001)
    spec = emission_spectrum(params, init, math.inf, math.pi / 2, grid,
                             emitter="atom-1")
    v = spec.values
    peaks = np.where((v[1:-1] > v[:-2]) & (v[1:-1] > v[2:]))[0] + 1
    # angular-frequency peak positions; spacing must be pi/tau within 5%
    spacings = np.diff(grid[peaks]) * params.gamma
    spacing_err = float(np.abs(spacings - math.pi / params.tau).max()
                        / (math.pi / params.tau)) / 0.05

    widths = {}
    for omega0_tau in (math.pi, math.pi / 2):
        p = SystemParams(gamma=1.0, tau=0.4, kappa=0.4, omega0_tau=omega0_tau)
        s = emission_spectrum(p, init, math.inf, math.pi / 2,
                              np.linspace(-6.0, 6.0, 24001),
                              emitter="atom-1")
        widths[omega0_tau] = _fwhm(s.omegas * p.gamma, s.values)
    sub_ok = widths[math.pi] < params.gamma
    super_ok = widths[math.pi / 2] > params.gamma
    ok = spacing_err <= 1.0 and sub_ok and super_ok
    measured = max(spacing_err, 0.0 if (sub_ok and super_ok) else 2.0)
    return ok, measured, 1.0, (
        f"{len(peaks)} peaks, worst spacing error over 5% "
        f"(dispersive pulling, see docstring); widths "
        f"{widths[math.pi]:.3f} (below gamma) / {widths[math.pi / 2]:.3f} "
        "(above gamma)"
    )


def check_kappa_geometry() -> tuple[bool, float, float, str]:
    """Aperture quadrature vs the axis-aligned closed antiderivative."""
    worst = 0.0
    for theta0 in np.linspace(0.05 * math.pi, math.pi, 20):
        quad_value = kappa_from_geometry(LensGeometry(float(theta0), 0.0))
        c = math.cos(theta0)
        closed = 0.75 * (2.0 / 3.0 - c + c ** 3 / 3.0)
        worst = max(worst, abs(quad_value - closed))
    full = abs(kappa_from_geometry(LensGeometry(math.pi, 0.4)) - 1.0)
    worst = max(worst, full)
    return worst <= 1e-10, worst, 1e-10, \
        "20-point half-angle grid plus full-sphere limit"


CHECKS = (
    ("free-oracle-equivalence", check_free_oracle),
    ("driven-oracle-equivalence", check_driven_oracle),
    ("free-space-limits", check_free_space_limits),
    ("steady-state", check_steady_state),
    ("enhancement-factor", check_enhancement),
    ("visibility-first-order", check_visibility_first_order),
    ("visibility-second-order", check_visibility_second_order),
    ("g2-closed-form", check_g2_closed_form),
    ("g2-asymptotics", check_g2_asymptotics),
    ("spectrum-structure", check_spectrum_structure),
    ("kappa-geometry", check_kappa_geometry),
)


def run_suite(suite: str = "all") -> list[CheckResult]:
    """Run the verification checks; suite is 'all' or 'fast'."""
    if suite not in ("all", "fast"):
        raise ValueError(f"unknown suite {suite!r}")
    results = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for name, check in CHECKS:
            if suite == "fast" and name not in FAST_SUITE:
                continue
            start = time.perf_counter()
            passed, measured, tolerance, detail = check()
            results.append(CheckResult(
                name=name, passed=passed, measured=measured,
                tolerance=tolerance, detail=detail,
                runtime=time.perf_counter() - start,
            ))
    return results
