"""Command-line front end: one subcommand per figure-class computation.

Every data subcommand writes CSV (or JSON) plus a manifest JSON with the
resolved parameters and content hashes. Output bodies carry no timestamps,
so reruns with equal inputs are byte-identical; the wall clock lives only
in the manifest. Optical phases are entered in units of pi (flags named
*-over-pi) so configs like "omega0 tau = n pi" stay exact.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 parameter out
of range, 4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from .correlations import g2, g2_normalized
from .driven_evolution import evolve_driven, scan_rate, visibility
from .errors import NormalizationError, ParameterRangeError
from .free_evolution import (
    emission_spectrum,
    evolve_free,
    two_atom_angular_spectrum,
)
from .model import (
    InitialState,
    LensGeometry,
    SystemParams,
    kappa_from_geometry,
    load_param_file,
    params_from_values,
)
from .output import (
    DEFAULT_PRECISION,
    atomic_write_text,
    content_hash,
    format_csv,
    format_json_table,
    write_manifest,
)
from .verification import run_suite

DETECTOR_ALIASES = {
    "incoherent": "incoherent-sum",
    "incoherent-sum": "incoherent-sum",
    "coherent": "coherent-farfield",
    "coherent-farfield": "coherent-farfield",
    "lens-1": "lens-mode-1",
    "lens-mode-1": "lens-mode-1",
    "lens-2": "lens-mode-2",
    "lens-mode-2": "lens-mode-2",
    "lens-total": "lens-mode-total",
    "lens-mode-total": "lens-mode-total",
}


def _worker_count() -> int:
    raw = os.environ.get("RD_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _chunked_map(fn, grid: np.ndarray) -> np.ndarray:
    """Evaluate fn over grid chunks, optionally in parallel, and reassemble
    the results in grid order so the output is worker-count independent."""
    workers = _worker_count()
    if workers == 1 or grid.size < 2 * workers:
        return fn(grid)
    chunks = np.array_split(grid, workers)
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(fn, chunks))
    return np.concatenate(parts)


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out-dir", default=".",
                        help="directory for output files (default: .)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--precision", type=int, default=DEFAULT_PRECISION,
                        metavar="N", help="significant digits in output")


def _add_param_flags(parser: argparse.ArgumentParser,
                     initial_state: bool = False) -> None:
    parser.add_argument("--params-file", default=None,
                        help="key=value parameter file; flags override it")
    parser.add_argument("--gamma", type=float, default=None)
    parser.add_argument("--tau", type=float, default=None,
                        help="delay time (same units as 1/gamma)")
    parser.add_argument("--gamma-tau", type=float, default=None,
                        help="dimensionless gamma*tau (sets tau)")
    parser.add_argument("--kappa", type=float, default=None)
    parser.add_argument("--omega0-tau-over-pi", type=float, default=None,
                        help="optical phase omega0*tau in units of pi")
    parser.add_argument("--omega-l-tau-over-pi", type=float, default=None,
                        help="laser phase omega_L*tau in units of pi")
    parser.add_argument("--delta", type=float, default=None,
                        help="laser detuning omega0 - omega_L")
    parser.add_argument("--omega-rabi", type=float, default=None)
    parser.add_argument("--phi-l-over-pi", type=float, default=None,
                        help="laser geometry phase phi_L in units of pi")
    if initial_state:
        parser.add_argument("--alpha1", type=complex, default=None,
                            help="initial amplitude of |e,g> (complex)")
        parser.add_argument("--alpha2", type=complex, default=None,
                            help="initial amplitude of |g,e> (complex)")


def _resolve_params(args) -> tuple[SystemParams, InitialState, dict]:
    values = dict(load_param_file(args.params_file)) if args.params_file else {}
    if args.gamma is not None:
        values["gamma"] = args.gamma
    if args.tau is not None:
        values["tau"] = args.tau
    if args.gamma_tau is not None:
        values["tau"] = args.gamma_tau / values.get("gamma", 1.0)
    if args.kappa is not None:
        values["kappa"] = args.kappa
    if args.omega0_tau_over_pi is not None:
        values["omega0_tau"] = args.omega0_tau_over_pi * math.pi
    if args.omega_l_tau_over_pi is not None:
        values["omega_l_tau"] = args.omega_l_tau_over_pi * math.pi
    if args.delta is not None:
        values["delta"] = args.delta
    if args.omega_rabi is not None:
        values["omega_rabi"] = args.omega_rabi
    if args.phi_l_over_pi is not None:
        values["phi_l"] = args.phi_l_over_pi * math.pi
    alpha1 = getattr(args, "alpha1", None)
    alpha2 = getattr(args, "alpha2", None)
    if alpha1 is not None:
        values["alpha1_re"], values["alpha1_im"] = alpha1.real, alpha1.imag
    if alpha2 is not None:
        values["alpha2_re"], values["alpha2_im"] = alpha2.real, alpha2.imag
    params, init = params_from_values(values)
    resolved = {
        "gamma": params.gamma, "tau": params.tau, "kappa": params.kappa,
        "omega0_tau": params.omega0_tau, "omega_l_tau": params.omega_l_tau,
        "delta": params.delta, "omega_rabi": params.omega_rabi,
        "phi_l": params.phi_l,
        "alpha1": [init.alpha1.real, init.alpha1.imag],
        "alpha2": [init.alpha2.real, init.alpha2.imag],
    }
    return params, init, resolved


def _emit(args, stem: str, header, rows, parameters: dict) -> str:
    if args.format == "csv":
        body = format_csv(header, rows, args.precision)
        name = f"{stem}.csv"
    else:
        body = format_json_table(header, rows, args.precision)
        name = f"{stem}.json"
    os.makedirs(args.out_dir, exist_ok=True)
    path = os.path.join(args.out_dir, name)
    atomic_write_text(path, body)
    write_manifest(
        os.path.join(args.out_dir, f"{stem}.manifest.json"),
        subcommand=args.subcommand,
        parameters=parameters,
        outputs={name: content_hash(body)},
        version=__version__,
    )
    return path


# ---------------------------------------------------------------------------
# subcommands


def cmd_decay(args) -> int:
    params, init, resolved = _resolve_params(args)
    grid = np.linspace(0.0, args.t_max, args.points)

    def evaluate(chunk: np.ndarray) -> np.ndarray:
        trace = evolve_free(params, init, chunk)
        return np.column_stack([
            chunk, trace.b1.real, trace.b1.imag, trace.b2.real, trace.b2.imag,
            np.abs(trace.b1) ** 2, np.abs(trace.b2) ** 2,
        ])

    table = _chunked_map(evaluate, grid)
    resolved.update({"t_max": args.t_max, "points": args.points})
    path = _emit(args, "decay",
                 ["t_over_tau", "re_b1", "im_b1", "re_b2", "im_b2", "p1", "p2"],
                 table.tolist(), resolved)
    print(path)
    return 0


def cmd_spectrum(args) -> int:
    params, init, resolved = _resolve_params(args)
    t = math.inf if args.time == "inf" else float(args.time) * params.tau
    theta = args.theta_over_pi * math.pi
    omegas = np.linspace(args.omega_from, args.omega_to, args.points)
    resolved.update({
        "time": args.time, "theta_over_pi": args.theta_over_pi,
        "omega_from": args.omega_from, "omega_to": args.omega_to,
        "points": args.points, "normalization": args.normalization,
        "emitter": args.emitter, "omega_axis": args.omega_axis,
    })

    def axis(grid_gamma: np.ndarray) -> np.ndarray:
        if args.omega_axis == "pi-over-tau":
            return grid_gamma * params.gamma / (math.pi / params.tau)
        return grid_gamma

    axis_name = ("omega_minus_omega0_over_gamma" if args.omega_axis == "gamma"
                 else "omega_minus_omega0_over_pi_per_tau")

    if args.theta_points:
        thetas = np.linspace(0.0, math.pi, args.theta_points)
        resolved["theta_points"] = args.theta_points
        values = two_atom_angular_spectrum(params, init, omegas, thetas)
        rows = []
        for i, th in enumerate(thetas):
            for j, om in enumerate(axis(omegas)):
                rows.append([float(th), float(om), float(values[i, j])])
        path = _emit(args, "angular_spectrum",
                     ["theta", axis_name, "s_value"], rows, resolved)
        print(path)
        return 0

    def evaluate(chunk: np.ndarray) -> np.ndarray:
        spec = emission_spectrum(params, init, t, theta, chunk,
                                 normalization=args.normalization,
                                 emitter=args.emitter)
        return np.column_stack([axis(chunk), spec.values])

    table = _chunked_map(evaluate, omegas)
    path = _emit(args, "spectrum", [axis_name, "s_value"],
                 table.tolist(), resolved)
    print(path)
    return 0


def cmd_driven(args) -> int:
    params, _, resolved = _resolve_params(args)
    grid = np.linspace(0.0, args.t_max, args.points)

    def evaluate(chunk: np.ndarray) -> np.ndarray:
        trace = evolve_driven(params, chunk)
        return np.column_stack([
            chunk, np.abs(trace.b1) ** 2, np.abs(trace.b2) ** 2,
        ])

    table = _chunked_map(evaluate, grid)
    resolved.update({"t_max": args.t_max, "points": args.points})
    path = _emit(args, "driven", ["t_over_tau", "p_exc_1", "p_exc_2"],
                 table.tolist(), resolved)
    print(path)
    return 0


def cmd_rates(args) -> int:
    params, _, resolved = _resolve_params(args)
    detector = DETECTOR_ALIASES[args.detector]
    scan_parameter = args.scan.replace("-", "_")
    grid = np.linspace(args.scan_from, args.scan_to, args.points)
    r1, r2, total = scan_rate(
        params, detector, grid, scan_parameter=scan_parameter,
        phi_minus=args.phi_minus_over_pi * math.pi,
        phi_plus=args.phi_plus_over_pi * math.pi,
    )
    fringe_visibility = visibility(total)
    resolved.update({
        "detector": detector, "scan": scan_parameter,
        "from": args.scan_from, "to": args.scan_to, "points": args.points,
        "visibility": fringe_visibility,
    })
    table = np.column_stack([grid, r1, r2, total])
    path = _emit(args, "rates",
                 [scan_parameter, "rate_atom1", "rate_atom2", "rate_total"],
                 table.tolist(), resolved)
    print(path)
    print(f"visibility {fringe_visibility:.{args.precision}g}")
    return 0


def cmd_g2(args) -> int:
    params, _, resolved = _resolve_params(args)
    phi1 = args.phi1_over_pi * math.pi
    phi2 = args.phi2_over_pi * math.pi
    tprimes = np.linspace(0.0, args.t_max, args.points)
    resolved.update({
        "phi1_over_pi": args.phi1_over_pi, "phi2_over_pi": args.phi2_over_pi,
        "t_max": args.t_max, "points": args.points,
        "normalized": args.normalized,
    })

    if args.phi2_points:
        phi2_grid = np.linspace(phi2, args.phi2_to_over_pi * math.pi,
                                args.phi2_points)
        resolved.update({"phi2_to_over_pi": args.phi2_to_over_pi,
                         "phi2_points": args.phi2_points})
        rows = []
        for p2 in phi2_grid:
            result = g2(params, phi1, float(p2), tprimes)
            for tp, value in zip(tprimes, result.values):
                rows.append([float(p2), float(tp), float(value)])
        path = _emit(args, "g2_grid", ["phi2", "tprime_over_tau", "g2_raw"],
                     rows, resolved)
        print(path)
        return 0

    def evaluate(chunk: np.ndarray) -> np.ndarray:
        return g2(params, phi1, phi2, chunk).values

    raw = _chunked_map(evaluate, tprimes)
    rows: list = []
    if args.normalized:
        try:
            normalized = list(
                g2_normalized(params, phi1, phi2, np.asarray(tprimes)).values
            )
        except NormalizationError:
            normalized = ["" for _ in raw]
        for tp, v, n in zip(tprimes, raw, normalized):
            rows.append([float(tp), float(v), n if isinstance(n, str) else float(n)])
        header = ["tprime_over_tau", "g2_raw", "g2_normalized"]
    else:
        rows = np.column_stack([tprimes, raw]).tolist()
        header = ["tprime_over_tau", "g2_raw"]
    path = _emit(args, "g2", header, rows, resolved)
    print(path)
    return 0


def cmd_kappa(args) -> int:
    geom = LensGeometry(
        half_angle=args.half_angle_over_pi * math.pi,
        dipole_polar_angle=args.dipole_angle_over_pi * math.pi,
    )
    value = kappa_from_geometry(geom)
    print(f"kappa {value:.{args.precision}g}")
    return 0


def cmd_verify(args) -> int:
    results = run_suite(suite=args.suite)
    header = ["check", "status", "measured", "tolerance", "detail"]
    rows = [[r.name, "PASS" if r.passed else "FAIL", r.measured, r.tolerance,
             r.detail] for r in results]
    if args.format == "csv":
        body = format_csv(header, rows, args.precision)
        name = "verify_report.csv"
    else:
        body = format_json_table(header, rows, args.precision)
        name = "verify_report.json"
    os.makedirs(args.out_dir, exist_ok=True)
    path = os.path.join(args.out_dir, name)
    atomic_write_text(path, body)
    write_manifest(
        os.path.join(args.out_dir, "verify_report.manifest.json"),
        subcommand="verify",
        parameters={"suite": args.suite},
        outputs={name: content_hash(body)},
        version=__version__,
    )
    # the report body is deterministic; wall-clock runtimes go to stdout only
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name:28s} measured={r.measured:.3e} "
              f"tol={r.tolerance:g} runtime={r.runtime:.2f}s")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed ({path})")
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twoatom",
        description="Two distant atoms coupled by photon exchange through a "
                    "lens: decay traces, spectra, scattering rates, and "
                    "photon correlations.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("decay", help="undriven excited-state amplitudes")
    _add_param_flags(p, initial_state=True)
    _add_output_flags(p)
    p.add_argument("--t-max", type=float, default=6.0,
                   help="end of the time grid in units of tau")
    p.add_argument("--points", type=int, default=400)
    p.set_defaults(func=cmd_decay)

    p = sub.add_parser("spectrum", help="photon emission spectrum |b_g|^2")
    _add_param_flags(p, initial_state=True)
    _add_output_flags(p)
    p.add_argument("--time", default="inf",
                   help="snapshot time in units of tau, or 'inf'")
    p.add_argument("--theta-over-pi", type=float, default=0.5,
                   help="emission angle in units of pi")
    p.add_argument("--omega-from", type=float, default=-3.0,
                   help="grid start, (omega - omega0)/gamma")
    p.add_argument("--omega-to", type=float, default=3.0)
    p.add_argument("--points", type=int, default=801)
    p.add_argument("--normalization",
                   choices=("raw-shape", "free-space-peak"),
                   default="raw-shape")
    p.add_argument("--emitter", choices=("both", "atom-1", "atom-2"),
                   default="both",
                   help="interfering sum or a single atom's emission")
    p.add_argument("--omega-axis", choices=("gamma", "pi-over-tau"),
                   default="gamma",
                   help="unit of the output frequency column")
    p.add_argument("--theta-points", type=int, default=0,
                   help="if > 0, write the 2D (theta, omega) grid instead")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("driven", help="laser-driven excitation transients")
    _add_param_flags(p)
    _add_output_flags(p)
    p.add_argument("--t-max", type=float, default=10.0,
                   help="end of the time grid in units of tau")
    p.add_argument("--points", type=int, default=400)
    p.set_defaults(func=cmd_driven)

    p = sub.add_parser("rates", help="elastic scattering rate scans")
    _add_param_flags(p)
    _add_output_flags(p)
    p.add_argument("--detector", choices=sorted(DETECTOR_ALIASES),
                   default="incoherent")
    p.add_argument("--scan", choices=("omega-l-tau", "phi-l"),
                   default="omega-l-tau")
    p.add_argument("--from", dest="scan_from", type=float, default=0.0,
                   help="scan start (radians)")
    p.add_argument("--to", dest="scan_to", type=float, default=4 * math.pi,
                   help="scan end (radians)")
    p.add_argument("--points", type=int, default=500)
    p.add_argument("--phi-minus-over-pi", type=float, default=0.0,
                   help="far-field detector phase (k_L - k_mu).(r1-r2)/2")
    p.add_argument("--phi-plus-over-pi", type=float, default=0.0,
                   help="far-field detector phase (k_L + k_mu).(r1-r2)/2")
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("g2", help="two-photon correlation delay scans")
    _add_param_flags(p)
    _add_output_flags(p)
    p.add_argument("--phi1-over-pi", type=float, default=1.0,
                   help="first detector phase in units of pi")
    p.add_argument("--phi2-over-pi", type=float, default=0.5,
                   help="second detector phase in units of pi")
    p.add_argument("--t-max", type=float, default=4.0,
                   help="delay grid end in units of tau")
    p.add_argument("--points", type=int, default=400)
    p.add_argument("--normalized", action="store_true",
                   help="add the plateau-normalized column")
    p.add_argument("--phi2-to-over-pi", type=float, default=2.0,
                   help="end of the phi2 grid for the 2D scan")
    p.add_argument("--phi2-points", type=int, default=0,
                   help="if > 0, write the 2D (phi2, t') grid instead")
    p.set_defaults(func=cmd_g2)

    p = sub.add_parser("kappa", help="coupling fraction from lens geometry")
    p.add_argument("--half-angle-over-pi", type=float, required=True,
                   help="aperture half-angle in units of pi")
    p.add_argument("--dipole-angle-over-pi", type=float, default=0.0,
                   help="dipole polar angle from the lens axis, units of pi")
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("verify", help="run the verification suite")
    _add_output_flags(p)
    p.add_argument("--suite", choices=("all", "fast"), default="all")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
