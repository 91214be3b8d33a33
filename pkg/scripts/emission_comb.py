#!/usr/bin/env python3
"""Steady-state emission spectra in the long-delay regime.

Top panel: the spectrum of one atom's own emission, which breaks into a comb
of narrowed and broadened lines when gamma*tau >> 1. Bottom panel: the
interfering two-path spectrum seen by a detector on the symmetry axis.
Writes emission_comb.png plus the underlying CSVs.
"""

import argparse
import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from twoatom.free_evolution import emission_spectrum
from twoatom.model import InitialState, SystemParams


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gamma-tau", type=float, default=10.0)
    ap.add_argument("--omega0-tau-over-pi", type=float, default=1.0)
    ap.add_argument("--kappas", type=float, nargs="+", default=[0.0, 0.4, 0.8])
    ap.add_argument("--span", type=float, default=2.0,
                    help="half-width of the grid in units of gamma")
    ap.add_argument("--out-dir", default="out")
    args = ap.parse_args()

    os.makedirs(args.out_dir, exist_ok=True)
    omegas = np.linspace(-args.span, args.span, 4001)
    init = InitialState(1.0, 0.0)

    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    for kappa in args.kappas:
        params = SystemParams(gamma=1.0, tau=args.gamma_tau, kappa=kappa,
                              omega0_tau=args.omega0_tau_over_pi * math.pi)
        single = emission_spectrum(params, init, math.inf, math.pi / 2,
                                   omegas, emitter="atom-1")
        both = emission_spectrum(params, init, math.inf, math.pi / 2, omegas)
        ax1.plot(omegas, single.values, label=f"kappa={kappa:g}")
        ax2.plot(omegas, both.values, label=f"kappa={kappa:g}")
        out = os.path.join(args.out_dir, f"spectrum_kappa{kappa:g}.csv")
        np.savetxt(out, np.column_stack([omegas, single.values, both.values]),
                   delimiter=",",
                   header="omega_minus_omega0_over_gamma,s_atom1,s_both",
                   comments="")
        print(out)

    ax1.set_ylabel("single-atom spectrum")
    ax2.set_ylabel("interfering spectrum")
    ax2.set_xlabel("(omega - omega0) / gamma")
    ax1.legend()
    fig.tight_layout()
    figpath = os.path.join(args.out_dir, "emission_comb.png")
    fig.savefig(figpath, dpi=150)
    print(figpath)


if __name__ == "__main__":
    main()
