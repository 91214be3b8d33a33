#!/usr/bin/env python3
"""Spontaneous decay of one initially excited atom for several couplings.

Writes decay_traces.png and one CSV per kappa. The kappa = 0 curve is the
bare exponential; with coupling the second atom lights up after t = tau and
the first atom shows retarded kinks at every multiple of the delay.
"""

import argparse
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from twoatom.free_evolution import evolve_free
from twoatom.model import InitialState, SystemParams


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gamma-tau", type=float, default=1.0)
    ap.add_argument("--omega0-tau-over-pi", type=float, default=1.0)
    ap.add_argument("--kappas", type=float, nargs="+",
                    default=[0.0, 0.4, 0.8])
    ap.add_argument("--t-max", type=float, default=8.0,
                    help="end of the grid in units of tau")
    ap.add_argument("--out-dir", default="out")
    args = ap.parse_args()

    os.makedirs(args.out_dir, exist_ok=True)
    times = np.linspace(0.0, args.t_max, 1600)
    init = InitialState(1.0, 0.0)

    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    for kappa in args.kappas:
        params = SystemParams(gamma=args.gamma_tau, tau=1.0, kappa=kappa,
                              omega0_tau=args.omega0_tau_over_pi * np.pi)
        trace = evolve_free(params, init, times)
        p1 = np.abs(trace.b1) ** 2
        p2 = np.abs(trace.b2) ** 2
        ax1.semilogy(times, p1, label=f"kappa={kappa:g}")
        ax2.semilogy(times, np.where(p2 > 0, p2, np.nan),
                     label=f"kappa={kappa:g}")
        out = os.path.join(args.out_dir, f"decay_kappa{kappa:g}.csv")
        np.savetxt(out, np.column_stack([times, p1, p2]), delimiter=",",
                   header="t_over_tau,p1,p2", comments="")
        print(out)

    ax1.set_ylabel("excited population, atom 1")
    ax2.set_ylabel("excited population, atom 2")
    ax2.set_xlabel("t / tau")
    ax1.set_ylim(1e-6, 1.2)
    ax2.set_ylim(1e-6, 1.2)
    ax1.legend()
    fig.tight_layout()
    figpath = os.path.join(args.out_dir, "decay_traces.png")
    fig.savefig(figpath, dpi=150)
    print(figpath)


if __name__ == "__main__":
    main()
