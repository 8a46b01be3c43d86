#!/usr/bin/env python3
"""Entanglement versus cavity detuning for several pump configurations."""

import argparse

from magnomech_figures import panels


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csvs", nargs="+", help="delta_a sweeps, one curve each")
    ap.add_argument("--labels", nargs="+", default=None)
    ap.add_argument("-o", "--output", default="out/detuning_curves.png")
    args = ap.parse_args()
    panels.line(
        args.csvs, x="delta_a", y="r_max", output=args.output, labels=args.labels,
        xlabel=r"$\Delta_a/\omega_b$", ylabel=r"$R_{\tau,\mathrm{max}}^{\mathrm{min}}$",
    )
    print(args.output)


if __name__ == "__main__":
    main()
