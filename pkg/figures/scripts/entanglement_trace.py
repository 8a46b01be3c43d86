#!/usr/bin/env python3
"""Time trace of the minimum residual contangle over one modulation period."""

import argparse

from magnomech_figures import panels


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", help="output of the 'entangle' subcommand")
    ap.add_argument("-o", "--output", default="out/entanglement_trace.png")
    args = ap.parse_args()
    panels.timeseries(
        args.csv, x="t", ys="r_min", output=args.output,
        xlabel=r"$\omega_b t$", ylabel=r"$R_\tau^{\mathrm{min}}$",
    )
    print(args.output)


if __name__ == "__main__":
    main()
