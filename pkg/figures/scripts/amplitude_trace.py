#!/usr/bin/env python3
"""Time trace of the cavity amplitude over one modulation period."""

import argparse

from magnomech_figures import panels


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", help="output of the 'meanfield' subcommand")
    ap.add_argument("-o", "--output", default="out/amplitude_trace.png")
    args = ap.parse_args()
    panels.timeseries(
        args.csv, x="t", ys="abs_a", output=args.output,
        xlabel=r"$\omega_b t$", ylabel=r"$|\langle a(t)\rangle|$",
    )
    print(args.output)


if __name__ == "__main__":
    main()
