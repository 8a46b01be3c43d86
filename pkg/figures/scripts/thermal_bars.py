#!/usr/bin/env python3
"""Grouped bars comparing thermal robustness of the pump configurations."""

import argparse

from magnomech_figures import panels


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csvs", nargs="+", help="temperature sweeps, one group per file")
    ap.add_argument("--labels", nargs="+", default=None)
    ap.add_argument("-o", "--output", default="out/thermal_bars.png")
    args = ap.parse_args()
    panels.grouped_bars(
        args.csvs, category="temperature", value="r_max", output=args.output,
        labels=args.labels, xlabel="T (K)",
        ylabel=r"$R_{\tau,\mathrm{max}}^{\mathrm{min}}$",
    )
    print(args.output)


if __name__ == "__main__":
    main()
