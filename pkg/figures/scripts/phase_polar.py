#!/usr/bin/env python3
"""Polar plot of the entanglement versus the pump phase difference."""

import argparse

from magnomech_figures import panels


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", help="theta_c sweep (theta_m = 0)")
    ap.add_argument("-o", "--output", default="out/phase_polar.png")
    args = ap.parse_args()
    panels.polar(args.csv, theta="theta_c", r="r_max", output=args.output,
                 title=r"$R_{\tau,\mathrm{max}}^{\mathrm{min}}(\Delta_\theta)$")
    print(args.output)


if __name__ == "__main__":
    main()
