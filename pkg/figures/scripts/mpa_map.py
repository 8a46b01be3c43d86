#!/usr/bin/env python3
"""Heatmap of the period-max residual contangle over the mechanical pump plane."""

import argparse

from magnomech_figures import panels


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", help="2D sweep over omega_m and xi_m")
    ap.add_argument("-o", "--output", default="out/mpa_map.png")
    args = ap.parse_args()
    panels.heatmap(
        args.csv, x="omega_m", y="xi_m", value="r_max", output=args.output,
        xlabel=r"$\omega_m/\omega_b$", ylabel=r"$\Xi_m/\omega_b$",
        colorbar_label=r"$R_{\tau,\mathrm{max}}^{\mathrm{min}}$",
        title="mechanical pump",
    )
    print(args.output)


if __name__ == "__main__":
    main()
