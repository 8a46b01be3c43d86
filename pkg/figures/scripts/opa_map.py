#!/usr/bin/env python3
"""Heatmap of the period-max residual contangle over the optical pump plane."""

import argparse

from magnomech_figures import panels


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", help="2D sweep over omega_c_prime and xi_c")
    ap.add_argument("-o", "--output", default="out/opa_map.png")
    args = ap.parse_args()
    panels.heatmap(
        args.csv, x="omega_c_prime", y="xi_c", value="r_max", output=args.output,
        xlabel=r"$\omega_c'/\omega_b$", ylabel=r"$\Xi_c/\omega_b$",
        colorbar_label=r"$R_{\tau,\mathrm{max}}^{\mathrm{min}}$",
        title="optical pump",
    )
    print(args.output)


if __name__ == "__main__":
    main()
