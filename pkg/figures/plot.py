#!/usr/bin/env python3
"""Render any figure recipe: python plot.py recipes/<name>.toml [...]"""

import argparse
import sys

from magnomech_figures import FigureRecipe, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("recipes", nargs="+", help="recipe TOML files")
    args = parser.parse_args(argv)
    status = 0
    for path in args.recipes:
        try:
            recipe = FigureRecipe.from_toml(path)
            render(recipe)
            print(f"{path} -> {recipe.output}")
        except (SchemaError, OSError) as err:
            print(f"error: {path}: {err}", file=sys.stderr)
            status = 1
    return status


if __name__ == "__main__":
    sys.exit(main())
