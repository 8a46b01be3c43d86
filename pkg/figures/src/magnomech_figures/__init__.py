"""Presentation layer for magnomech CSV outputs.

Reads the delimited files produced by the simulation CLI and renders the
standard panels (heatmaps, detuning curves, polar phase response, time
traces, thermal comparison bars) to image files.  Never recomputes
physics: whatever is in the CSV is what gets plotted.
"""

__version__ = "0.1.0"

from .recipes import FigureRecipe, SchemaError, render

__all__ = ["FigureRecipe", "SchemaError", "render", "__version__"]
