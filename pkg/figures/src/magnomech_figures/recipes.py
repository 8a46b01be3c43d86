"""Declarative figure recipes (TOML) dispatching onto the panel kinds."""

from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from dataclasses import dataclass, field
from pathlib import Path

from . import panels
from .csvio import SchemaError

KINDS = ("heatmap", "line", "polar", "timeseries", "grouped-bars")


@dataclass
class FigureRecipe:
    """What to draw: inputs, panel kind, column bindings, output path."""

    kind: str
    inputs: list
    output: str
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown panel kind {self.kind!r}; expected one of {KINDS}")
        if not self.inputs:
            raise SchemaError("recipe needs at least one input CSV")

    @classmethod
    def from_toml(cls, path) -> "FigureRecipe":
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
        try:
            kind = doc.pop("kind")
            output = doc.pop("output")
        except KeyError as err:
            raise SchemaError(f"{path}: recipe missing key {err}") from None
        if "inputs" in doc:
            inputs = doc.pop("inputs")
        elif "input" in doc:
            inputs = [doc.pop("input")]
        else:
            raise SchemaError(f"{path}: recipe missing 'input' or 'inputs'")
        if isinstance(inputs, str):
            inputs = [inputs]
        base = Path(path).resolve().parent
        inputs = [str((base / p)) if not Path(p).is_absolute() else p for p in inputs]
        if not Path(output).is_absolute():
            output = str(base / output)
        return cls(kind=kind, inputs=list(inputs), output=output, options=doc)


def render(recipe: FigureRecipe):
    """Draw the recipe; returns the plotted data for inspection."""
    opts = dict(recipe.options)
    common = {k: opts.pop(k) for k in ("xlabel", "ylabel", "title") if k in opts}
    if recipe.kind == "heatmap":
        return panels.heatmap(
            recipe.inputs[0], x=opts.pop("x"), y=opts.pop("y"), value=opts.pop("value"),
            output=recipe.output, colorbar_label=opts.pop("colorbar_label", None),
            **common,
        )
    if recipe.kind == "line":
        return panels.line(
            recipe.inputs, x=opts.pop("x"), y=opts.pop("y"), output=recipe.output,
            labels=opts.pop("labels", None), **common,
        )
    if recipe.kind == "polar":
        return panels.polar(
            recipe.inputs[0], theta=opts.pop("theta"), r=opts.pop("r"),
            output=recipe.output, title=common.get("title"),
        )
    if recipe.kind == "timeseries":
        return panels.timeseries(
            recipe.inputs[0], x=opts.pop("x"), ys=opts.pop("y"), output=recipe.output,
            labels=opts.pop("labels", None), **common,
        )
    if recipe.kind == "grouped-bars":
        return panels.grouped_bars(
            recipe.inputs, category=opts.pop("category"), value=opts.pop("value"),
            output=recipe.output, labels=opts.pop("labels", None), **common,
        )
    raise SchemaError(f"unknown panel kind {recipe.kind!r}")
