"""Render qra CSV payloads into figures.

Seven figure kinds mirror the analysis battery: heat maps, outcome
histograms, scaled densities with their analytic overlay, circle-law
scatter, Marchenko-Pastur histograms with overlay and outlier markers,
distance-vs-qubits scatter, and the 2-D embedding.

This package performs no numerical analysis: every number drawn comes
from an input CSV (the analytic curves are consumed as data emitted by
the qra CLI), and the only arithmetic here is presentation geometry.
"""
from __future__ import annotations

import argparse
import csv
import enum
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

CURVE_COLOR = "black"
BULK_COLOR = "#4878a8"
OUTLIER_COLOR = "#c44e52"


class ContractViolation(Exception):
    """Input CSV does not match the column contract for the figure kind."""


class Kind(enum.Enum):
    HEATMAP = "heatmap"
    HISTOGRAM = "histogram"
    DENSITY = "density"
    CIRCLE = "circle"
    MP = "mp"
    WDIST = "wdist"
    EMBED = "embed"


@dataclass
class FigureSpec:
    kind: Kind
    input: Path
    output: Path
    curve: Path | None = None
    style: dict = field(default_factory=dict)


def _read_csv(path) -> dict[str, list[str]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ContractViolation(f"{path}: empty CSV")
    header, data = rows[0], rows[1:]
    return {name: [row[i] for row in data] for i, name in enumerate(header)}


def _columns(path, *names) -> list[np.ndarray]:
    table = _read_csv(path)
    out = []
    for name in names:
        if name not in table:
            raise ContractViolation(f"{path}: missing column {name!r}")
        out.append(np.array([float(v) for v in table[name]]))
    return out


def _labels(path, name) -> list[str]:
    table = _read_csv(path)
    if name not in table:
        raise ContractViolation(f"{path}: missing column {name!r}")
    return table[name]


def _new_axes(style):
    fig, ax = plt.subplots(figsize=style.get("figsize", (5.2, 4.2)))
    return fig, ax


def _render_heatmap(spec, ax):
    table = _read_csv(spec.input)
    matrix = np.array([[float(v) for v in col] for col in table.values()]).T
    im = ax.imshow(matrix, cmap=spec.style.get("cmap", "viridis"),
                   aspect="equal", origin="upper")
    ax.figure.colorbar(im, ax=ax, shrink=0.85)
    ax.set_xlabel("qubit index")
    ax.set_ylabel("row index")


def _render_histogram(spec, ax):
    x, count, _p = _columns(spec.input, "x", "count", "p")
    ax.step(x, count, where="mid", lw=0.7, color=BULK_COLOR)
    ax.set_xlabel("outcome x")
    ax.set_ylabel("count")


def _render_density(spec, ax):
    u, density = _columns(spec.input, "u", "density")
    width = (u[1] - u[0]) if u.size > 1 else 1.0
    ax.bar(u, density, width=width, color=BULK_COLOR, alpha=0.8,
           label="empirical")
    if spec.curve is not None:
        cu, cd = _columns(spec.curve, "u", "density")
        ax.plot(cu, cd, color=CURVE_COLOR, lw=1.5, label="reference")
        ax.legend(frameon=False)
    ax.set_xlabel("N p")
    ax.set_ylabel("density")
    ax.set_yscale(spec.style.get("yscale", "linear"))


def _render_circle(spec, ax):
    re, im, outlier = _columns(spec.input, "re", "im", "is_outlier")
    bulk = outlier == 0
    ax.scatter(re[bulk], im[bulk], s=4, color=BULK_COLOR, lw=0, label="bulk")
    if np.any(~bulk):
        ax.scatter(re[~bulk], im[~bulk], s=12, color=OUTLIER_COLOR, lw=0,
                   label="outliers")
        ax.legend(frameon=False, loc="upper right")
    theta = np.linspace(0, 2 * np.pi, 256)
    radius = spec.style.get("radius", 0.5)
    ax.plot(radius * np.cos(theta), radius * np.sin(theta),
            color=CURVE_COLOR, lw=1.0)
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")


def _render_mp(spec, ax):
    lam, density, outlier = _columns(spec.input, "lambda", "density", "is_outlier")
    bins = outlier == 0
    if np.any(bins):
        lam_b = lam[bins]
        width = (lam_b[1] - lam_b[0]) if lam_b.size > 1 else 1.0
        ax.bar(lam_b, density[bins], width=width, color=BULK_COLOR, alpha=0.8,
               label="bulk")
    if np.any(~bins):
        ax.plot(lam[~bins], np.zeros(np.count_nonzero(~bins)), marker="x",
                ls="none", color=OUTLIER_COLOR, label="outliers")
    if spec.curve is not None:
        cl, rho = _columns(spec.curve, "lambda", "rho")
        ax.plot(cl, rho, color=CURVE_COLOR, lw=1.5, label="reference")
    ax.legend(frameon=False)
    ax.set_xlabel("eigenvalue")
    ax.set_ylabel("density")


def _render_wdist(spec, ax):
    n, w = _columns(spec.input, "n", "w")
    labels = _labels(spec.input, "label")
    ax.scatter(n, w, s=18, color=BULK_COLOR)
    for xi, yi, lbl in zip(n, w, labels):
        ax.annotate(lbl, (xi, yi), fontsize=6, xytext=(2, 2),
                    textcoords="offset points")
    ax.set_xlabel("qubits n")
    ax.set_ylabel("Wasserstein distance")


def _render_embed(spec, ax):
    x, y = _columns(spec.input, "x", "y")
    labels = _labels(spec.input, "label")
    ax.scatter(x, y, s=24, color=BULK_COLOR)
    for xi, yi, lbl in zip(x, y, labels):
        ax.annotate(lbl, (xi, yi), fontsize=7, xytext=(3, 3),
                    textcoords="offset points")
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")


_RENDERERS = {
    Kind.HEATMAP: _render_heatmap,
    Kind.HISTOGRAM: _render_histogram,
    Kind.DENSITY: _render_density,
    Kind.CIRCLE: _render_circle,
    Kind.MP: _render_mp,
    Kind.WDIST: _render_wdist,
    Kind.EMBED: _render_embed,
}


def render(spec: FigureSpec) -> Path:
    """Render one figure and write the image file."""
    fig, ax = _new_axes(spec.style)
    try:
        _RENDERERS[spec.kind](spec, ax)
        title = spec.style.get("title")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        fig.savefig(spec.output, dpi=spec.style.get("dpi", 110))
    finally:
        plt.close(fig)
    return Path(spec.output)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="plot.py", description="Render a qra CSV payload into a figure.")
    ap.add_argument("--kind", required=True, choices=[k.value for k in Kind])
    ap.add_argument("--in", dest="input", required=True)
    ap.add_argument("--curve", default=None)
    ap.add_argument("--out", dest="output", required=True)
    ap.add_argument("--title", default=None)
    args = ap.parse_args(argv)
    spec = FigureSpec(
        kind=Kind(args.kind),
        input=Path(args.input),
        curve=Path(args.curve) if args.curve else None,
        output=Path(args.output),
        style={"title": args.title} if args.title else {},
    )
    try:
        render(spec)
    except (ContractViolation, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
