"""Self-contained SVG heatmap for domain matrices (no plotting dependency).

The figure is an n x n grid of rects colored on a linear scale between two
configurable hex colors, with row/column labels, a neutral diagonal, and a
horizontal color bar annotated with the value range.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

from ontomesh.analytics import DomainMatrix

CELL = 40
LEFT = 130
TOP = 70
PAD = 20


@dataclass
class PaletteConfig:
    low: str = "#f7fbff"
    high: str = "#08306b"
    neutral: str = "#d9d9d9"


def _hex_to_rgb(color: str) -> tuple[int, int, int]:
    if len(color) != 7 or not color.startswith("#"):
        raise ValueError(f"expected #rrggbb color, got {color!r}")
    return tuple(int(color[i : i + 2], 16) for i in (1, 3, 5))  # type: ignore[return-value]


def _blend(low: str, high: str, t: float) -> str:
    lo = _hex_to_rgb(low)
    hi = _hex_to_rgb(high)
    rgb = tuple(round(a + t * (b - a)) for a, b in zip(lo, hi))
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def cell_color(value: float, vmin: float, vmax: float, palette: PaletteConfig) -> str:
    t = (value - vmin) / (vmax - vmin) if vmax > vmin else 0.0
    return _blend(palette.low, palette.high, t)


def render_heatmap_svg(
    matrix: DomainMatrix,
    out: str | os.PathLike,
    palette: PaletteConfig | None = None,
) -> int:
    """Write the heatmap SVG to ``out``; returns the byte count written."""
    palette = palette or PaletteConfig()
    n = len(matrix.labels)
    vmin, vmax = matrix.value_range()
    width = LEFT + n * CELL + PAD
    height = TOP + n * CELL + PAD

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}">',
        "<defs>",
        '<linearGradient id="scale" x1="0" y1="0" x2="1" y2="0">',
        f'<stop offset="0" stop-color="{palette.low}"/>',
        f'<stop offset="1" stop-color="{palette.high}"/>',
        "</linearGradient>",
        "</defs>",
        f'<rect class="colorbar" x="{LEFT}" y="10" width="{n * CELL}" height="12" fill="url(#scale)" stroke="#444"/>',
        f'<text class="range" x="{LEFT}" y="36" font-family="sans-serif" font-size="12">{escape(f"{vmin:g}–{vmax:g}")}</text>',
    ]
    for j, label in enumerate(matrix.labels):
        x = LEFT + j * CELL + CELL // 2
        lines.append(
            f'<text class="col-label" x="{x}" y="{TOP - 6}" font-family="sans-serif" '
            f'font-size="11" text-anchor="middle">{escape(label)}</text>'
        )
    for i, label in enumerate(matrix.labels):
        y = TOP + i * CELL + CELL // 2 + 4
        lines.append(
            f'<text class="row-label" x="{LEFT - 6}" y="{y}" font-family="sans-serif" '
            f'font-size="11" text-anchor="end">{escape(label)}</text>'
        )
    for i in range(n):
        for j in range(n):
            value = matrix.cells[i][j]
            fill = palette.neutral if i == j else cell_color(value, vmin, vmax, palette)
            x = LEFT + j * CELL
            y = TOP + i * CELL
            title = quoteattr(f"{matrix.labels[i]},{matrix.labels[j]}={value:g}")
            lines.append(
                f'<rect class="cell" x="{x}" y="{y}" width="{CELL}" height="{CELL}" '
                f'fill="{fill}" stroke="#ffffff" data-value="{value:g}" data-title={title}/>'
            )
    lines.append("</svg>")
    data = "\n".join(lines).encode("utf-8") + b"\n"
    Path(out).write_bytes(data)
    return len(data)
