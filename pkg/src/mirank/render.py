"""Text, JSON and SVG views of rankings and bootstrap reports."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .mrmr import Direction, RankResult
from .stability import BootstrapReport, describe_config

SVG_NS = "http://www.w3.org/2000/svg"


@dataclass(frozen=True)
class RenderOptions:
    format: str = "text"
    digits: int = 3
    negative_hue: str = "#2166ac"
    positive_hue: str = "#b2182b"
    width: int = 720
    height: int = 560

    def __post_init__(self):
        if self.digits < 0:
            raise ValueError("digits must be non-negative")
        if self.format not in ("text", "json", "svg"):
            raise ValueError(f"unknown format {self.format!r}")


def fmt(value: float, digits: int = 3) -> str:
    """Round and print without trailing zeros; ``NA`` for absent values."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "NA"
    if math.isinf(value):
        return "-Inf" if value < 0 else "Inf"
    text = f"{round(float(value), digits):.{digits}f}"
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    widths = [max(len(r[j]) for r in [header] + rows) for j in range(len(header))]
    lines = []
    for r in [header] + rows:
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append(" ".join(cells).rstrip())
    return lines


def render_summary(result: RankResult, options: RenderOptions | None = None) -> str:
    options = options or RenderOptions()
    d = options.digits
    cfg = result.config
    direction = result.direction.value
    lines = [
        f"Number of variables ranked: {len(result.order)}",
        f"{direction} search using {cfg.method} method",
        f"({cfg.scheme.value} scheme)",
        "",
    ]
    if result.excluded:
        lines += [f"Excluded (zero entropy): {', '.join(result.excluded)}", ""]
    caption = "decreasing" if result.direction is Direction.FORWARD else "increasing"
    lines.append(f"Ordered variables ({caption} importance):")
    lines += _table(
        [""] + list(result.order),
        [["Scores"] + [fmt(s, d) for s in result.selection_scores]],
    )
    lines += ["", " ---", "", " Matrix of scores:"]
    n_cols = len(result.order)
    body = []
    for i, name in enumerate(result.rows):
        cells = [fmt(v, d) if not math.isnan(v) else "" for v in result.matrix[i, :n_cols]]
        body.append([name] + cells)
    lines += _table([""] + list(result.order), body)
    return "\n".join(lines) + "\n"


def _num(v: float):
    return None if v is None or math.isnan(v) else float(v)


def result_to_json(result: RankResult) -> dict:
    """Structured form of a ranking; absent scores become ``null``."""
    return {
        "kind": "rank_result",
        "schema_version": 1,
        "config": describe_config(result.config),
        "direction": result.direction.value,
        "important": list(result.important),
        "order": list(result.order),
        "selection_scores": [_num(v) for v in result.selection_scores],
        "rows": list(result.rows),
        "matrix": [[_num(v) for v in row] for row in result.matrix],
        "relevance": {k: float(v) for k, v in result.relevance.items()},
        "excluded": list(result.excluded),
    }


def report_to_text(report: BootstrapReport) -> str:
    lines = [f"Bootstrap stability ({report.reps} reps, seed {report.seed})"]
    lines.append("reference order: " + ", ".join(report.reference_order))
    for fr in report.fractions:
        lines.append(
            f"{fr.fraction * 100:g}% ({fr.n_rows} rows): full-list match {fr.match_rate * 100:.1f}%, "
            f"mean Kendall tau {fr.mean_kendall_tau:.3f}"
            + (f", {fr.degenerate_reps} degenerate" if fr.degenerate_reps else "")
        )
    return "\n".join(lines) + "\n"


# -- SVG ---------------------------------------------------------------------

def _hex(color: str) -> tuple[int, int, int]:
    color = color.lstrip("#")
    return tuple(int(color[i : i + 2], 16) for i in (0, 2, 4))


def _mix(color: str, t: float) -> str:
    """Blend from white (t=0) to ``color`` (t=1)."""
    r, g, b = _hex(color)
    t = min(max(t, 0.0), 1.0)
    return "#{:02x}{:02x}{:02x}".format(*(round(255 + (c - 255) * t) for c in (r, g, b)))


def score_color(value: float, scale: float, options: RenderOptions) -> str:
    """Diverging colour anchored at zero; ``scale`` is max |score|."""
    if scale <= 0 or value == 0:
        return "#ffffff"
    hue = options.positive_hue if value > 0 else options.negative_hue
    return _mix(hue, abs(value) / scale)


def _svg_root(width: int, height: int) -> ET.Element:
    ET.register_namespace("", SVG_NS)
    return ET.Element(
        "svg",
        {
            "xmlns": SVG_NS,
            "version": "1.1",
            "width": str(width),
            "height": str(height),
            "viewBox": f"0 0 {width} {height}",
            "font-family": "Helvetica, Arial, sans-serif",
        },
    )


def _text(parent, x, y, s, size=11, anchor="start", **extra):
    el = ET.SubElement(
        parent,
        "text",
        {"x": f"{x:.1f}", "y": f"{y:.1f}", "font-size": str(size), "text-anchor": anchor, **extra},
    )
    el.text = s
    return el


def _serialize(root: ET.Element) -> str:
    ET.indent(root)
    body = ET.tostring(root, encoding="unicode")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + body + "\n"


def render_heatmap(result: RankResult, options: RenderOptions | None = None) -> str:
    """Triangular score matrix as an SVG heatmap.

    Rows are variables in ranked order and columns are selection steps;
    backward results are mirrored so that step 1 sits on the right. Absent
    entries are left unpainted. A legend strip shows the colour scale with
    a histogram of the scores above it.
    """
    options = options or RenderOptions()
    n_rows = len(result.rows)
    n_cols = len(result.order)
    values = result.matrix[:, :n_cols]
    present = values[~np.isnan(values) & np.isfinite(values)]
    scale = float(np.max(np.abs(present))) if present.size else 0.0

    label_w = 110
    top = 70
    legend_h = 90
    cell_w = max(24.0, (options.width - label_w - 20) / max(n_cols, 1))
    cell_h = max(18.0, (options.height - top - legend_h - 20) / max(n_rows, 1))
    width = int(label_w + cell_w * n_cols + 20)
    height = int(top + cell_h * n_rows + legend_h + 20)
    mirrored = result.direction is Direction.BACKWARD

    root = _svg_root(width, height)
    title = f"{result.direction.value} {result.config.method.name} ({result.config.scheme.value})"
    _text(root, width / 2, 20, title, size=14, anchor="middle")

    def x_of(step: int) -> float:
        slot = n_cols - 1 - step if mirrored else step
        return label_w + slot * cell_w

    for j, name in enumerate(result.order):
        _text(
            root,
            x_of(j) + cell_w / 2,
            top - 8,
            name,
            size=10,
            anchor="start",
            transform=f"rotate(-40 {x_of(j) + cell_w / 2:.1f} {top - 8:.1f})",
        )
    cells = ET.SubElement(root, "g", {"id": "cells"})
    for i, name in enumerate(result.rows):
        y = top + i * cell_h
        _text(root, label_w - 6, y + cell_h * 0.65, name, size=10, anchor="end")
        for j in range(n_cols):
            v = values[i, j]
            if math.isnan(v):
                continue
            sign = "pos" if v > 0 else ("neg" if v < 0 else "zero")
            fill = score_color(v if math.isfinite(v) else math.copysign(scale, v), scale, options)
            ET.SubElement(
                cells,
                "rect",
                {
                    "class": f"cell {sign}",
                    "x": f"{x_of(j):.1f}",
                    "y": f"{y:.1f}",
                    "width": f"{cell_w:.1f}",
                    "height": f"{cell_h:.1f}",
                    "fill": fill,
                    "stroke": "#dddddd",
                    "data-row": str(i),
                    "data-col": str(j),
                    "data-value": fmt(v, options.digits),
                },
            )
            _text(
                cells,
                x_of(j) + cell_w / 2,
                y + cell_h * 0.65,
                fmt(v, options.digits),
                size=9,
                anchor="middle",
                **{"class": "label", "data-row": str(i), "data-col": str(j)},
            )

    _legend(root, present, scale, options, label_w, top + n_rows * cell_h + 20, width - label_w - 20, legend_h - 20)
    return _serialize(root)


def _legend(root, present, scale, options, x0, y0, w, h):
    g = ET.SubElement(root, "g", {"id": "legend"})
    strip_h = 12
    steps = 40
    lo, hi = -scale, scale
    for s in range(steps):
        v = lo + (hi - lo) * (s + 0.5) / steps
        ET.SubElement(
            g,
            "rect",
            {
                "class": "key",
                "x": f"{x0 + s * w / steps:.1f}",
                "y": f"{y0 + h - strip_h:.1f}",
                "width": f"{w / steps + 0.2:.1f}",
                "height": str(strip_h),
                "fill": score_color(v, scale, options),
            },
        )
    if present.size and scale > 0:
        hist, _ = np.histogram(present, bins=20, range=(lo, hi))
        peak = hist.max()
        bar_w = w / 20
        for b, count in enumerate(hist):
            if count == 0:
                continue
            bh = (h - strip_h - 16) * count / peak
            ET.SubElement(
                g,
                "rect",
                {
                    "class": "density",
                    "x": f"{x0 + b * bar_w:.1f}",
                    "y": f"{y0 + h - strip_h - 2 - bh:.1f}",
                    "width": f"{bar_w - 1:.1f}",
                    "height": f"{bh:.1f}",
                    "fill": "#888888",
                    "data-count": str(int(count)),
                },
            )
    _text(g, x0, y0 + h + 12, fmt(lo, 3), size=9)
    _text(g, x0 + w / 2, y0 + h + 12, "0", size=9, anchor="middle")
    _text(g, x0 + w, y0 + h + 12, fmt(hi, 3), size=9, anchor="end")
    _text(g, x0, y0 + 8, "Key: score distribution", size=10)


def render_parallel_coords(report: BootstrapReport, options: RenderOptions | None = None) -> str:
    """One panel per sampling fraction; each distinct rank trajectory is a
    polyline whose opacity grows with the number of reps that produced it."""
    options = options or RenderOptions()
    names = report.reference_order
    m = len(names)
    panels = len(report.fractions)
    panel_w = max(240.0, (options.width - 40) / panels)
    panel_h = max(200.0, options.height - 120)
    width = int(40 + panel_w * panels)
    height = int(panel_h + 120)
    root = _svg_root(width, height)
    _text(root, width / 2, 20, "Retrieved rank by sampling fraction", size=14, anchor="middle")

    for p, fr in enumerate(report.fractions):
        x0 = 40 + p * panel_w
        y0 = 50
        inner_w = panel_w - 40
        g = ET.SubElement(root, "g", {"class": "panel", "data-fraction": f"{fr.fraction:g}"})
        _text(g, x0 + inner_w / 2, y0 - 10, f"{fr.fraction * 100:g}%", size=12, anchor="middle")

        def px(i: int) -> float:
            return x0 + (inner_w * i / (m - 1) if m > 1 else inner_w / 2)

        def py(rank: int) -> float:
            return y0 + (panel_h - 20) * ((rank - 1) / (m - 1) if m > 1 else 0.5)

        for i, name in enumerate(names):
            ET.SubElement(
                g,
                "line",
                {"x1": f"{px(i):.1f}", "y1": f"{py(1):.1f}", "x2": f"{px(i):.1f}", "y2": f"{py(m):.1f}", "stroke": "#cccccc"},
            )
            _text(
                g, px(i), y0 + panel_h, name, size=9, anchor="end",
                transform=f"rotate(-45 {px(i):.1f} {y0 + panel_h:.1f})",
            )
        for r in range(1, m + 1):
            _text(g, x0 - 6, py(r) + 3, str(r), size=9, anchor="end")

        counts = Counter(tuple(t) for t in fr.trajectories)
        peak = max(counts.values()) if counts else 1
        for traj, count in sorted(counts.items(), key=lambda kv: (kv[1], kv[0])):
            pts = " ".join(f"{px(i):.1f},{py(r):.1f}" for i, r in enumerate(traj))
            ET.SubElement(
                g,
                "polyline",
                {
                    "class": "trajectory",
                    "points": pts,
                    "fill": "none",
                    "stroke": options.positive_hue,
                    "stroke-width": "1.5",
                    "stroke-opacity": f"{max(0.05, count / peak):.3f}",
                    "data-count": str(count),
                    "data-ranks": ",".join(str(r) for r in traj),
                },
            )
    return _serialize(root)
