"""Minimal self-contained SVG line charts (polylines + axes + legend).

Deliberately tiny: enough for sweep plots without a plotting dependency.
Charts are built with ElementTree so the output is always well-formed XML.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET

from .errors import DomainError

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
           "#17becf", "#7f7f7f")

_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 64, 16, 36, 44


def _transform(vals, lo, hi, out_lo, out_hi, log: bool):
    if log:
        lo, hi = math.log10(lo), math.log10(hi)
        vals = [math.log10(v) for v in vals]
    span = hi - lo if hi > lo else 1.0
    return [out_lo + (v - lo) / span * (out_hi - out_lo) for v in vals]


def _ticks(lo, hi, log: bool, count: int = 5):
    if log:
        lo_e = math.floor(math.log10(lo))
        hi_e = math.ceil(math.log10(hi))
        step = max(1, (hi_e - lo_e) // count)
        return [10.0**e for e in range(lo_e, hi_e + 1, step)]
    span = hi - lo if hi > lo else 1.0
    raw = span / count
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min(s * mag for s in (1, 2, 5, 10) if s * mag >= raw)
    start = math.ceil(lo / step) * step
    out = []
    t = start
    while t <= hi + 1e-12 * span:
        out.append(t)
        t += step
    return out or [lo, hi]


def line_chart(
    series,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    log_y: bool = False,
    width: int = 640,
    height: int = 420,
) -> str:
    """Render [(label, xs, ys), ...] as an SVG document string."""
    if not series:
        raise DomainError("no series to plot")
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys]
    if not xs_all or len(xs_all) != len(ys_all):
        raise DomainError("series must carry equal nonempty xs and ys")
    if log_y and min(ys_all) <= 0.0:
        raise DomainError("log-scale y requires positive values")
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if y_hi == y_lo:
        y_hi = y_lo * 1.1 + 1e-9 if y_lo >= 0 else y_lo * 0.9
    plot_l, plot_r = _MARGIN_L, width - _MARGIN_R
    plot_t, plot_b = _MARGIN_T, height - _MARGIN_B

    svg = ET.Element(
        "svg",
        {
            "xmlns": "http://www.w3.org/2000/svg",
            "width": str(width),
            "height": str(height),
            "viewBox": f"0 0 {width} {height}",
        },
    )
    ET.SubElement(svg, "rect", {"x": "0", "y": "0", "width": str(width),
                                "height": str(height), "fill": "white"})
    if title:
        t = ET.SubElement(svg, "text", {"x": str(width / 2), "y": "20",
                                        "text-anchor": "middle",
                                        "font-size": "14"})
        t.text = title
    # Axes
    ET.SubElement(svg, "line", {"x1": str(plot_l), "y1": str(plot_b),
                                "x2": str(plot_r), "y2": str(plot_b),
                                "stroke": "black"})
    ET.SubElement(svg, "line", {"x1": str(plot_l), "y1": str(plot_t),
                                "x2": str(plot_l), "y2": str(plot_b),
                                "stroke": "black"})
    for tick in _ticks(x_lo, x_hi, False):
        (px,) = _transform([tick], x_lo, x_hi, plot_l, plot_r, False)
        ET.SubElement(svg, "line", {"x1": str(px), "y1": str(plot_b),
                                    "x2": str(px), "y2": str(plot_b + 5),
                                    "stroke": "black"})
        lbl = ET.SubElement(svg, "text", {"x": str(px), "y": str(plot_b + 18),
                                          "text-anchor": "middle",
                                          "font-size": "10"})
        lbl.text = f"{tick:g}"
    for tick in _ticks(y_lo, y_hi, log_y):
        (py,) = _transform([tick], y_lo, y_hi, plot_b, plot_t, log_y)
        ET.SubElement(svg, "line", {"x1": str(plot_l - 5), "y1": str(py),
                                    "x2": str(plot_l), "y2": str(py),
                                    "stroke": "black"})
        lbl = ET.SubElement(svg, "text", {"x": str(plot_l - 8), "y": str(py + 3),
                                          "text-anchor": "end",
                                          "font-size": "10"})
        lbl.text = f"{tick:g}"
    if xlabel:
        t = ET.SubElement(svg, "text", {"x": str((plot_l + plot_r) / 2),
                                        "y": str(height - 8),
                                        "text-anchor": "middle",
                                        "font-size": "12"})
        t.text = xlabel
    if ylabel:
        t = ET.SubElement(svg, "text", {
            "x": "14", "y": str((plot_t + plot_b) / 2),
            "text-anchor": "middle", "font-size": "12",
            "transform": f"rotate(-90 14 {(plot_t + plot_b) / 2})",
        })
        t.text = ylabel
    for idx, (label, xs, ys) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        px = _transform(xs, x_lo, x_hi, plot_l, plot_r, False)
        py = _transform(ys, y_lo, y_hi, plot_b, plot_t, log_y)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        ET.SubElement(svg, "polyline", {"points": pts, "fill": "none",
                                        "stroke": color, "stroke-width": "1.5"})
        ly = plot_t + 14 * idx
        ET.SubElement(svg, "line", {"x1": str(plot_r - 110), "y1": str(ly),
                                    "x2": str(plot_r - 90), "y2": str(ly),
                                    "stroke": color, "stroke-width": "2"})
        lbl = ET.SubElement(svg, "text", {"x": str(plot_r - 85), "y": str(ly + 3),
                                          "font-size": "10"})
        lbl.text = label
    return ET.tostring(svg, encoding="unicode") + "\n"
