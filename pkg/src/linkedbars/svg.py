"""SVG 1.1 rendering of a solved chart."""
from __future__ import annotations

import colorsys
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .cost import ChartLayout, bar_left, block_centers, link_route
from .model import LinkTable, SideSequences, WeightedGraph

SVG_NS = "http://www.w3.org/2000/svg"


@dataclass(frozen=True)
class SvgStyle:
    """Presentation settings; none of them affect layout or cost."""

    scale: float = 40.0  # pixels per chart unit
    margin: float = 20.0
    label_space: float = 16.0
    bar_fill: str = "#d9d9d9"
    bar_stroke: str = "#555555"
    link_width: float = 1.5
    font_size: float = 11.0


def edge_color(e: int) -> str:
    hue = (e * 0.618033988749895) % 1.0
    r, g, b = colorsys.hls_to_rgb(hue, 0.55, 0.6)
    return "#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255), round(b * 255))


def _num(x: float) -> str:
    text = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if text in ("", "-0") else text


def render_svg(g: WeightedGraph, seq: SideSequences, table: LinkTable, layout: ChartLayout,
               style: SvgStyle | None = None) -> str:
    """Bars, linked blocks (one colour per edge) and orthogonal link routes."""
    style = style or SvgStyle()
    s = style.scale
    centers = block_centers(seq, layout)
    routes = [link_route(g, seq, table, layout, e, centers) for e in range(g.m)]
    top = max([seq.total(j) for j in range(g.n)] + [p[1] for r in routes for p in r.points] + [0.0])
    width = (2 * g.n - 1) * s + 2 * style.margin if g.n else 2 * style.margin
    height = top * s + 2 * style.margin + style.label_space

    def X(x):
        return _num(style.margin + x * s)

    def Y(y):
        return _num(style.margin + (top - y) * s)

    root = ET.Element("svg", {
        "xmlns": SVG_NS, "version": "1.1",
        "width": _num(width), "height": _num(height),
        "viewBox": f"0 0 {_num(width)} {_num(height)}",
        "data-scale": _num(s), "data-top": _num(top), "data-margin": _num(style.margin),
    })
    bars = ET.SubElement(root, "g", {"class": "bars"})
    for j in range(g.n):
        x0 = bar_left(j)
        h = seq.total(j)
        ET.SubElement(bars, "rect", {
            "class": "bar", "data-bar": g.ids[j], "x": X(x0), "y": Y(h), "width": _num(s),
            "height": _num(h * s), "fill": "none", "stroke": style.bar_stroke})
        w = g.weights[j]
        if w > 0:
            ET.SubElement(bars, "rect", {
                "class": "unlinked", "data-bar": g.ids[j], "x": X(x0), "y": Y(w), "width": _num(s),
                "height": _num(w * s), "fill": style.bar_fill, "stroke": style.bar_stroke})
        y = w
        for e in layout.stackings[j]:
            ew = g.edge_weights[e]
            ET.SubElement(bars, "rect", {
                "class": "block", "data-bar": g.ids[j], "data-edge": g.edge_ids[e],
                "x": X(x0), "y": Y(y + ew), "width": _num(s), "height": _num(ew * s),
                "fill": edge_color(e), "stroke": style.bar_stroke})
            y += ew
        label = ET.SubElement(bars, "text", {
            "x": X(x0 + 0.5), "y": _num(style.margin + top * s + style.label_space - 4),
            "text-anchor": "middle", "font-size": _num(style.font_size), "font-family": "sans-serif"})
        label.text = g.ids[j]
    links = ET.SubElement(root, "g", {"class": "links", "fill": "none"})
    for r in routes:
        ET.SubElement(links, "polyline", {
            "class": "link", "data-edge": g.edge_ids[r.edge],
            "points": " ".join(f"{X(x)},{Y(y)}" for x, y in r.points),
            "stroke": edge_color(r.edge), "stroke-width": _num(style.link_width)})
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"
