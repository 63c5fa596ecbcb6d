"""SVG rendering of instances and matchings (presentation only)."""
from __future__ import annotations

import xml.etree.ElementTree as ET
from fractions import Fraction

from rectmatch.geometry import Color, ColorClass, PointSet, rect_from_pair
from rectmatch.matching import Matching

_FILL = {Color.RED: "#c0392b", Color.BLUE: "#2962a8"}
_STROKE = {
    ColorClass.RED_RED: "#c0392b",
    ColorClass.BLUE_BLUE: "#2962a8",
    ColorClass.MIXED: "#7d3c98",
}


def render_svg(s: PointSet, matching: Matching | None = None, *, size: int = 640) -> str:
    """An SVG drawing of the points (red/blue dots) and, optionally, the
    rectangles of a matching, one stroke color per rectangle color class.
    The y axis is flipped into screen coordinates."""
    if len(s) == 0:
        xmin = ymin = Fraction(0)
        xmax = ymax = Fraction(1)
    else:
        xmin = min(p.x for p in s)
        xmax = max(p.x for p in s)
        ymin = min(p.y for p in s)
        ymax = max(p.y for p in s)
    span = max(xmax - xmin, ymax - ymin, Fraction(1))
    pad = span / 20
    scale = Fraction(size) / (span + 2 * pad)

    def sx(x) -> float:
        return float((x - xmin + pad) * scale)

    def sy(y) -> float:
        # screen y grows downward
        return float((ymax - y + pad) * scale)

    height = sy(ymin)
    root = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=str(size),
        height=f"{height:.2f}",
        viewBox=f"0 0 {size} {height:.2f}",
    )
    root.append(ET.Comment(" y axis flipped: screen_y = (ymax - y + pad) * scale "))
    if matching is not None:
        for i, j in matching.pairs:
            r = rect_from_pair(s, i, j)
            ET.SubElement(
                root, "rect",
                x=f"{sx(r.xmin):.2f}", y=f"{sy(r.ymax):.2f}",
                width=f"{max(sx(r.xmax) - sx(r.xmin), 1.0):.2f}",
                height=f"{max(sy(r.ymin) - sy(r.ymax), 1.0):.2f}",
                fill="none", stroke=_STROKE[r.color_class], **{"stroke-width": "1.5"},
            )
    radius = max(2.0, float(scale) * 0.18)
    for p in s:
        ET.SubElement(
            root, "circle",
            cx=f"{sx(p.x):.2f}", cy=f"{sy(p.y):.2f}",
            r=f"{radius:.2f}", fill=_FILL[p.color],
        )
    return ET.tostring(root, encoding="unicode") + "\n"
