"""Minimal deterministic SVG writer: polylines, line segments and dots.

Coordinates are written with a fixed number of decimals and no metadata,
so identical inputs give byte-identical files.
"""

from __future__ import annotations

import math

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def _f(v: float) -> str:
    s = f"{v:.5f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class SVG:
    def __init__(self, flip_y: bool = True):
        self.items: list[str] = []
        self.flip_y = flip_y
        self.xmin = self.ymin = math.inf
        self.xmax = self.ymax = -math.inf

    def _y(self, y: float) -> float:
        return -y if self.flip_y else y

    def _track(self, pts):
        for x, y in pts:
            self.xmin, self.xmax = min(self.xmin, x), max(self.xmax, x)
            self.ymin, self.ymax = min(self.ymin, y), max(self.ymax, y)

    def polyline(self, pts, stroke="#000000", width=0.01, closed=False):
        pts = [(float(x), float(y)) for x, y in pts]
        self._track(pts)
        body = " ".join(f"{_f(x)},{_f(self._y(y))}" for x, y in pts)
        tag = "polygon" if closed else "polyline"
        self.items.append(
            f'<{tag} points="{body}" fill="none" stroke="{stroke}" stroke-width="{_f(width)}"/>'
        )

    def segments(self, segs, stroke="#000000", width=0.004, opacity=0.6):
        d = []
        for (x0, y0), (x1, y1) in segs:
            self._track([(x0, y0), (x1, y1)])
            d.append(f"M{_f(x0)} {_f(self._y(y0))}L{_f(x1)} {_f(self._y(y1))}")
        self.items.append(
            f'<path d="{"".join(d)}" fill="none" stroke="{stroke}" '
            f'stroke-width="{_f(width)}" stroke-opacity="{_f(opacity)}"/>'
        )

    def dots(self, pts, r=0.01, fill="#000000"):
        pts = [(float(x), float(y)) for x, y in pts]
        self._track(pts)
        for x, y in pts:
            self.items.append(f'<circle cx="{_f(x)}" cy="{_f(self._y(y))}" r="{_f(r)}" fill="{fill}"/>')

    def render(self, pixels: int = 600) -> str:
        if not self.items:
            self.xmin = self.ymin = 0.0
            self.xmax = self.ymax = 1.0
        w, h = self.xmax - self.xmin, self.ymax - self.ymin
        pad = 0.05 * max(w, h, 1e-12)
        x0 = self.xmin - pad
        y0 = (-self.ymax if self.flip_y else self.ymin) - pad
        vw, vh = w + 2 * pad, h + 2 * pad
        height = max(1, round(pixels * vh / vw))
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{pixels}" height="{height}" '
            f'viewBox="{_f(x0)} {_f(y0)} {_f(vw)} {_f(vh)}">'
        )
        return "\n".join([head, *self.items, "</svg>"]) + "\n"

    def save(self, path: str, pixels: int = 600) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.render(pixels))
