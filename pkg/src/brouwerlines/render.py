"""SVG 1.1 rendering: y-up scene mapped onto a fixed 1000-unit viewport."""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .maps import PlaneMap, Rect

VIEWPORT = 1000.0

HIGH_COLOR = "#d62728"   # high translation arcs
LOW_COLOR = "#1f77b4"    # low translation arcs
LINE_COLOR = "#000000"
IMAGE_COLOR = "#2ca02c"   # h(L)
PREIMAGE_COLOR = "#9467bd"  # h^-1(L)
DISC_STROKE = "#888888"


class SvgScene:
    """Collects shapes in plane coordinates; emits standalone SVG text."""

    def __init__(self, window: Rect):
        self.window = window
        self._scale = VIEWPORT / max(window.width, window.height)
        self._w = window.width * self._scale
        self._h = window.height * self._scale
        self._parts: List[str] = []

    def _pt(self, p) -> Tuple[float, float]:
        u = (float(p[0]) - self.window.x0) * self._scale
        v = self._h - (float(p[1]) - self.window.y0) * self._scale
        return u, v

    def _fmt(self, x: float) -> str:
        return f"{x:.3f}"

    def polyline(self, verts: np.ndarray, color: str = LINE_COLOR, width: float = 2.0,
                 dashed: bool = False, opacity: float = 1.0):
        pts = " ".join(
            f"{self._fmt(u)},{self._fmt(v)}" for u, v in (self._pt(p) for p in verts)
        )
        dash = ' stroke-dasharray="8 6"' if dashed else ""
        self._parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{width}" stroke-opacity="{opacity}"{dash}/>'
        )

    def circle(self, center, radius: float, stroke: str = DISC_STROKE,
               fill: str = "none", width: float = 1.0, opacity: float = 1.0):
        u, v = self._pt(center)
        r = radius * self._scale
        self._parts.append(
            f'<circle cx="{self._fmt(u)}" cy="{self._fmt(v)}" r="{self._fmt(r)}" '
            f'stroke="{stroke}" fill="{fill}" stroke-width="{width}" opacity="{opacity}"/>'
        )

    def arc_polyline(self, center, radius: float, thetas: np.ndarray, color: str,
                     width: float = 2.5):
        verts = np.asarray(center, dtype=float) + radius * np.column_stack(
            [np.cos(thetas), np.sin(thetas)]
        )
        self.polyline(verts, color=color, width=width)

    def cell(self, x: float, y: float, size: float, color: str):
        u, v = self._pt((x - size / 2, y + size / 2))
        s = size * self._scale
        self._parts.append(
            f'<rect x="{self._fmt(u)}" y="{self._fmt(v)}" width="{self._fmt(s)}" '
            f'height="{self._fmt(s)}" fill="{color}" stroke="none"/>'
        )

    def frame(self):
        self._parts.append(
            f'<rect x="0" y="0" width="{self._fmt(self._w)}" height="{self._fmt(self._h)}" '
            f'fill="none" stroke="#333333" stroke-width="1.5"/>'
        )

    def to_svg(self) -> str:
        body = "\n  ".join(self._parts)
        return (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{self._fmt(self._w)}" height="{self._fmt(self._h)}" '
            f'viewBox="0 0 {self._fmt(self._w)} {self._fmt(self._h)}">\n'
            f"  {body}\n</svg>\n"
        )

    def write(self, path: str):
        with open(path, "w") as fh:
            fh.write(self.to_svg())


def _heat_color(t: float) -> str:
    """Linear blue -> red scale on t in [0, 1]."""
    t = min(max(t, 0.0), 1.0)
    r = int(round(255 * t))
    b = int(round(255 * (1.0 - t)))
    g = int(round(64 * (1.0 - abs(2 * t - 1.0))))
    return f"#{r:02x}{g:02x}{b:02x}"


def render_radius_field(window: Rect, points: np.ndarray, radii: np.ndarray,
                        spacing: float) -> str:
    scene = SvgScene(window)
    lo, hi = float(radii.min()), float(radii.max())
    span = hi - lo if hi > lo else 1.0
    for (x, y), r in zip(points, radii):
        scene.cell(float(x), float(y), spacing, _heat_color((r - lo) / span))
    scene.frame()
    return scene.to_svg()


def render_line_scene(
    pmap: PlaneMap,
    window: Rect,
    line_vertices: np.ndarray,
    discs: Optional[Sequence[Dict]] = None,
    n_image_samples: int = 400,
) -> str:
    """Scene with the chain discs (translation arcs colored by side), the line
    L, and its forward/backward images h(L), h^-1(L)."""
    scene = SvgScene(window)
    for d in discs or []:
        scene.circle(d["center"], d["radius"], opacity=0.8)
        for side, color in (("high", HIGH_COLOR), ("low", LOW_COLOR)):
            arc = d.get(f"arc_{side}")
            if arc is not None:
                thetas = np.linspace(arc[0], arc[1], 32)
                scene.arc_polyline(d["center"], d["radius"], thetas, color)
    verts = np.asarray(line_vertices, dtype=float)
    # resample for smooth curved images under nonlinear maps
    from .geometry import Polyline

    samples = Polyline(verts).resample(
        max(Polyline(verts).length() / n_image_samples, 1e-6)
    )
    scene.polyline(pmap.eval(samples, check=False), color=IMAGE_COLOR, width=1.5, dashed=True)
    scene.polyline(pmap.eval_inverse(samples, check=False), color=PREIMAGE_COLOR,
                   width=1.5, dashed=True)
    scene.polyline(verts, color=LINE_COLOR, width=2.5)
    scene.frame()
    return scene.to_svg()


def render_report(report: Dict) -> str:
    """Re-render the SVG scene for a saved line/classification report."""
    from .certs import map_from_dict

    outcome = report.get("outcome", report)
    cert = outcome.get("certificate", outcome)
    pmap = map_from_dict(cert["map"])
    payload = cert["payload"]
    if cert["kind"] == "brouwer_line":
        window = Rect(*payload["window"])
        return render_line_scene(pmap, window, np.asarray(payload["vertices"]),
                                 discs=cert.get("extra", {}).get("discs"))
    if cert["kind"] == "essential_curve":
        return render_line_scene(pmap, pmap.window,
                                 np.asarray(payload["clipped_vertices"]))
    raise ValueError(f"cannot render certificate kind {cert['kind']!r}")
