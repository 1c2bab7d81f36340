"""Discs, arcs, polylines, clipped regions, and the certified predicates.

Freeness and disjointness are certified by Lipschitz-margin branch and bound:
a candidate set is covered by square cells, the objective is evaluated at the
cell centers, and a cell is discharged when its value minus (Lipschitz bound
times cell radius) clears the threshold.  Cells that cannot be discharged are
split until either a witness appears or the cell radius underflows the
tolerance, in which case the verdict is an explicit Unresolved.

Polygon booleans (region unions, frontier extraction) run on shapely
geometries snapped to a fixed grid; everything else stays analytic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
import shapely
from shapely.geometry import LineString, MultiLineString, MultiPolygon, Point as ShPoint, Polygon
from shapely.ops import linemerge, split as shapely_split, unary_union

from .errors import (
    DegenerateAnchor,
    DisconnectedUnion,
    NoUnboundedComponent,
    OnLine,
)
from .maps import PlaneMap, Rect, as_points

SNAP_GRID = 1e-9      # polygon-boolean snap grid (plane units)
ARC_POLY_K = 64       # boundary vertices per circular piece in polygon proxies

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# primitive shapes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Disc:
    """Closed euclidean disc."""

    center: Tuple[float, float]
    radius: float

    def __post_init__(self):
        if not (self.radius > 0 and np.all(np.isfinite(self.center))):
            raise ValueError(f"bad disc {self}")

    @property
    def c(self) -> np.ndarray:
        return np.asarray(self.center, dtype=float)

    def contains(self, pts) -> np.ndarray:
        pts = as_points(pts)
        return np.linalg.norm(pts - self.c, axis=1) <= self.radius

    def boundary_points(self, n: int) -> np.ndarray:
        th = np.linspace(0.0, TWO_PI, n, endpoint=False)
        return self.c + self.radius * np.column_stack([np.cos(th), np.sin(th)])

    def polygon(self, k: int = ARC_POLY_K) -> Polygon:
        return Polygon(self.boundary_points(k))

    def area(self) -> float:
        return math.pi * self.radius * self.radius

    def translate(self, v) -> "Disc":
        v = np.asarray(v, dtype=float)
        return Disc((self.center[0] + v[0], self.center[1] + v[1]), self.radius)


def norm_angle(theta: float) -> float:
    """Normalize to [0, 2*pi)."""
    return theta % TWO_PI


def ccw_span(a: float, b: float) -> float:
    """Arc length in radians going counterclockwise from angle a to angle b."""
    return norm_angle(b - a)


def angle_in_ccw_arc(theta, start: float, end: float) -> np.ndarray:
    """Membership of angle(s) in the closed CCW arc from start to end."""
    theta = np.asarray(theta, dtype=float)
    span = ccw_span(start, end)
    return norm_angle(theta - start) % TWO_PI <= span + 1e-15


@dataclass(frozen=True)
class CircleArc:
    """Closed sub-arc of a circle, stored CCW from theta_start to theta_end.

    orientation records the traversal direction used by callers (a CW arc is
    the same point set traversed from theta_end back to theta_start).
    A zero-span arc is an allowed degenerate single point.
    """

    disc: Disc
    theta_start: float
    theta_end: float
    orientation: str = "ccw"  # "ccw" | "cw"

    @property
    def span(self) -> float:
        return ccw_span(self.theta_start, self.theta_end)

    @property
    def degenerate(self) -> bool:
        return self.span <= 1e-12

    def length(self) -> float:
        return self.disc.radius * self.span

    def point_at(self, theta: float) -> np.ndarray:
        return self.disc.c + self.disc.radius * np.array([math.cos(theta), math.sin(theta)])

    @property
    def start_point(self) -> np.ndarray:
        th = self.theta_start if self.orientation == "ccw" else self.theta_end
        return self.point_at(th)

    @property
    def end_point(self) -> np.ndarray:
        th = self.theta_end if self.orientation == "ccw" else self.theta_start
        return self.point_at(th)

    @property
    def midpoint_angle(self) -> float:
        return norm_angle(self.theta_start + 0.5 * self.span)

    def sample_angles(self, n: int, trim: float = 0.0) -> np.ndarray:
        """n angles along the arc, optionally trimmed away from the endpoints (radians)."""
        lo, hi = trim, self.span - trim
        if hi <= lo:
            lo = hi = 0.5 * self.span
        return norm_angle(self.theta_start + np.linspace(lo, hi, max(n, 1)))

    def sample_points(self, n: int, trim: float = 0.0) -> np.ndarray:
        th = self.sample_angles(n, trim)
        return self.disc.c + self.disc.radius * np.column_stack([np.cos(th), np.sin(th)])

    def contains_angle(self, theta) -> np.ndarray:
        return angle_in_ccw_arc(theta, self.theta_start, self.theta_end)


def minimal_covering_arc(angles: np.ndarray) -> Tuple[float, float]:
    """Smallest closed CCW arc (start, end) covering all given angles.

    Found as the complement of the largest angular gap between consecutive
    marked angles.
    """
    a = np.sort(norm_angle(np.asarray(angles, dtype=float)))
    if a.size == 0:
        raise ValueError("no angles to cover")
    if a.size == 1:
        return float(a[0]), float(a[0])
    gaps = np.diff(np.concatenate([a, [a[0] + TWO_PI]]))
    k = int(np.argmax(gaps))
    start = a[(k + 1) % a.size]
    end = a[k]
    return float(norm_angle(start)), float(norm_angle(end))


# ---------------------------------------------------------------------------
# polylines
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Polyline:
    """Ordered vertex chain; proper polylines have both ends on the window boundary."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] < 2 or v.shape[1] != 2:
            raise ValueError("polyline needs >= 2 vertices of dimension 2")
        if np.any(np.linalg.norm(np.diff(v, axis=0), axis=1) == 0.0):
            raise ValueError("consecutive polyline vertices coincide")
        object.__setattr__(self, "vertices", v)

    def __len__(self) -> int:
        return self.vertices.shape[0]

    def length(self) -> float:
        return float(np.sum(np.linalg.norm(np.diff(self.vertices, axis=0), axis=1)))

    def as_linestring(self) -> LineString:
        return LineString(self.vertices)

    def is_simple(self) -> bool:
        return bool(self.as_linestring().is_simple)

    def translate(self, v) -> "Polyline":
        return Polyline(self.vertices + np.asarray(v, dtype=float))

    def reversed(self) -> "Polyline":
        return Polyline(self.vertices[::-1])

    def resample(self, step: float) -> np.ndarray:
        """Points along the polyline at arclength spacing <= step (includes both ends)."""
        ls = self.as_linestring()
        n = max(2, int(math.ceil(ls.length / step)) + 1)
        d = np.linspace(0.0, ls.length, n)
        pts = shapely.line_interpolate_point(ls, d)
        return np.column_stack([shapely.get_x(pts), shapely.get_y(pts)])

    def distance_to(self, pts) -> np.ndarray:
        """Distance from each query point to the polyline (1-Lipschitz in the query)."""
        pts = as_points(pts)
        ls = self.as_linestring()
        return shapely.distance(shapely.points(pts), ls)


def polyline_simple(poly: Polyline) -> bool:
    """Exact self-intersection test (GEOS sweep under the hood)."""
    return poly.is_simple()


def segment_in_disc_union(seg: np.ndarray, discs: Sequence[Disc], step: float = 1e-3) -> bool:
    """Whether the segment lies in the union of the open discs, with certified margin.

    The depth function q -> max_i (r_i - |q - c_i|) is 1-Lipschitz, so sampling
    at arclength spacing `step` and requiring depth > step/2 at every sample
    certifies coverage of the whole segment.
    """
    a, b = np.asarray(seg[0], float), np.asarray(seg[1], float)
    n = max(2, int(math.ceil(np.linalg.norm(b - a) / step)) + 1)
    pts = a + np.linspace(0.0, 1.0, n)[:, None] * (b - a)
    centers = np.array([d.c for d in discs])
    radii = np.array([d.radius for d in discs])
    depth = np.max(radii[None, :] - np.linalg.norm(pts[:, None, :] - centers[None, :, :], axis=2), axis=1)
    return bool(np.all(depth > 0.5 * step))


# ---------------------------------------------------------------------------
# certified branch-and-bound separation tests
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FreenessCert:
    """Outcome of a certified separation query.

    verdict "free": min distance between image and target exceeds `margin` > 0.
    verdict "not_free": `witness` is a domain point whose image lies in the target.
    verdict "unresolved": refinement hit tolerance at the free/not-free boundary.
    """

    verdict: str
    margin: float = 0.0
    witness: Optional[Tuple[float, float]] = None
    samples_used: int = 0
    name: str = ""
    reason: str = ""  # for unresolved verdicts: "tolerance" | "cell-budget"

    @property
    def is_free(self) -> bool:
        return self.verdict == "free"

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "margin": self.margin,
            "witness": list(self.witness) if self.witness is not None else None,
            "samples_used": self.samples_used,
            "name": self.name,
            "reason": self.reason,
        }


class DiscDomain:
    """Source domain: a closed disc."""

    def __init__(self, disc: Disc):
        self.disc = disc

    def bbox(self) -> Rect:
        c, r = self.disc.c, self.disc.radius
        return Rect(c[0] - r, c[1] - r, c[0] + r, c[1] + r)

    def cells_touch(self, centers: np.ndarray, rad: float) -> np.ndarray:
        return np.linalg.norm(centers - self.disc.c, axis=1) <= self.disc.radius + rad

    def contains(self, pts: np.ndarray) -> np.ndarray:
        return self.disc.contains(pts)


class BittenDiscDomain:
    """Closed disc minus two open bite discs (a derived-disc point set)."""

    def __init__(self, disc: Disc, bites: Sequence[Disc]):
        self.disc = disc
        self.bites = list(bites)

    def bbox(self) -> Rect:
        c, r = self.disc.c, self.disc.radius
        return Rect(c[0] - r, c[1] - r, c[0] + r, c[1] + r)

    def cells_touch(self, centers: np.ndarray, rad: float) -> np.ndarray:
        ok = np.linalg.norm(centers - self.disc.c, axis=1) <= self.disc.radius + rad
        for b in self.bites:
            ok &= np.linalg.norm(centers - b.c, axis=1) >= b.radius - rad
        return ok

    def contains(self, pts: np.ndarray) -> np.ndarray:
        pts = as_points(pts)
        ok = self.disc.contains(pts)
        for b in self.bites:
            ok &= np.linalg.norm(pts - b.c, axis=1) >= b.radius
        return ok


class UnionDomain:
    """Union of domains."""

    def __init__(self, members: Sequence):
        self.members = list(members)

    def bbox(self) -> Rect:
        bs = [m.bbox() for m in self.members]
        return Rect(
            min(b.x0 for b in bs), min(b.y0 for b in bs),
            max(b.x1 for b in bs), max(b.y1 for b in bs),
        )

    def cells_touch(self, centers: np.ndarray, rad: float) -> np.ndarray:
        mask = np.zeros(centers.shape[0], dtype=bool)
        for m in self.members:
            mask |= m.cells_touch(centers, rad)
        return mask

    def contains(self, pts: np.ndarray) -> np.ndarray:
        mask = np.zeros(as_points(pts).shape[0], dtype=bool)
        for m in self.members:
            mask |= m.contains(pts)
        return mask


class DiscTarget:
    """Target set: a closed disc.  sep_low is a 1-Lipschitz lower bound on distance."""

    def __init__(self, disc: Disc):
        self.disc = disc

    def sep_low(self, pts: np.ndarray) -> np.ndarray:
        return np.linalg.norm(pts - self.disc.c, axis=1) - self.disc.radius

    def contains(self, pts: np.ndarray) -> np.ndarray:
        return self.disc.contains(pts)


class BittenDiscTarget:
    """Target set: disc minus bites.  Points inside a bite are at distance >= eps - |q - b|."""

    def __init__(self, disc: Disc, bites: Sequence[Disc]):
        self.disc = disc
        self.bites = list(bites)

    def sep_low(self, pts: np.ndarray) -> np.ndarray:
        v = np.linalg.norm(pts - self.disc.c, axis=1) - self.disc.radius
        for b in self.bites:
            v = np.maximum(v, b.radius - np.linalg.norm(pts - b.c, axis=1))
        return v

    def contains(self, pts: np.ndarray) -> np.ndarray:
        pts = as_points(pts)
        ok = self.disc.contains(pts)
        for b in self.bites:
            ok &= np.linalg.norm(pts - b.c, axis=1) >= b.radius
        return ok


class UnionTarget:
    def __init__(self, members: Sequence):
        self.members = list(members)

    def sep_low(self, pts: np.ndarray) -> np.ndarray:
        v = self.members[0].sep_low(pts)
        for m in self.members[1:]:
            v = np.minimum(v, m.sep_low(pts))
        return v

    def contains(self, pts: np.ndarray) -> np.ndarray:
        mask = np.zeros(as_points(pts).shape[0], dtype=bool)
        for m in self.members:
            mask |= m.contains(pts)
        return mask


class PolylineTarget:
    """Target set: a polyline, hit when the image comes within `thickness` of it."""

    def __init__(self, poly: Polyline, thickness: float = 0.0):
        self.poly = poly
        self.thickness = thickness

    def sep_low(self, pts: np.ndarray) -> np.ndarray:
        return self.poly.distance_to(pts) - self.thickness

    def contains(self, pts: np.ndarray) -> np.ndarray:
        return self.poly.distance_to(pts) <= self.thickness


def separation_test(
    pmap: PlaneMap,
    domain,
    target,
    power: int = 1,
    tol: float = 1e-6,
    name: str = "",
    max_cells: int = 400_000,
) -> FreenessCert:
    """Certify min over p in domain of dist(h^power(p), target) > 0, or find a witness.

    Returns FreenessCert with the certified separation margin; `free` here means
    "the image of the domain under h^power misses the target".
    """
    bb = domain.bbox()
    lip = pmap.lipschitz_power_bound(bb, power)
    n0 = 8
    sx = bb.width / n0
    sy = bb.height / n0
    xs = bb.x0 + sx * (np.arange(n0) + 0.5)
    ys = bb.y0 + sy * (np.arange(n0) + 0.5)
    gx, gy = np.meshgrid(xs, ys)
    centers = np.column_stack([gx.ravel(), gy.ravel()])
    rad = 0.5 * math.hypot(sx, sy)

    samples = 0
    best_margin = math.inf
    while True:
        keep = domain.cells_touch(centers, rad)
        centers = centers[keep]
        if centers.shape[0] == 0:
            break
        # re-tighten the Lipschitz bound over the surviving cells: active sets
        # shrink toward the separation minimizer, where the local bound can be
        # orders of magnitude below the bound over the full domain box
        abb = Rect(
            float(centers[:, 0].min()) - rad, float(centers[:, 1].min()) - rad,
            float(centers[:, 0].max()) + rad, float(centers[:, 1].max()) + rad,
        )
        lip = min(lip, pmap.lipschitz_power_bound(abb, power))
        images = pmap.eval_power(centers, power, check=False)
        samples += centers.shape[0]
        vals = target.sep_low(images)

        inside = domain.contains(centers)
        hits = inside & target.contains(images)
        if np.any(hits):
            k = int(np.flatnonzero(hits)[0])
            w = centers[k]
            return FreenessCert("not_free", witness=(float(w[0]), float(w[1])),
                                samples_used=samples, name=name)

        lower = vals - lip * rad
        cleared = lower > 0.0
        if np.any(cleared):
            best_margin = min(best_margin, float(np.min(lower[cleared])))
        active = centers[~cleared]
        if active.shape[0] == 0:
            return FreenessCert("free", margin=best_margin, samples_used=samples, name=name)
        if rad < tol:
            return FreenessCert("unresolved", samples_used=samples, name=name, reason="tolerance")
        if 4 * active.shape[0] > max_cells:
            return FreenessCert("unresolved", samples_used=samples, name=name, reason="cell-budget")
        # split each active cell into 4
        rad *= 0.5
        off = rad / math.sqrt(2.0)
        shifts = np.array([[-off, -off], [-off, off], [off, -off], [off, off]])
        centers = (active[:, None, :] + shifts[None, :, :]).reshape(-1, 2)
    return FreenessCert("free", margin=best_margin if math.isfinite(best_margin) else 0.0,
                        samples_used=samples, name=name)


def free_test_disc(pmap: PlaneMap, disc: Disc, tol: float = 1e-6) -> FreenessCert:
    """Certify that the closed disc misses its image h(disc) (Lipschitz-margin grid)."""
    return separation_test(pmap, DiscDomain(disc), DiscTarget(disc), power=1, tol=tol,
                           name=f"free:disc@{disc.center}r{disc.radius:.6g}")


def sets_disjoint(pmap: PlaneMap, source, target, power: int = 1, tol: float = 1e-6,
                  name: str = "") -> FreenessCert:
    """Certify h^power(source) disjoint from target (both from the domain/target classes)."""
    if isinstance(source, Disc):
        source = DiscDomain(source)
    if isinstance(target, Disc):
        target = DiscTarget(target)
    return separation_test(pmap, source, target, power=power, tol=tol, name=name)


# ---------------------------------------------------------------------------
# side-of-polyline queries
# ---------------------------------------------------------------------------


def _cross2(u, v):
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def _segment_crossings(p: np.ndarray, q: np.ndarray, verts: np.ndarray, eps: float) -> int:
    """Count proper crossings of segment [p, q] with the polyline; raise on grazing."""
    a = verts[:-1]
    b = verts[1:]
    pq = q - p
    d1 = _cross2(pq, a - p)
    d2 = _cross2(pq, b - p)
    ab = b - a
    d3 = _cross2(ab, p - a)
    d4 = _cross2(ab, q - a)
    scale = np.linalg.norm(pq) * np.maximum(np.linalg.norm(ab, axis=1), 1e-30)
    straddle_pq = d1 * d2 < 0
    straddle_ab = d3 * d4 < 0
    graze = (
        ((np.abs(d1) <= eps * scale) | (np.abs(d2) <= eps * scale)) & (d3 * d4 <= 0)
    ) | (
        ((np.abs(d3) <= eps * scale) | (np.abs(d4) <= eps * scale)) & (d1 * d2 <= 0)
    )
    if np.any(graze & ~(straddle_pq & straddle_ab)):
        raise DegenerateAnchor("query segment grazes the polyline")
    return int(np.count_nonzero(straddle_pq & straddle_ab))


class SideOracle:
    """Sidedness of points relative to a proper polyline inside a window.

    The D side is calibrated as the side containing the image of a reference
    point of the line (by convention h of the first vertex), matching the
    orientation convention of Brouwer lines.
    """

    D_SIDE = "D"
    G_SIDE = "G"
    ON_LINE = "on"

    def __init__(self, poly: Polyline, window: Rect, d_reference: np.ndarray, tol: float = 1e-9):
        self.poly = poly
        self.window = window
        self.tol = tol
        w = window.pad(max(window.width, window.height))
        self._anchors = []
        for cx, cy in [(w.x0, w.y0), (w.x1, w.y1), (w.x0, w.y1), (w.x1, w.y0),
                       (w.x0, 0.5 * (w.y0 + w.y1)), (0.5 * (w.x0 + w.x1), w.y0)]:
            self._anchors.append(np.array([cx, cy]))
        # Crossing parity needs a curve that separates the plane, so each end
        # of the clipped line is continued far outward, perpendicular to the
        # nearest window edge; extensions live outside the window and outside
        # the anchor hull, so they cannot interfere with each other or the line.
        self._extended = self._extend_ends(poly.vertices, window)
        self._ref = np.asarray(d_reference, dtype=float)
        self._ref_parity = {}

    @staticmethod
    def _extend_ends(verts: np.ndarray, window: Rect) -> np.ndarray:
        big = 100.0 * max(window.width, window.height)

        def outward(p: np.ndarray) -> np.ndarray:
            gaps = {
                "left": abs(p[0] - window.x0),
                "right": abs(p[0] - window.x1),
                "bottom": abs(p[1] - window.y0),
                "top": abs(p[1] - window.y1),
            }
            edge = min(gaps, key=gaps.get)
            if edge == "left":
                return p + np.array([-big, 0.0])
            if edge == "right":
                return p + np.array([big, 0.0])
            if edge == "bottom":
                return p + np.array([0.0, -big])
            return p + np.array([0.0, big])

        return np.vstack([outward(verts[0]), verts, outward(verts[-1])])

    def _parity(self, p: np.ndarray, anchor_idx: int) -> int:
        return _segment_crossings(p, self._anchors[anchor_idx], self._extended, 1e-12) % 2

    def side(self, p) -> str:
        p = np.asarray(p, dtype=float).reshape(2)
        if float(self.poly.distance_to(p.reshape(1, 2))[0]) <= self.tol:
            return self.ON_LINE
        last_err = None
        for i in range(len(self._anchors)):
            try:
                if i not in self._ref_parity:
                    self._ref_parity[i] = self._parity(self._ref, i)
                par = self._parity(p, i)
            except DegenerateAnchor as e:
                last_err = e
                continue
            return self.D_SIDE if par == self._ref_parity[i] else self.G_SIDE
        raise last_err or DegenerateAnchor("all anchors degenerate")

    def sides(self, pts: np.ndarray) -> List[str]:
        return [self.side(p) for p in as_points(pts)]


def side_oracle_for_map(poly: Polyline, window: Rect, pmap: PlaneMap) -> SideOracle:
    """SideOracle with D calibrated as the side containing h(first vertex)."""
    ref = pmap.eval(poly.vertices[0], check=False)
    return SideOracle(poly, window, ref)


# ---------------------------------------------------------------------------
# regions and frontier extraction
# ---------------------------------------------------------------------------


@dataclass
class Region:
    """A half-region of a proper polyline clipped to the window."""

    polygon: Polygon
    side_tag: str = "D"


def window_polygon(window: Rect) -> Polygon:
    return Polygon(
        [(window.x0, window.y0), (window.x1, window.y0), (window.x1, window.y1), (window.x0, window.y1)]
    )


def _snap(geom):
    return shapely.set_precision(geom, SNAP_GRID)


def half_region(poly: Polyline, window: Rect, interior_point, side_tag: str = "D") -> Region:
    """Component of window \\ polyline containing interior_point, as a polygon."""
    wp = window_polygon(window)
    ls = poly.as_linestring()
    pieces = shapely_split(wp, ls)
    target = ShPoint(float(interior_point[0]), float(interior_point[1]))
    best = None
    for g in pieces.geoms:
        if g.contains(target):
            best = g
            break
    if best is None:
        # fall back to nearest piece (interior point may sit on the snap grid)
        best = min(pieces.geoms, key=lambda g: g.distance(target))
    return Region(_snap(best), side_tag)


_EDGE_LINES = {
    "left": lambda w: LineString([(w.x0, w.y0), (w.x0, w.y1)]),
    "right": lambda w: LineString([(w.x1, w.y0), (w.x1, w.y1)]),
    "bottom": lambda w: LineString([(w.x0, w.y0), (w.x1, w.y0)]),
    "top": lambda w: LineString([(w.x0, w.y1), (w.x1, w.y1)]),
}


def union_frontier(regions: Sequence[Region], window: Rect, edge_mark: str,
                   edge_tol: float = 1e-7) -> Polyline:
    """Frontier of the complement component touching the designated window edge.

    The union of the region polygons plays the role of the filled side; the
    complement component touching `edge_mark` is the unbounded-component proxy,
    and its boundary away from the window frame is returned as a proper
    polyline (both ends on the window boundary).
    """
    union = _snap(unary_union([_snap(r.polygon) for r in regions]))
    if union.is_empty:
        raise DisconnectedUnion("empty region union")
    if isinstance(union, MultiPolygon):
        raise DisconnectedUnion(f"region union has {len(union.geoms)} components")
    wp = window_polygon(window)
    comp = wp.difference(union)
    if comp.is_empty:
        raise NoUnboundedComponent("union fills the window")
    comps = list(comp.geoms) if isinstance(comp, MultiPolygon) else [comp]
    mark = _EDGE_LINES[edge_mark](window)
    touching = [g for g in comps if g.distance(mark) <= edge_tol]
    if not touching:
        raise NoUnboundedComponent(f"no complement component touches the {edge_mark} window edge")
    comp = max(touching, key=lambda g: g.area)

    # keep the boundary pieces that are not on the window frame
    frame = wp.exterior
    pieces = []
    coords = np.asarray(comp.exterior.coords)
    for i in range(len(coords) - 1):
        seg = LineString([coords[i], coords[i + 1]])
        if frame.distance(ShPoint(coords[i])) <= edge_tol and frame.distance(ShPoint(coords[i + 1])) <= edge_tol:
            mid = seg.interpolate(0.5, normalized=True)
            if frame.distance(mid) <= edge_tol:
                continue
        pieces.append(seg)
    if not pieces:
        raise NoUnboundedComponent("frontier lies entirely on the window frame")
    merged = linemerge(MultiLineString(pieces))
    if isinstance(merged, MultiLineString):
        merged = max(merged.geoms, key=lambda g: g.length)
    verts = np.asarray(merged.coords)
    # drop duplicate consecutive vertices introduced by snapping
    keep = np.concatenate([[True], np.linalg.norm(np.diff(verts, axis=0), axis=1) > 0])
    return Polyline(verts[keep])
