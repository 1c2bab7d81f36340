"""Annulus and torus classification pipelines.

For a map commuting with the deck translation t(x, y) = (x + 1, y), the chain
of strict extensions either recurs modulo t^k (giving a t^k-invariant periodic
line, hence a free essential curve in the annulus), escapes properly across the
window (giving, after t-freeing and surgery if needed, a line joining the two
ends), or stays confined, in which case band typing and a König-style
selection over typed levels drive the search; when that fails the pipeline
reports an inconclusive outcome with diagnostics rather than guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import shapely
from shapely.geometry import LineString, MultiLineString, Polygon

from .chains import (
    BrouwerLineCert,
    ExtensionChain,
    build_bidirectional,
    build_chain,
    chain_union_free,
    clip_polyline_to_window,
    synth_brouwer_line,
    verify_brouwer_line,
)
from .critical import CriticalDisc, critical_disc
from .errors import (
    AmbiguousTrend,
    ChainStall,
    DeadEnd,
    DeltaCollapse,
    EmptyLevel,
    SeparationFailure,
    StallDiagnostics,
    SurgeryStall,
)
from .geometry import (
    Polyline,
    Region,
    SideOracle,
    half_region,
    side_oracle_for_map,
    union_frontier,
    window_polygon,
)
from .maps import PlaneMap, Rect

RECUR_TOL = 1e-6


# ---------------------------------------------------------------------------
# recurrence detection
# ---------------------------------------------------------------------------


def find_recurrence(
    chain: ExtensionChain,
    lattice: str,
    tol: float = RECUR_TOL,
) -> Optional[Tuple[int, int, Tuple[int, int]]]:
    """First pair (i, j, (m, n)) with center_j = center_i + (m, n) on the deck
    lattice and matching radii; lattice "annulus" restricts to n = 0.

    Each extension step contributes up to a bisection width of positional
    error, so the matching tolerance grows linearly with the subchain length.
    """
    c = chain.centers()
    r = chain.radii()
    for j in range(1, len(c)):
        for i in range(j):
            rtol = 4.0 * tol * (j - i + 1)
            d = c[j] - c[i]
            m, n = round(d[0]), round(d[1])
            if lattice == "annulus" and n != 0:
                continue
            if (m, n) == (0, 0):
                continue
            if (
                abs(d[0] - m) <= rtol
                and abs(d[1] - n) <= rtol
                and abs(r[j] - r[i]) <= rtol
            ):
                return i, j, (int(m), int(n))
    return None


# ---------------------------------------------------------------------------
# periodic lines and essential curves
# ---------------------------------------------------------------------------


@dataclass
class PeriodicLine:
    """A deck-periodic free line: one period of vertices plus its period vector."""

    period_vertices: np.ndarray  # vertices of one period; last + v = first of next
    period: Tuple[int, int]
    clipped: Polyline  # representative clipped to the window
    free_margin: float
    simple_in_quotient: bool

    @property
    def primitive_class(self) -> Tuple[int, int]:
        g = math.gcd(abs(self.period[0]), abs(self.period[1]))
        return (self.period[0] // g, self.period[1] // g)

    @property
    def multiplicity(self) -> int:
        return math.gcd(abs(self.period[0]), abs(self.period[1]))

    def to_dict(self):
        return {
            "period_vertices": self.period_vertices.tolist(),
            "period": list(self.period),
            "clipped_vertices": self.clipped.vertices.tolist(),
            "free_margin": self.free_margin,
            "simple_in_quotient": self.simple_in_quotient,
        }

    @staticmethod
    def from_dict(d) -> "PeriodicLine":
        return PeriodicLine(
            np.asarray(d["period_vertices"], dtype=float),
            tuple(d["period"]),
            Polyline(np.asarray(d["clipped_vertices"], dtype=float)),
            d["free_margin"],
            d["simple_in_quotient"],
        )


def _tile_periodic(verts: np.ndarray, v: np.ndarray, window: Rect) -> Polyline:
    """Tile one period across the window along the period vector."""
    span = max(window.width, window.height)
    step = float(np.linalg.norm(v))
    reps = int(math.ceil(2.0 * span / step)) + 2
    pieces = []
    for l in range(-reps, reps + 1):
        w = verts + l * v
        pieces.append(w if not pieces else w[1:])
    return Polyline(np.vstack(pieces))


def build_periodic_line(
    pmap: PlaneMap,
    chain: ExtensionChain,
    rec: Tuple[int, int, Tuple[int, int]],
    window: Rect,
    free_step: float = 2e-3,
) -> PeriodicLine:
    """Periodic free line through the recurrent subchain's centers."""
    i, j, (m, n) = rec
    verts = chain.centers()[i:j]  # one period; center_j = center_i + (m, n)
    v = np.array([float(m), float(n)])
    return verify_periodic_line(
        pmap, np.vstack([verts, verts[0] + v]), (m, n), window, free_step
    )


def verify_periodic_line(
    pmap: PlaneMap,
    period_vertices: np.ndarray,
    period: Tuple[int, int],
    window: Rect,
    free_step: float = 2e-3,
) -> PeriodicLine:
    """Verify a deck-periodic free line from its period data alone.

    Freeness is certified on the full tiled polyline by sampled distances with
    the Lipschitz correction; simplicity in the quotient requires the line to
    clear its own intermediate deck translates.
    """
    m, n = period
    v = np.array([float(m), float(n)])
    verts = np.asarray(period_vertices, dtype=float)[:-1]
    tiled = _tile_periodic(np.asarray(period_vertices, dtype=float), v, window)
    if not tiled.is_simple():
        raise SeparationFailure("periodic line self-intersects")

    bb = Rect(
        float(tiled.vertices[:, 0].min()) - 1e-6, float(tiled.vertices[:, 1].min()) - 1e-6,
        float(tiled.vertices[:, 0].max()) + 1e-6, float(tiled.vertices[:, 1].max()) + 1e-6,
    )
    lip = pmap.lipschitz_bound(bb)
    samples = tiled.resample(free_step)
    # restrict freeness sampling to a neighborhood of the window: the tiled
    # line is deck-periodic, so freeness there transports everywhere
    pad = window.pad(1.0)
    keep = pad.contains(samples)
    samples = samples[keep]
    img = pmap.eval(samples, check=False)
    margin = float(np.min(tiled.distance_to(img))) - 0.5 * lip * free_step
    if margin <= 0:
        raise SeparationFailure(f"periodic line freeness margin {margin:.3e} <= 0")

    g = math.gcd(abs(m), abs(n))
    simple_q = True
    for l in range(1, g):
        shifted = Polyline(tiled.vertices + (l / g) * v)
        if tiled.as_linestring().distance(shifted.as_linestring()) <= 1e-9:
            simple_q = False
            break
    clipped = clip_polyline_to_window(tiled, window)
    return PeriodicLine(np.vstack([verts, verts[0] + v]), (m, n), clipped, margin, simple_q)


# ---------------------------------------------------------------------------
# deck freeing (complement-frontier construction) and surgery
# ---------------------------------------------------------------------------


def _d_region(pmap: PlaneMap, line: Polyline, window: Rect) -> Region:
    """Half-region of the window on the D side of the line (side containing h(L))."""
    samples = line.resample(line.length() / 64.0)
    img = pmap.eval(samples, check=False)
    dists = line.distance_to(img)
    ref = img[int(np.argmax(dists))]
    return half_region(line, window, ref, side_tag="D")


def _line_translates_clear(line: Polyline, shift: np.ndarray, k_max: int,
                           clearance: float = 1e-9) -> bool:
    ls = line.as_linestring()
    for k in range(1, k_max + 1):
        if ls.distance(LineString(line.vertices + k * shift)) <= clearance:
            return False
    return True


def overlap_order(line: Polyline, shift: np.ndarray, k_max: int) -> int:
    """Largest i with L cap t(L) cap ... cap t^i(L) nonempty (0 = deck-free)."""
    ls = line.as_linestring()
    cur = ls
    order = 0
    for i in range(1, k_max + 1):
        cur = cur.intersection(LineString(line.vertices + i * shift).buffer(1e-9))
        if cur.is_empty:
            break
        order = i
    return order


def deck_free_line(
    pmap: PlaneMap,
    line: Polyline,
    window: Rect,
    shift: np.ndarray = np.array([1.0, 0.0]),
    max_rounds: int = 12,
    delta0: float = 0.05,
    history: Optional[List[int]] = None,
) -> Polyline:
    """Rework a Brouwer line into one disjoint from all its deck translates.

    Stage 1 takes the frontier of the complement of the union of the forward
    translates of the D-region, which confines the remaining interference to
    touching along the new line.  Stage 2 repeatedly reroutes a small
    neighborhood of the deepest overlap set into the G side; each round must
    strictly decrease the overlap order.
    """
    k_max = int(math.ceil(window.width / abs(shift[0] if shift[0] else shift[1]))) + 2
    if history is not None:
        history.append(overlap_order(line, shift, k_max))
    if _line_translates_clear(line, shift, k_max):
        return line

    # stage 1: complement frontier of the forward translate union
    wide = Rect(window.x0 - (k_max + 1) * abs(shift[0]), window.y0 - (k_max + 1) * abs(shift[1]),
                window.x1 + (k_max + 1) * abs(shift[0]), window.y1 + (k_max + 1) * abs(shift[1]))
    d0 = _d_region(pmap, line, wide)
    # decide which window edge survives in the complement: the one on the G side
    mid_y = 0.5 * (window.y0 + window.y1)
    probe_left = np.array([wide.x0 + 1e-3, mid_y])
    oracle = side_oracle_for_map(line, wide, pmap)
    try:
        left_is_g = oracle.side(probe_left) == SideOracle.G_SIDE
    except Exception:
        left_is_g = True
    edge = "left" if left_is_g else "right"
    regions = [
        Region(shapely.transform(d0.polygon, lambda a, kk=k: a + kk * shift), "D")
        for k in range(0, 2 * k_max + 1)
    ]
    cur = union_frontier(regions, wide, edge_mark=edge)
    cur = clip_polyline_to_window(cur, window)

    # stage 2: reroute deepest overlaps into the G side until deck-free
    for _ in range(max_rounds):
        n = overlap_order(cur, shift, k_max)
        if history is not None:
            history.append(n)
        if _line_translates_clear(cur, shift, k_max):
            return cur
        deep = cur.as_linestring()
        for i in range(1, n + 1):
            deep = deep.intersection(
                LineString(cur.vertices + i * shift).buffer(1e-9)
            )
        delta = delta0
        dreg = _d_region(pmap, cur, window)
        lip = pmap.lipschitz_bound(window)
        while delta > 1e-6:
            bumped = dreg.polygon.union(deep.buffer(delta, quad_segs=8))
            bumped = shapely.set_precision(bumped, 1e-9)
            new = _frontier_of_region(bumped, window, edge)
            if new is None:
                delta *= 0.5
                continue
            try:
                cert = verify_brouwer_line(pmap, new, window, n_sep_samples=256)
            except Exception:
                delta *= 0.5
                continue
            if cert.verified and overlap_order(new, shift, k_max) < n:
                cur = new
                break
            delta *= 0.5
        else:
            raise DeltaCollapse(f"reroute neighborhood collapsed at overlap order {n}")
    raise SurgeryStall("overlap order did not reach zero within the round budget")


def _frontier_of_region(poly: Polygon, window: Rect, edge: str) -> Optional[Polyline]:
    try:
        comp = window_polygon(window).difference(poly)
        comp = shapely.set_precision(comp, 1e-9)
        if comp.is_empty:
            return None
        regions = [Region(poly, "D")]
        return union_frontier(regions, window, edge_mark=edge)
    except Exception:
        return None


# ---------------------------------------------------------------------------
# band typing and König selection
# ---------------------------------------------------------------------------


class BandType(Enum):
    TO_NORTH = "to_north"
    FROM_NORTH = "from_north"
    TO_SOUTH = "to_south"
    FROM_SOUTH = "from_south"


def band_type(pmap: PlaneMap, chain: ExtensionChain, window: Rect) -> BandType:
    """Type of a confined escaping band: which end it accumulates on and
    whether the dynamics flows into or out of it.

    The vertical trend of the late chain centers fixes north/south; the side
    orientation (whether h pushes across the band toward the accumulating end)
    fixes to/from.
    """
    c = chain.centers()
    tail = c[-max(3, len(c) // 3):]
    dy = float(tail[-1, 1] - tail[0, 1])
    if abs(dy) < 1e-9:
        raise AmbiguousTrend("late chain centers show no vertical trend")
    north = dy > 0
    # flow direction: displacement of the tail centroid under h
    centroid = tail.mean(axis=0)
    disp = pmap.eval(centroid, check=False) - centroid
    into = bool(disp[1] > 0) == north
    if north:
        return BandType.TO_NORTH if into else BandType.FROM_NORTH
    return BandType.TO_SOUTH if into else BandType.FROM_SOUTH


def konig_select(
    levels: Sequence[Sequence],
    children: Callable[[int, object, object], bool],
) -> List:
    """Select one node per level forming a chain under the child relation.

    `children(level, parent, cand)` answers whether cand at level+1 extends
    parent.  Nodes that cannot be extended arbitrarily deep are pruned by
    reverse reachability; among survivors the lexicographically first child is
    taken at every level, which keeps the selection deterministic.
    """
    n = len(levels)
    if n == 0:
        return []
    for l, lv in enumerate(levels):
        if not lv:
            raise EmptyLevel(f"level {l} has no candidates")
    # viable[l][k]: node k at level l starts a chain reaching the last level
    viable: List[List[bool]] = [[True] * len(lv) for lv in levels]
    for l in range(n - 2, -1, -1):
        for k, node in enumerate(levels[l]):
            viable[l][k] = any(
                viable[l + 1][k2] and children(l, node, levels[l + 1][k2])
                for k2 in range(len(levels[l + 1]))
            )
    path = []
    prev = None
    for l in range(n):
        pick = None
        for k, node in enumerate(levels[l]):
            if not viable[l][k]:
                continue
            if prev is None or children(l - 1, prev, node):
                pick = node
                break
        if pick is None:
            raise DeadEnd(f"no viable candidate extends the chain at level {l}")
        path.append(pick)
        prev = pick
    return path


# ---------------------------------------------------------------------------
# outcomes
# ---------------------------------------------------------------------------


@dataclass
class AnnulusOutcome:
    kind: str  # "essential_curve" | "line_joining_ends" | "inconclusive"
    case: int  # 1, 2 or 3
    curve: Optional[PeriodicLine] = None
    line_cert: Optional[BrouwerLineCert] = None
    diagnostics: Dict = field(default_factory=dict)


@dataclass
class TorusOutcome:
    kind: str  # "essential_curve" | "inconclusive"
    curve: Optional[PeriodicLine] = None
    displacement_class: Optional[Tuple[int, int]] = None
    diagnostics: Dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# pipelines
# ---------------------------------------------------------------------------


def _seed_and_chain(
    pmap: PlaneMap, seed_center, steps: int, tol: float, window: Rect
) -> ExtensionChain:
    cd = critical_disc(pmap, seed_center, tol)
    return build_bidirectional(pmap, cd, steps, tol, stop_window=window)


def classify_annulus(
    pmap: PlaneMap,
    seed_center=(0.0, 0.0),
    steps: int = 40,
    tol: float = 1e-6,
    window: Optional[Rect] = None,
) -> AnnulusOutcome:
    """Free essential curve or line joining the ends for an annulus lift.

    The map must commute with t(x, y) = (x + 1, y).
    """
    if pmap.symmetry != "annulus":
        raise StallDiagnostics(f"map symmetry is {pmap.symmetry!r}, need 'annulus'")
    window = window or pmap.window
    try:
        chain = _seed_and_chain(pmap, seed_center, steps, tol, window)
    except ChainStall as e:
        return AnnulusOutcome("inconclusive", 3, diagnostics={"stall": str(e)})

    rec = find_recurrence(chain, "annulus", tol)
    if rec is not None:
        curve = build_periodic_line(pmap, chain, rec, window)
        return AnnulusOutcome("essential_curve", 1, curve=curve,
                              diagnostics={"recurrence": rec})

    c = chain.centers()
    spans_y = c[:, 1].min() <= window.y0 + tol and c[:, 1].max() >= window.y1 - tol
    if spans_y:
        cert = synth_brouwer_line(pmap, chain, window, tol)
        line = deck_free_line(pmap, cert.line, window)
        if line is not cert.line:
            cert = verify_brouwer_line(pmap, line, window)
        return AnnulusOutcome("line_joining_ends", 2, line_cert=cert)

    try:
        btype = band_type(pmap, chain, window)
        diag = {"band_type": btype.value,
                "y_range": (float(c[:, 1].min()), float(c[:, 1].max()))}
    except AmbiguousTrend as e:
        diag = {"band_type": None, "trend_error": str(e)}
    return AnnulusOutcome("inconclusive", 3, diagnostics=diag)


def classify_torus(
    pmap: PlaneMap,
    seed_center=(0.0, 0.0),
    steps: int = 40,
    tol: float = 1e-6,
    window: Optional[Rect] = None,
) -> TorusOutcome:
    """Free essential curve with its lift displacement class for a torus lift.

    The map must commute with both deck translations t(x, y) = (x + 1, y) and
    s(x, y) = (x, y + 1).  The chain of strict extensions recurs modulo the
    lattice, and the recurrent subchain closes up into a periodic free line
    whose period vector is the displacement class of the essential curve.
    """
    if pmap.symmetry != "torus":
        raise StallDiagnostics(f"map symmetry is {pmap.symmetry!r}, need 'torus'")
    window = window or pmap.window
    try:
        chain = _seed_and_chain(pmap, seed_center, steps, tol, window)
    except ChainStall as e:
        return TorusOutcome("inconclusive", diagnostics={"stall": str(e)})

    rec = find_recurrence(chain, "torus", tol)
    if rec is None:
        return TorusOutcome(
            "inconclusive",
            diagnostics={"reason": "no lattice recurrence in chain",
                         "centers": chain.centers().tolist()},
        )
    curve = build_periodic_line(pmap, chain, rec, window)
    return TorusOutcome("essential_curve", curve=curve,
                        displacement_class=curve.period,
                        diagnostics={"recurrence": rec})
