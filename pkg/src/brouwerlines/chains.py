"""Extension chains, Brouwer-line synthesis and verification, Franks chains,
and translation-arc trajectories."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .critical import CriticalDisc, ExtensionCert, GenDisc, critical_disc, find_strict_extension
from .errors import (
    ChainStall,
    ClaimUnverified,
    EscapeViolation,
    SegmentEscapesUnion,
    SeparationFailure,
    SimplicityFailure,
    StallDiagnostics,
)
from .geometry import (
    Disc,
    DiscDomain,
    DiscTarget,
    FreenessCert,
    Polyline,
    SideOracle,
    UnionDomain,
    UnionTarget,
    free_test_disc,
    segment_in_disc_union,
    separation_test,
    side_oracle_for_map,
)
from .maps import PlaneMap, Rect


# ---------------------------------------------------------------------------
# chains
# ---------------------------------------------------------------------------


@dataclass
class ExtensionChain:
    """Ordered generalized critical discs, each a strict extension of its
    predecessor on the chain side.  For bidirectional chains the indices run
    low-side-first and seed_index marks the seed disc."""

    discs: List[GenDisc]
    certs: List[ExtensionCert]
    side: str  # "high" | "low" | "bidirectional"
    seed_index: int = 0

    def __len__(self) -> int:
        return len(self.discs)

    def centers(self) -> np.ndarray:
        return np.array([g.center for g in self.discs])

    def radii(self) -> np.ndarray:
        return np.array([g.radius for g in self.discs])

    def underlying_discs(self) -> List[Disc]:
        return [g.disc for g in self.discs]

    def subchain(self, i: int, j: int) -> "ExtensionChain":
        return ExtensionChain(self.discs[i : j + 1], self.certs[i:j], self.side,
                              max(0, self.seed_index - i))


def build_chain(
    pmap: PlaneMap, seed: CriticalDisc, side: str, steps: int, tol: float = 1e-6,
    stop_window: Optional[Rect] = None,
) -> ExtensionChain:
    """Iterate strict extensions from the seed on one side.

    With `stop_window` the chain stops early once a disc center leaves the
    rect (the intended use: stop as soon as the chain spans the window, since
    radii and Lipschitz bounds may blow up far outside it).
    """
    discs: List[GenDisc] = [GenDisc(seed, "full")]
    certs: List[ExtensionCert] = []
    cur = seed
    for k in range(steps):
        if stop_window is not None and not stop_window.contains(cur.center.reshape(1, 2))[0]:
            break
        try:
            cert = find_strict_extension(pmap, cur, side, tol)
        except Exception as e:
            raise ChainStall(
                f"extension step {k + 1}/{steps} failed: {e}",
                partial=ExtensionChain(discs, certs, side),
            ) from e
        discs.append(cert.ext)
        certs.append(cert)
        cur = cert.ext.underlying
    return ExtensionChain(discs, certs, side)


def build_bidirectional(
    pmap: PlaneMap, seed: CriticalDisc, steps: int, tol: float = 1e-6,
    steps_low: Optional[int] = None, stop_window: Optional[Rect] = None,
) -> ExtensionChain:
    """High chain forward from the seed plus a low chain backward; indices are
    ordered so each disc is a high extension of its predecessor."""
    hi = build_chain(pmap, seed, "high", steps, tol, stop_window=stop_window)
    lo = build_chain(pmap, seed, "low", steps if steps_low is None else steps_low, tol,
                     stop_window=stop_window)
    discs = list(reversed(lo.discs[1:])) + hi.discs
    certs = list(reversed(lo.certs)) + hi.certs
    return ExtensionChain(discs, certs, "bidirectional", seed_index=len(lo.discs) - 1)


def chain_union_free(pmap: PlaneMap, chain: ExtensionChain, tol: float = 1e-9) -> FreenessCert:
    """Certify that the union of the chain's generalized discs is free.

    Adjacent discs sit within a bisection-width of mutual contact with their
    images, so the cell floor must be finer than the criticality tolerance;
    margins are tiny but certified positive.
    """
    dom = UnionDomain([g.domain() for g in chain.discs])
    tgt = UnionTarget([g.target() for g in chain.discs])
    return separation_test(pmap, dom, tgt, power=1, tol=tol, name="chain-union-free")


def increments_pairwise_disjoint(chain: ExtensionChain, k: int = 64) -> bool:
    """Exact polygon check that the increments D_i \\ D_{i-1} are pairwise
    disjoint (on k-gon approximations snapped to the boolean grid)."""
    import shapely

    polys = [g.polygon(k) for g in chain.discs]
    incs = [polys[0]] + [polys[i].difference(polys[i - 1]) for i in range(1, len(polys))]
    incs = [shapely.set_precision(p, 1e-9) for p in incs]
    for i in range(len(incs)):
        for j in range(i + 1, len(incs)):
            inter = incs[i].intersection(incs[j])
            if inter.area > 1e-9:
                return False
    return True


# ---------------------------------------------------------------------------
# escape reports
# ---------------------------------------------------------------------------


@dataclass
class EscapeReport:
    last_touch_index: int
    tail_clear_from: int
    area_ratios: List[float]

    @property
    def escaped(self) -> bool:
        return self.tail_clear_from < math.inf


def _disc_meets_rect(d: Disc, K: Rect) -> bool:
    cx = min(max(d.c[0], K.x0), K.x1)
    cy = min(max(d.c[1], K.y0), K.y1)
    return math.hypot(d.c[0] - cx, d.c[1] - cy) <= d.radius


def _lens_area(d1: Disc, d2: Disc) -> float:
    """Exact area of the intersection of two euclidean discs."""
    r1, r2 = d1.radius, d2.radius
    d = float(np.linalg.norm(d1.c - d2.c))
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        r = min(r1, r2)
        return math.pi * r * r
    a1 = math.acos((d * d + r1 * r1 - r2 * r2) / (2 * d * r1))
    a2 = math.acos((d * d + r2 * r2 - r1 * r1) / (2 * d * r2))
    return (
        r1 * r1 * (a1 - math.sin(2 * a1) / 2) + r2 * r2 * (a2 - math.sin(2 * a2) / 2)
    )


def increment_area_ratio(prev: GenDisc, cur: GenDisc, mc_n: int = 40000) -> float:
    """area(cur \\ prev) / area(cur): exact lens for full variants, Monte Carlo
    through the polygon proxy otherwise."""
    if prev.variant == "full" and cur.variant == "full":
        a_cur = cur.disc.area()
        return (a_cur - _lens_area(cur.disc, prev.disc)) / a_cur
    pc = cur.polygon(128)
    pp = prev.polygon(128)
    return pc.difference(pp).area / pc.area


def check_escape(chain: ExtensionChain, K: Rect) -> EscapeReport:
    """Last index whose disc meets K, with a tail-clear verification and the
    per-step increment area ratios."""
    touches = [i for i, g in enumerate(chain.discs) if _disc_meets_rect(g.disc, K)]
    last = touches[-1] if touches else -1
    if touches and touches != list(range(touches[0], last + 1)):
        gap = next(i for i in range(touches[0], last) if i not in touches)
        raise EscapeViolation(f"chain re-enters K after clearing it at index {gap}")
    tail_from = last + 1
    ratios = [
        increment_area_ratio(chain.discs[i - 1], chain.discs[i])
        for i in range(1, len(chain.discs))
    ]
    return EscapeReport(last, tail_from, ratios)


# ---------------------------------------------------------------------------
# Brouwer lines
# ---------------------------------------------------------------------------


@dataclass
class BrouwerLineCert:
    """Self-contained verification record for a proper free separating line."""

    line: Polyline
    window: Rect
    free_margin: float
    free_samples: int
    sep_samples: int
    sep_d_ok: int
    sep_g_ok: int
    containment: Optional[bool] = None
    ends: Tuple[str, str] = ("", "")

    @property
    def verified(self) -> bool:
        return (
            self.free_margin > 0
            and self.sep_samples > 0
            and self.sep_d_ok == self.sep_samples
            and self.sep_g_ok == self.sep_samples
        )

    def to_dict(self):
        return {
            "vertices": self.line.vertices.tolist(),
            "window": [self.window.x0, self.window.y0, self.window.x1, self.window.y1],
            "free_margin": self.free_margin,
            "free_samples": self.free_samples,
            "sep_samples": self.sep_samples,
            "sep_d_ok": self.sep_d_ok,
            "sep_g_ok": self.sep_g_ok,
            "containment": self.containment,
            "ends": list(self.ends),
        }

    @staticmethod
    def from_dict(d) -> "BrouwerLineCert":
        return BrouwerLineCert(
            Polyline(np.asarray(d["vertices"], dtype=float)),
            Rect(*d["window"]),
            d["free_margin"],
            d["free_samples"],
            d["sep_samples"],
            d["sep_d_ok"],
            d["sep_g_ok"],
            d.get("containment"),
            tuple(d.get("ends", ("", ""))),
        )


def _edge_descriptor(p: np.ndarray, w: Rect, tol: float) -> str:
    if abs(p[0] - w.x0) <= tol:
        return "left"
    if abs(p[0] - w.x1) <= tol:
        return "right"
    if abs(p[1] - w.y0) <= tol:
        return "bottom"
    if abs(p[1] - w.y1) <= tol:
        return "top"
    return "interior"


def clip_polyline_to_window(poly: Polyline, window: Rect) -> Polyline:
    """Longest piece of the polyline inside the window, ends on the boundary."""
    import shapely
    from shapely.geometry import MultiLineString

    from .geometry import window_polygon

    inter = poly.as_linestring().intersection(window_polygon(window))
    if inter.is_empty:
        raise StallDiagnostics("polyline misses the window")
    if isinstance(inter, MultiLineString):
        inter = max(inter.geoms, key=lambda g: g.length)
    verts = np.asarray(inter.coords)
    keep = np.concatenate([[True], np.linalg.norm(np.diff(verts, axis=0), axis=1) > 1e-12])
    return Polyline(verts[keep])


def verify_brouwer_line(
    pmap: PlaneMap,
    line: Polyline,
    window: Rect,
    n_sep_samples: int = 1000,
    free_step: float = 2e-3,
    boundary_tol: float = 1e-6,
) -> BrouwerLineCert:
    """Verify the Brouwer-line contract of a polyline from scratch.

    Freeness: the sampled distance from h(L) to L minus the Lipschitz sampling
    correction must stay positive.  Separation: h(L) samples land on the D
    side, h^-1(L) samples on the G side, by crossing parity.
    """
    if not line.is_simple():
        raise SimplicityFailure("candidate line self-intersects")
    v0, v1 = line.vertices[0], line.vertices[-1]
    e0 = _edge_descriptor(v0, window, boundary_tol)
    e1 = _edge_descriptor(v1, window, boundary_tol)
    if "interior" in (e0, e1):
        raise StallDiagnostics(
            f"line ends do not reach the window boundary (ends {e0}/{e1})",
            diagnostics={"ends": (e0, e1)},
        )

    bb = Rect(
        float(line.vertices[:, 0].min()) - 1e-9, float(line.vertices[:, 1].min()) - 1e-9,
        float(line.vertices[:, 0].max()) + 1e-9, float(line.vertices[:, 1].max()) + 1e-9,
    )
    lip = pmap.lipschitz_bound(bb)
    samples = line.resample(free_step)
    img = pmap.eval(samples, check=False)
    dist = line.distance_to(img)
    margin = float(dist.min()) - 0.5 * lip * free_step
    if margin <= 0:
        k = int(np.argmin(dist))
        raise SeparationFailure(
            f"freeness margin non-positive ({margin:.3e})",
            witness=tuple(map(float, samples[k])),
        )

    oracle = side_oracle_for_map(line, window, pmap)
    sep_pts = line.resample(line.length() / max(n_sep_samples - 1, 1))
    fwd = pmap.eval(sep_pts, check=False)
    bwd = pmap.eval_inverse(sep_pts, check=False)
    d_ok = sum(1 for p in fwd if oracle.side(p) == SideOracle.D_SIDE)
    g_ok = sum(1 for p in bwd if oracle.side(p) == SideOracle.G_SIDE)
    return BrouwerLineCert(
        line, window, margin, len(samples), len(sep_pts), d_ok, g_ok, ends=(e0, e1)
    )


def synth_brouwer_line(
    pmap: PlaneMap,
    chain: ExtensionChain,
    window: Rect,
    tol: float = 1e-6,
    n_sep_samples: int = 1000,
) -> BrouwerLineCert:
    """Polyline through the chain's underlying centers, verified as a Brouwer line.

    Each segment joins a disc center to a point of its own boundary, so it
    stays inside that disc; the containment check is still run explicitly and
    a failing segment is rerouted through the midpoint of the shared arc.
    """
    centers = chain.centers()
    discs = chain.underlying_discs()
    verts = [centers[0]]
    for i in range(len(centers) - 1):
        seg = (centers[i], centers[i + 1])
        if not segment_in_disc_union(np.array(seg), [discs[i], discs[i + 1]], step=tol * 100):
            mid = 0.5 * (centers[i] + centers[i + 1])
            # reroute through the contact point projected to the shared circle
            d = discs[i]
            u = (mid - d.c) / max(np.linalg.norm(mid - d.c), 1e-30)
            reroute = d.c + d.radius * 0.999 * u
            if not (
                segment_in_disc_union(np.array([centers[i], reroute]), [discs[i]], step=tol * 100)
                and segment_in_disc_union(np.array([reroute, centers[i + 1]]), [discs[i + 1]], step=tol * 100)
            ):
                raise SegmentEscapesUnion(f"segment {i} leaves the disc union")
            verts.append(reroute)
        verts.append(centers[i + 1])
    raw = Polyline(np.array(verts))

    ends_out = (
        not window.contains(raw.vertices[:1])[0] or not window.contains(raw.vertices[-1:])[0]
    )
    spans = (
        raw.vertices[:, 1].min() <= window.y0 or raw.vertices[:, 1].max() >= window.y1
        or raw.vertices[:, 0].min() <= window.x0 or raw.vertices[:, 0].max() >= window.x1
    )
    if not (ends_out or spans):
        raise StallDiagnostics(
            "chain does not span the window; increase steps",
            diagnostics={"y_range": (float(raw.vertices[:, 1].min()), float(raw.vertices[:, 1].max()))},
        )
    line = clip_polyline_to_window(raw, window)
    cert = verify_brouwer_line(pmap, line, window, n_sep_samples=n_sep_samples)
    cert.containment = True
    return cert


# ---------------------------------------------------------------------------
# Franks chains (negative control)
# ---------------------------------------------------------------------------


@dataclass
class FranksReport:
    fixed_point_forced: bool
    disc_certs: List[FreenessCert]
    claim_witnesses: List[Tuple[float, float]]


def franks_validate(
    pmap: PlaneMap,
    discs: Sequence[Disc],
    orbit_hits: Sequence[Tuple[int, int]],
    tol: float = 1e-6,
) -> FranksReport:
    """Verify a cyclic chain of pairwise disjoint free discs with forward-orbit
    links h^{n_i}(B_i) cap B_{i+1} != empty: a verified chain forces a fixed
    point, so the map cannot be a Brouwer homeomorphism."""
    k = len(discs)
    for i in range(k):
        for j in range(i + 1, k):
            if np.linalg.norm(discs[i].c - discs[j].c) <= discs[i].radius + discs[j].radius:
                raise ClaimUnverified(i, f"discs {i} and {j} are not disjoint")
    disc_certs = []
    for i, d in enumerate(discs):
        cert = free_test_disc(pmap, d, tol)
        if not cert.is_free:
            raise ClaimUnverified(i, f"disc {i} is not free")
        disc_certs.append(cert)
    witnesses = []
    for i, n_i in orbit_hits:
        if n_i <= 0:
            raise ClaimUnverified(i, "orbit exponents must be positive")
        res = separation_test(
            pmap, DiscDomain(discs[i]), DiscTarget(discs[(i + 1) % k]), power=n_i, tol=tol
        )
        if res.verdict != "not_free":
            raise ClaimUnverified(i, f"h^{n_i}(B_{i}) does not meet B_{(i + 1) % k}")
        witnesses.append(res.witness)
    return FranksReport(True, disc_certs, witnesses)


# ---------------------------------------------------------------------------
# trajectories of translation arcs
# ---------------------------------------------------------------------------


@dataclass
class Trajectory:
    base_arc: Polyline
    iterates: List[Polyline]
    union: Polyline
    n: int


def trajectory(
    pmap: PlaneMap,
    cd: CriticalDisc,
    arc_side: str,
    n: int,
    arc_samples: int = 64,
) -> Trajectory:
    """Union of h^i(alpha) for |i| <= n, joined at the shared endpoint clusters."""
    alpha = cd.arc(arc_side)
    if alpha.orientation == "ccw":
        th = alpha.sample_angles(arc_samples)
    else:
        th = alpha.sample_angles(arc_samples)[::-1]
    base_pts = cd.disc.c + cd.radius * np.column_stack([np.cos(th), np.sin(th)])
    base = Polyline(base_pts)

    iterates = []
    verts: List[np.ndarray] = []
    for i in range(-n, n + 1):
        pts = pmap.eval_power(base_pts, i, check=False)
        iterates.append(Polyline(pts))
        verts.append(pts if not verts else pts[1:])
    union = Polyline(np.vstack(verts))
    if not union.is_simple():
        raise SimplicityFailure(
            "trajectory polyline self-intersects: tolerance failure in arc iterates"
        )
    return Trajectory(base, iterates, union, n)


def trajectory_probe_check(traj: Trajectory, probe: Disc, tol: float = 1e-9) -> bool:
    """For a probe disc meeting the base arc but clear of its first iterates,
    the truncated trajectory must meet the probe only along the base arc."""
    pts = traj.union.resample(probe.radius / 50.0)
    inside = probe.contains(pts)
    if not np.any(inside):
        return True
    return bool(np.all(traj.base_arc.distance_to(pts[inside]) <= 100 * tol + 1e-6))
