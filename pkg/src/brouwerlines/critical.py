"""Critical-disc machinery: radius field, boundary decomposition, strict extensions.

A disc is treated as critical when it is certified free at radius r - tol and
not certifiably free at r + tol; exact criticality is a measure-zero condition
the bisection brackets from both sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    ConditionFailed,
    CoverageStall,
    EmptyIntersection,
    FixedPointSuspected,
    LinkedArcs,
    NoGapFound,
    RadiusExceedsWindow,
    VerificationFailure,
)
from .geometry import (
    BittenDiscDomain,
    BittenDiscTarget,
    CircleArc,
    Disc,
    DiscDomain,
    DiscTarget,
    FreenessCert,
    TWO_PI,
    ccw_span,
    free_test_disc,
    minimal_covering_arc,
    norm_angle,
    separation_test,
)
from .maps import PlaneMap, Rect

CRIT_TOL = 1e-6          # default criticality tolerance (plane units)
BOUNDARY_SAMPLES = 2048  # boundary sampling for arc decomposition


# ---------------------------------------------------------------------------
# critical radius
# ---------------------------------------------------------------------------


def critical_radius_bracket(
    pmap: PlaneMap,
    x,
    tol: float = CRIT_TOL,
    bracket: Optional[Tuple[float, float]] = None,
    r_max: Optional[float] = None,
) -> Tuple[float, float]:
    """(r_free, r_not_free) bracket of the critical radius at x, width <= tol.

    r_free is certified free; r_not_free failed certification (witness or
    boundary-critical Unresolved).
    """
    x = np.asarray(x, dtype=float).reshape(2)
    disp = float(np.linalg.norm(pmap.eval(x) - x))
    if disp < tol:
        raise FixedPointSuspected(
            f"displacement {disp:.3e} below tolerance at ({x[0]}, {x[1]})",
            point=(float(x[0]), float(x[1])),
            displacement=disp,
        )
    cap = r_max if r_max is not None else max(pmap.window.width, pmap.window.height)

    box = Rect(x[0] - disp, x[1] - disp, x[0] + disp, x[1] + disp)
    lip = pmap.lipschitz_bound(box)
    lo = disp / (lip + 1.0) * 0.999   # certified free: dist(h(p), x) >= disp - L*r > r
    hi = disp                          # h(x) lies on the boundary: never certified free

    if bracket is not None:
        blo, bhi = bracket
        blo = max(blo, 0.5 * lo)
        bhi = min(max(bhi, blo + tol), cap)
        if free_test_disc(pmap, Disc(tuple(x), blo), tol=_inner_tol(tol, lip)).is_free:
            lo = max(lo, blo)
            res = free_test_disc(pmap, Disc(tuple(x), bhi), tol=_inner_tol(tol, lip))
            if res.verdict == "not_free" or (res.verdict == "unresolved" and res.reason == "tolerance"):
                hi = bhi

    if lo > cap:
        raise RadiusExceedsWindow(f"free radius at ({x[0]}, {x[1]}) exceeds cap {cap}")
    hi = min(hi, max(cap, lo + tol))

    inner = _inner_tol(tol, lip)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        res = free_test_disc(pmap, Disc(tuple(x), mid), tol=inner)
        if res.is_free:
            lo = mid
        else:
            if res.verdict == "unresolved" and res.reason == "cell-budget":
                raise VerificationFailure(
                    f"freeness test cell budget exhausted at ({x[0]:.4g}, {x[1]:.4g}) r={mid:.4g}"
                )
            hi = mid
    if lo > cap:
        raise RadiusExceedsWindow(f"critical radius at ({x[0]}, {x[1]}) exceeds cap {cap}")
    return lo, hi


def _inner_tol(tol: float, lip: float) -> float:
    return max(1e-10, 0.02 * tol / lip)


def critical_radius(pmap: PlaneMap, x, tol: float = CRIT_TOL, **kw) -> float:
    """Radius of the euclidean critical disc centered at x, to within tol."""
    lo, hi = critical_radius_bracket(pmap, x, tol, **kw)
    return 0.5 * (lo + hi)


def radius_field(
    pmap: PlaneMap, rect: Rect, spacing: float, tol: float = CRIT_TOL
) -> Tuple[np.ndarray, np.ndarray]:
    """Critical radius on a grid; returns (points (n,2), radii (n,)) row-major.

    Uses the 1-Lipschitz property of the field to seed each node's bisection
    bracket from its left neighbor.
    """
    xs = np.arange(rect.x0, rect.x1 + 0.5 * spacing, spacing)
    ys = np.arange(rect.y0, rect.y1 + 0.5 * spacing, spacing)
    pts = []
    radii = []
    for y in ys:
        prev = None
        for x in xs:
            hint = None
            if prev is not None:
                hint = (prev - spacing - 2 * tol, prev + spacing + 2 * tol)
            lo, hi = critical_radius_bracket(pmap, (x, y), tol, bracket=hint)
            prev = 0.5 * (lo + hi)
            pts.append((x, y))
            radii.append(prev)
    return np.asarray(pts), np.asarray(radii)


# ---------------------------------------------------------------------------
# boundary decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CriticalDisc:
    """Euclidean critical disc with its boundary decomposition.

    lam covers the boundary points mapping into the disc, mu those whose
    preimage lies in the disc; alpha_high / alpha_low are the two translation
    arcs (oriented from their lam endpoint to their mu endpoint; the disc sits
    on the right of the high arc, on the left of the low one).
    """

    disc: Disc
    lam: CircleArc
    mu: CircleArc
    alpha_high: CircleArc
    alpha_low: CircleArc
    epsilon: float
    contacts_degenerate: bool
    r_bracket: Tuple[float, float]

    @property
    def center(self) -> np.ndarray:
        return self.disc.c

    @property
    def radius(self) -> float:
        return self.disc.radius

    def arc(self, side: str) -> CircleArc:
        return self.alpha_high if side == "high" else self.alpha_low

    def bite_discs(self, variant: str) -> List[Disc]:
        """Bites removed for the derived variant: discs of radius epsilon at the
        endpoints of the opposite translation arc."""
        opp = self.alpha_low if variant == "high" else self.alpha_high
        return [
            Disc(tuple(opp.start_point), self.epsilon),
            Disc(tuple(opp.end_point), self.epsilon),
        ]


@dataclass(frozen=True)
class GenDisc:
    """Generalized critical disc: the full euclidean disc or a derived variant.

    Derived variants remove the two epsilon-bites at the endpoints of the
    opposite translation arc; center, radius, and translation arcs are those
    of the underlying disc.
    """

    underlying: CriticalDisc
    variant: str = "full"  # "full" | "high" | "low"

    @property
    def disc(self) -> Disc:
        return self.underlying.disc

    @property
    def center(self) -> np.ndarray:
        return self.underlying.center

    @property
    def radius(self) -> float:
        return self.underlying.radius

    def bites(self) -> List[Disc]:
        if self.variant == "full":
            return []
        return self.underlying.bite_discs(self.variant)

    def domain(self):
        if self.variant == "full":
            return DiscDomain(self.disc)
        return BittenDiscDomain(self.disc, self.bites())

    def target(self):
        if self.variant == "full":
            return DiscTarget(self.disc)
        return BittenDiscTarget(self.disc, self.bites())

    def contains(self, pts) -> np.ndarray:
        return self.domain().contains(pts)

    def area_mc(self, n: int = 20000, rng=None) -> float:
        """Monte-Carlo area estimate (exact pi*r^2 when full)."""
        if self.variant == "full":
            return self.disc.area()
        rng = rng or np.random.default_rng(12345)
        r = self.radius
        pts = self.center + rng.uniform(-r, r, size=(n, 2))
        in_disc = self.disc.contains(pts)
        hit = self.contains(pts)
        return 4.0 * r * r * float(np.count_nonzero(hit)) / n

    def polygon(self, k: int = 64):
        poly = self.disc.polygon(k)
        for b in self.bites():
            poly = poly.difference(b.polygon(k))
        return poly


def decompose_boundary(
    pmap: PlaneMap,
    disc: Disc,
    tol: float = CRIT_TOL,
    r_bracket: Optional[Tuple[float, float]] = None,
    n_samples: int = BOUNDARY_SAMPLES,
) -> CriticalDisc:
    """Decompose the boundary of a (numerically) critical disc into lam, mu,
    and the two translation arcs.

    Contact hit-sets are located by dense boundary sampling relative to the
    closest approach, then dilated by the sampling step so the translation
    arcs stay certified free.
    """
    c, r = disc.c, disc.radius
    step = TWO_PI / n_samples
    th = np.arange(n_samples) * step
    pts = c + r * np.column_stack([np.cos(th), np.sin(th)])

    d_in = np.linalg.norm(pmap.eval(pts, check=False) - c, axis=1) - r
    d_out = np.linalg.norm(pmap.eval_inverse(pts, check=False) - c, axis=1) - r

    if min(d_in.min(), d_out.min()) > 64 * tol:
        raise EmptyIntersection(
            f"disc at {tuple(c)} r={r} still clear of its image by "
            f"{min(d_in.min(), d_out.min()):.2e}: not critical at tolerance {tol}"
        )

    lam_lo, lam_hi = _hit_arc(th, d_in, step, tol)
    mu_lo, mu_hi = _hit_arc(th, d_out, step, tol)

    lam = CircleArc(disc, lam_lo, lam_hi)
    mu = CircleArc(disc, mu_lo, mu_hi)
    if _arcs_overlap(lam, mu):
        raise LinkedArcs(
            "boundary hit-sets overlap/interleave: the map cannot be fixed point free here"
        )

    # low arc: CCW from the end of lam to the start of mu (disc on the left);
    # high arc: CCW span from the end of mu to the start of lam, traversed CW
    # from its lam endpoint (disc on the right).
    alpha_low = CircleArc(disc, lam_hi, mu_lo, orientation="ccw")
    alpha_high = CircleArc(disc, mu_hi, lam_lo, orientation="cw")

    degenerate = max(lam.span, mu.span) <= 8 * step
    lengths = [alpha_high.length(), alpha_low.length()]
    if not degenerate:
        lengths += [lam.length(), mu.length()]
    eps = min(0.125 * min(lengths), (math.pi / 16.0) * r)
    bracket = r_bracket if r_bracket is not None else (r - tol, r + tol)
    return CriticalDisc(disc, lam, mu, alpha_high, alpha_low, eps, degenerate, bracket)


def _hit_arc(th: np.ndarray, d: np.ndarray, step: float, tol: float) -> Tuple[float, float]:
    """Minimal CCW angle interval covering the near-contact set, dilated by 2 steps."""
    slack = max(8 * tol, 1e-9)
    marked = th[d <= d.min() + slack]
    lo, hi = minimal_covering_arc(marked)
    return norm_angle(lo - 2 * step), norm_angle(hi + 2 * step)


def _arcs_overlap(a: CircleArc, b: CircleArc) -> bool:
    for probe in (b.theta_start, b.theta_end, b.midpoint_angle):
        if a.contains_angle(probe):
            return True
    for probe in (a.theta_start, a.theta_end, a.midpoint_angle):
        if b.contains_angle(probe):
            return True
    return False


def critical_disc(
    pmap: PlaneMap,
    x,
    tol: float = CRIT_TOL,
    bracket: Optional[Tuple[float, float]] = None,
    n_samples: int = BOUNDARY_SAMPLES,
) -> CriticalDisc:
    """Critical disc centered at x: radius bisection plus boundary decomposition.

    The stored radius is the certified-free side of the bracket so that the
    closed disc keeps a strictly positive freeness margin.
    """
    x = np.asarray(x, dtype=float).reshape(2)
    lo, hi = critical_radius_bracket(pmap, x, tol, bracket=bracket)
    return decompose_boundary(pmap, Disc((float(x[0]), float(x[1])), lo), tol,
                              r_bracket=(lo, hi), n_samples=n_samples)


# ---------------------------------------------------------------------------
# strict extensions
# ---------------------------------------------------------------------------


@dataclass
class ExtensionCert:
    """Certificate that `ext` is a (strict) extension of `base` on `side`.

    checks holds the named separation certificates; condition 2 is recorded as
    a margin over the complementary boundary arc.
    """

    base: CriticalDisc
    ext: GenDisc
    side: str
    strict: bool
    checks: List[FreenessCert]
    exceptional: bool = False

    def min_margin(self) -> float:
        return min(c.margin for c in self.checks if c.is_free)


def _arc_clearance(ext: GenDisc, base: CriticalDisc, side: str, n: int = 4096) -> Tuple[float, Optional[np.ndarray]]:
    """Certified clearance of ext from the boundary of base outside int(alpha).

    Returns (margin, witness); margin > 0 certifies ext cap boundary(base)
    inside int(alpha).  The complementary arc is 1-Lipschitz in arclength, so
    sampling at step sigma and requiring distance > r_ext + sigma/2 certifies.
    """
    alpha = base.arc(side)
    comp = CircleArc(base.disc, alpha.theta_end, alpha.theta_start)  # CCW complement
    if comp.span <= 0:
        return math.inf, None
    sigma = base.radius * comp.span / n
    q = comp.sample_points(n)
    sep = ext.target().sep_low(q)
    margin = float(sep.min()) - 0.5 * sigma
    if margin <= 0:
        return margin, q[int(np.argmin(sep))]
    return margin, None


def verify_extension(
    pmap: PlaneMap, base: CriticalDisc, ext: GenDisc, side: str, tol: float = CRIT_TOL
) -> ExtensionCert:
    """Re-verify the three strict-extension conditions from scratch."""
    checks: List[FreenessCert] = []

    # condition 1: ext touches the translation arc of base (its center sits on it)
    alpha = base.arc(side)
    center_gap = float(np.abs(np.linalg.norm(ext.center - base.center) - base.radius))
    on_arc = bool(alpha.contains_angle(math.atan2(*(ext.center - base.center)[::-1])))
    checks.append(FreenessCert("free" if (on_arc and center_gap < 1e-6) else "not_free",
                               margin=max(1e-12, 1e-6 - center_gap), name="cond1:center-on-arc"))

    # condition 2: ext meets the base boundary only inside int(alpha)
    margin2, wit = _arc_clearance(ext, base, side)
    checks.append(FreenessCert("free" if margin2 > 0 else "not_free", margin=max(margin2, 0.0),
                               witness=None if wit is None else (float(wit[0]), float(wit[1])),
                               name="cond2:boundary-clearance"))

    # condition 3: ext misses h(base) and h^-1(base)
    dom = DiscDomain(base.disc)
    tgt = ext.target()
    checks.append(separation_test(pmap, dom, tgt, power=1, tol=tol, name="cond3:h(D)-disjoint"))
    checks.append(separation_test(pmap, dom, tgt, power=-1, tol=tol, name="cond3:hinv(D)-disjoint"))

    ok = all(c.is_free for c in checks)
    return ExtensionCert(base, ext, side, strict=ok, checks=checks)


def find_strict_extension(
    pmap: PlaneMap,
    base: CriticalDisc,
    side: str,
    tol: float = CRIT_TOL,
    n_scan: int = 33,
    max_scan: int = 257,
) -> ExtensionCert:
    """Scan the translation arc for a center whose critical disc misses both
    h(base) and h^-1(base); fall back to the exceptional midpoint disc when
    the two obstruction sets meet.
    """
    alpha = base.arc(side)
    trim = min(0.05 * alpha.span, base.epsilon / base.radius)

    while True:
        th = alpha.sample_angles(n_scan, trim=trim)
        # order samples by traversal parameter (CCW within the stored span)
        order = np.argsort(norm_angle(th - alpha.theta_start))
        th = th[order]
        centers = base.disc.c + base.radius * np.column_stack([np.cos(th), np.sin(th)])

        in_plus = np.zeros(len(th), dtype=bool)
        in_minus = np.zeros(len(th), dtype=bool)
        radii = np.zeros(len(th))
        prev_r = base.radius
        step_d = base.radius * alpha.span / max(n_scan - 1, 1)
        for i, xc in enumerate(centers):
            lo, hi = critical_radius_bracket(
                pmap, xc, tol, bracket=(prev_r - step_d - 2 * tol, prev_r + step_d + 2 * tol)
            )
            radii[i] = lo
            prev_r = lo
            cand = DiscTarget(Disc((float(xc[0]), float(xc[1])), lo + 2 * tol))
            dom = DiscDomain(base.disc)
            rp = separation_test(pmap, dom, cand, power=1, tol=tol)
            rm = separation_test(pmap, dom, cand, power=-1, tol=tol)
            in_plus[i] = not rp.is_free
            in_minus[i] = not rm.is_free

        both = in_plus & in_minus
        if np.any(both):
            return _exceptional_extension(pmap, base, side, tol)

        blocked = in_plus | in_minus
        gap = _longest_run(~blocked)
        if gap is not None:
            i0, i1 = gap
            mid = centers[(i0 + i1) // 2] if (i1 - i0) % 2 == 0 else \
                0.5 * (centers[(i0 + i1) // 2] + centers[(i0 + i1) // 2 + 1])
            cd = critical_disc(pmap, mid, tol, bracket=(radii[(i0 + i1) // 2] - step_d, radii[(i0 + i1) // 2] + step_d))
            for variant in ("full", "high" if side == "high" else "low"):
                ext = GenDisc(cd, variant)
                cert = verify_extension(pmap, base, ext, side, tol)
                if cert.strict:
                    return cert
            raise ConditionFailed(
                "2/3", f"gap-midpoint disc at {tuple(mid)} failed strict conditions",
                witness=tuple(map(float, mid)),
            )
        if n_scan >= max_scan:
            raise NoGapFound(
                f"no free gap on the {side} arc of disc at {tuple(base.disc.center)} "
                f"after scanning {n_scan} samples"
            )
        n_scan = 2 * n_scan - 1


def _longest_run(mask: np.ndarray) -> Optional[Tuple[int, int]]:
    """Longest True run as (first, last) indices; ties break to the lower start."""
    best = None
    best_len = 0
    i = 0
    n = len(mask)
    while i < n:
        if mask[i]:
            j = i
            while j + 1 < n and mask[j + 1]:
                j += 1
            if j - i + 1 > best_len:
                best_len = j - i + 1
                best = (i, j)
            i = j + 1
        else:
            i += 1
    return best


def _exceptional_extension(pmap: PlaneMap, base: CriticalDisc, side: str, tol: float) -> ExtensionCert:
    """Obstruction sets meet: use the disc centered at the arc midpoint with the
    arc endpoints on its boundary, in its derived variant matching the side."""
    alpha = base.arc(side)
    center = alpha.point_at(alpha.midpoint_angle)
    cd = critical_disc(pmap, center, tol)
    ext = GenDisc(cd, "high" if side == "high" else "low")
    cert = verify_extension(pmap, base, ext, side, tol)
    cert.exceptional = True
    if not cert.strict:
        failing = [c.name for c in cert.checks if not c.is_free]
        raise ConditionFailed(",".join(failing), "exceptional midpoint disc failed strict conditions")
    return cert


# ---------------------------------------------------------------------------
# compactum cover (finite family of extension pairs)
# ---------------------------------------------------------------------------


@dataclass
class CompactumCover:
    nodes: List[np.ndarray]
    pairs: List[Tuple[ExtensionCert, ExtensionCert]]
    cell_assignment: Dict[Tuple[int, int], int]
    cell_spacing: float


def cover_compactum(
    pmap: PlaneMap, K: Rect, tol: float = CRIT_TOL, spacing: float = 0.25
) -> CompactumCover:
    """Finite family of (high, low) strict-extension pairs serving every cell of
    a grid over K; each pair serves a neighborhood sized from its freeness
    margins and the 1-Lipschitz radius field."""
    nodes: List[np.ndarray] = []
    pairs: List[Tuple[ExtensionCert, ExtensionCert]] = []
    reach: List[float] = []

    lip = pmap.lipschitz_bound(K.pad(1.0))
    xs = np.arange(K.x0 + spacing / 2, K.x1, spacing)
    ys = np.arange(K.y0 + spacing / 2, K.y1, spacing)
    assignment: Dict[Tuple[int, int], int] = {}
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            cell = np.array([x, y])
            owner = None
            for k, node in enumerate(nodes):
                if np.linalg.norm(cell - node) + spacing / math.sqrt(2.0) <= reach[k]:
                    owner = k
                    break
            if owner is None:
                cd = critical_disc(pmap, cell, tol)
                hi = find_strict_extension(pmap, cd, "high", tol)
                lo = find_strict_extension(pmap, cd, "low", tol)
                # reach comes from the geometric separation margins only; the
                # condition-1 positional check is not a distance budget
                sep_margins = [
                    c.margin for cert in (hi, lo) for c in cert.checks
                    if c.is_free and not c.name.startswith("cond1")
                ]
                rho = min(sep_margins) / (2.0 * (lip + 1.0))
                if rho < tol:
                    raise CoverageStall(
                        f"margin collapse at {tuple(cell)}: neighborhood radius {rho:.2e}"
                    )
                nodes.append(cell)
                pairs.append((hi, lo))
                reach.append(max(rho, spacing / math.sqrt(2.0) + 1e-12))
                owner = len(nodes) - 1
            assignment[(ix, iy)] = owner
    return CompactumCover(nodes, pairs, assignment, spacing)
