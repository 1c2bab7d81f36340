"""Analytic plane homeomorphisms with closed-form inverses and Lipschitz data.

Maps are given as composable specs (translations, shears, drifts, affine)
rather than sampled data: every certified predicate downstream needs a
derivative bound, which only a closed form can provide.  All evaluation is
vectorized over numpy arrays of shape (n, 2); the scalar entry points accept
plain pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import OutOfWindow, SymmetryViolation, UnboundedDerivative

TOL_INV = 1e-9
TOL_SYM = 1e-9

Pt = Tuple[float, float]


def as_points(p) -> np.ndarray:
    """Coerce a pair or an (n, 2) array-like to a float (n, 2) array."""
    a = np.asarray(p, dtype=float)
    if a.ndim == 1:
        a = a.reshape(1, 2)
    if a.shape[-1] != 2:
        raise ValueError(f"expected points of shape (n, 2), got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite point coordinates")
    return a


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle [x0, x1] x [y0, y1]."""

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError(f"degenerate rectangle {self}")

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    def pad(self, d: float) -> "Rect":
        return Rect(self.x0 - d, self.y0 - d, self.x1 + d, self.y1 + d)

    def contains(self, pts: np.ndarray, slack: float = 0.0) -> np.ndarray:
        pts = as_points(pts)
        return (
            (pts[:, 0] >= self.x0 - slack)
            & (pts[:, 0] <= self.x1 + slack)
            & (pts[:, 1] >= self.y0 - slack)
            & (pts[:, 1] <= self.y1 + slack)
        )

    def corners(self) -> np.ndarray:
        return np.array(
            [[self.x0, self.y0], [self.x1, self.y0], [self.x1, self.y1], [self.x0, self.y1]]
        )

    def sample_grid(self, spacing: float) -> np.ndarray:
        xs = np.arange(self.x0, self.x1 + spacing * 0.5, spacing)
        ys = np.arange(self.y0, self.y1 + spacing * 0.5, spacing)
        gx, gy = np.meshgrid(xs, ys)
        return np.column_stack([gx.ravel(), gy.ravel()])


# ---------------------------------------------------------------------------
# one-dimensional function specs (used by shear / drift map kinds)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Func1D:
    """Closed-form scalar function with a derivative bound on intervals.

    kinds:
      const:  f(u) = c                      params (c,)
      affine: f(u) = a*u + b                params (a, b)
      exp:    f(u) = a * exp(b*u) + c       params (a, b, c)
      sin:    f(u) = a * sin(b*u + c) + d   params (a, b, c, d)
    """

    kind: str
    params: Tuple[float, ...]

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        p = self.params
        if self.kind == "const":
            return np.full_like(u, p[0])
        if self.kind == "affine":
            return p[0] * u + p[1]
        if self.kind == "exp":
            return p[0] * np.exp(p[1] * u) + p[2]
        if self.kind == "sin":
            return p[0] * np.sin(p[1] * u + p[2]) + p[3]
        raise ValueError(f"unknown Func1D kind {self.kind!r}")

    def range_bound(self, lo: float, hi: float) -> Tuple[float, float]:
        """Enclosure of f([lo, hi])."""
        p = self.params
        if self.kind == "const":
            return p[0], p[0]
        if self.kind == "affine":
            vals = (p[0] * lo + p[1], p[0] * hi + p[1])
            return min(vals), max(vals)
        if self.kind == "exp":
            vals = (p[0] * math.exp(p[1] * lo) + p[2], p[0] * math.exp(p[1] * hi) + p[2])
            return min(vals), max(vals)
        if self.kind == "sin":
            return p[3] - abs(p[0]), p[3] + abs(p[0])
        raise ValueError(f"unknown Func1D kind {self.kind!r}")

    def deriv_bound(self, lo: float, hi: float) -> float:
        """sup |f'| on [lo, hi]."""
        p = self.params
        if self.kind == "const":
            return 0.0
        if self.kind == "affine":
            return abs(p[0])
        if self.kind == "exp":
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise UnboundedDerivative("exp derivative unbounded on infinite interval")
            m = max(p[1] * lo, p[1] * hi)
            return abs(p[0] * p[1]) * math.exp(m)
        if self.kind == "sin":
            return abs(p[0] * p[1])
        raise ValueError(f"unknown Func1D kind {self.kind!r}")

    def to_dict(self):
        return {"kind": self.kind, "params": list(self.params)}

    @staticmethod
    def from_dict(d) -> "Func1D":
        return Func1D(d["kind"], tuple(float(v) for v in d["params"]))


def const(c: float) -> Func1D:
    return Func1D("const", (float(c),))


def affine_fn(a: float, b: float = 0.0) -> Func1D:
    return Func1D("affine", (float(a), float(b)))


def exp_fn(scale: float = 1.0, rate: float = 1.0, offset: float = 0.0) -> Func1D:
    return Func1D("exp", (float(scale), float(rate), float(offset)))


def sin_fn(amp: float, freq: float = 1.0, phase: float = 0.0, offset: float = 0.0) -> Func1D:
    return Func1D("sin", (float(amp), float(freq), float(phase), float(offset)))


# ---------------------------------------------------------------------------
# map specs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MapSpec:
    """One invertible building block of a plane map.

    kinds:
      translation:      (x, y) -> (x + dx, y + dy)
      horizontal_shear: (x, y) -> (x + g(y), y)
      vertical_drift:   (x, y) -> (x, y + g(x))
      affine:           p -> A p + v   (A 2x2 with positive determinant)
      composite:        left-to-right composition of parts
    """

    kind: str
    dx: float = 0.0
    dy: float = 0.0
    g: Optional[Func1D] = None
    matrix: Optional[Tuple[Tuple[float, float], Tuple[float, float]]] = None
    parts: Tuple["MapSpec", ...] = ()

    def __post_init__(self):
        if self.kind == "affine":
            a = np.asarray(self.matrix, dtype=float)
            if np.linalg.det(a) <= 0:
                raise ValueError("affine map must be orientation preserving (det > 0)")
        elif self.kind in ("horizontal_shear", "vertical_drift"):
            if self.g is None:
                raise ValueError(f"{self.kind} requires a 1-d function spec")
        elif self.kind == "composite":
            if not self.parts:
                raise ValueError("composite requires at least one part")
        elif self.kind != "translation":
            raise ValueError(f"unknown map kind {self.kind!r}")

    def apply(self, pts: np.ndarray) -> np.ndarray:
        out = np.array(pts, dtype=float)
        if self.kind == "translation":
            out[:, 0] += self.dx
            out[:, 1] += self.dy
        elif self.kind == "horizontal_shear":
            out[:, 0] += self.g(out[:, 1])
        elif self.kind == "vertical_drift":
            out[:, 1] += self.g(out[:, 0])
        elif self.kind == "affine":
            a = np.asarray(self.matrix, dtype=float)
            out = out @ a.T
            out[:, 0] += self.dx
            out[:, 1] += self.dy
        else:
            for part in self.parts:
                out = part.apply(out)
        return out

    def apply_inverse(self, pts: np.ndarray) -> np.ndarray:
        out = np.array(pts, dtype=float)
        if self.kind == "translation":
            out[:, 0] -= self.dx
            out[:, 1] -= self.dy
        elif self.kind == "horizontal_shear":
            out[:, 0] -= self.g(out[:, 1])
        elif self.kind == "vertical_drift":
            out[:, 1] -= self.g(out[:, 0])
        elif self.kind == "affine":
            a = np.linalg.inv(np.asarray(self.matrix, dtype=float))
            out[:, 0] -= self.dx
            out[:, 1] -= self.dy
            out = out @ a.T
        else:
            for part in reversed(self.parts):
                out = part.apply_inverse(out)
        return out

    def image_bbox(self, rect: Rect, inverse: bool = False) -> Rect:
        """Exact axis-aligned enclosure of the image (or preimage) of rect."""
        if self.kind == "translation":
            s = -1.0 if inverse else 1.0
            return Rect(rect.x0 + s * self.dx, rect.y0 + s * self.dy,
                        rect.x1 + s * self.dx, rect.y1 + s * self.dy)
        if self.kind == "horizontal_shear":
            glo, ghi = self.g.range_bound(rect.y0, rect.y1)
            if inverse:
                return Rect(rect.x0 - ghi, rect.y0, rect.x1 - glo, rect.y1)
            return Rect(rect.x0 + glo, rect.y0, rect.x1 + ghi, rect.y1)
        if self.kind == "vertical_drift":
            glo, ghi = self.g.range_bound(rect.x0, rect.x1)
            if inverse:
                return Rect(rect.x0, rect.y0 - ghi, rect.x1, rect.y1 - glo)
            return Rect(rect.x0, rect.y0 + glo, rect.x1, rect.y1 + ghi)
        if self.kind == "affine":
            a = np.asarray(self.matrix, dtype=float)
            v = np.array([self.dx, self.dy])
            corners = np.array([[rect.x0, rect.y0], [rect.x1, rect.y0],
                                [rect.x1, rect.y1], [rect.x0, rect.y1]])
            img = (corners - v) @ np.linalg.inv(a).T if inverse else corners @ a.T + v
            return Rect(float(img[:, 0].min()), float(img[:, 1].min()),
                        float(img[:, 0].max()), float(img[:, 1].max()))
        out = rect
        parts = reversed(self.parts) if inverse else self.parts
        for part in parts:
            out = part.image_bbox(out, inverse=inverse)
        return out

    def lipschitz_on(self, rect: Rect) -> float:
        """Bound valid for both the map and its inverse on rect (conservative sum norm)."""
        if self.kind == "translation":
            return 1.0
        if self.kind == "horizontal_shear":
            return 1.0 + self.g.deriv_bound(rect.y0, rect.y1)
        if self.kind == "vertical_drift":
            return 1.0 + self.g.deriv_bound(rect.x0, rect.x1)
        if self.kind == "affine":
            a = np.asarray(self.matrix, dtype=float)
            s = np.linalg.svd(a, compute_uv=False)
            return float(max(s[0], 1.0 / s[-1]))
        lip = 1.0
        cur = rect
        for part in self.parts:
            lip *= part.lipschitz_on(cur)
            cur = part.image_bbox(cur)
        return lip

    def to_dict(self):
        d = {"kind": self.kind}
        if self.kind == "translation":
            d.update(dx=self.dx, dy=self.dy)
        elif self.kind in ("horizontal_shear", "vertical_drift"):
            d["g"] = self.g.to_dict()
        elif self.kind == "affine":
            d.update(matrix=[list(r) for r in self.matrix], dx=self.dx, dy=self.dy)
        else:
            d["parts"] = [p.to_dict() for p in self.parts]
        return d

    @staticmethod
    def from_dict(d) -> "MapSpec":
        kind = d["kind"]
        if kind == "translation":
            return MapSpec("translation", dx=float(d.get("dx", 0.0)), dy=float(d.get("dy", 0.0)))
        if kind in ("horizontal_shear", "vertical_drift"):
            return MapSpec(kind, g=Func1D.from_dict(d["g"]))
        if kind == "affine":
            m = tuple(tuple(float(v) for v in row) for row in d["matrix"])
            return MapSpec("affine", matrix=m, dx=float(d.get("dx", 0.0)), dy=float(d.get("dy", 0.0)))
        if kind == "composite":
            return MapSpec("composite", parts=tuple(MapSpec.from_dict(p) for p in d["parts"]))
        raise ValueError(f"unknown map kind {kind!r}")


@dataclass(frozen=True)
class SymmetryReport:
    symmetry: str
    samples: int
    max_residual: float
    worst_point: Pt


@dataclass(frozen=True)
class PlaneMap:
    """An analytic plane homeomorphism restricted to a padded working window.

    symmetry:
      "none"    -- plain plane map
      "annulus" -- commutes with t: (x, y) -> (x + 1, y)
      "torus"   -- commutes with t and s: (x, y) -> (x, y + 1)

    fixed_point_free is asserted by the catalog, not computed; the
    critical-radius machinery raises FixedPointSuspected when it is wrong.
    """

    spec: MapSpec
    window: Rect
    symmetry: str = "none"
    fixed_point_free: bool = True
    pad: float = 3.0
    name: str = ""

    @property
    def padded(self) -> Rect:
        return self.window.pad(self.pad)

    def _check_window(self, pts: np.ndarray):
        if not np.all(self.padded.contains(pts)):
            bad = pts[~self.padded.contains(pts)][0]
            raise OutOfWindow(f"point ({bad[0]}, {bad[1]}) outside padded window {self.padded}")

    def eval(self, p, check: bool = True) -> np.ndarray:
        """h(p) for a pair or an (n, 2) array; returns the same shape class."""
        pts = as_points(p)
        if check:
            self._check_window(pts)
        out = self.spec.apply(pts)
        return out[0] if np.asarray(p).ndim == 1 else out

    def eval_inverse(self, p, check: bool = True) -> np.ndarray:
        pts = as_points(p)
        if check:
            self._check_window(pts)
        out = self.spec.apply_inverse(pts)
        return out[0] if np.asarray(p).ndim == 1 else out

    def eval_power(self, p, n: int, check: bool = True) -> np.ndarray:
        """h^n(p) by repeated application (n may be negative)."""
        pts = as_points(p)
        if check:
            self._check_window(pts)
        step = self.spec.apply if n >= 0 else self.spec.apply_inverse
        out = pts
        for _ in range(abs(n)):
            out = step(out)
        return out[0] if np.asarray(p).ndim == 1 else out

    def lipschitz_bound(self, region: Optional[Rect] = None) -> float:
        """Valid Lipschitz constant for h and h^-1 on the region (>= 1)."""
        rect = region if region is not None else self.padded
        return max(1.0, self.spec.lipschitz_on(rect))

    def lipschitz_power_bound(self, region: Rect, n: int) -> float:
        """Lipschitz constant for h^n on the region, tracking the moving enclosure."""
        rect = region
        lip = 1.0
        inv = n < 0
        for _ in range(abs(n)):
            lip *= max(1.0, self.spec.lipschitz_on(rect))
            rect = self.spec.image_bbox(rect, inverse=inv)
        return max(lip, 1.0)

    def check_symmetry(self, n_samples: int = 1000, tol: float = TOL_SYM, rng=None) -> SymmetryReport:
        """Sample the declared deck-transformation commutation and report the residual."""
        if self.symmetry == "none":
            return SymmetryReport("none", 0, 0.0, (0.0, 0.0))
        rng = rng or np.random.default_rng(0)
        w = self.window
        pts = np.column_stack(
            [rng.uniform(w.x0, w.x1, n_samples), rng.uniform(w.y0, w.y1, n_samples)]
        )
        decks = [np.array([1.0, 0.0])]
        if self.symmetry == "torus":
            decks.append(np.array([0.0, 1.0]))
        worst = 0.0
        worst_pt = (0.0, 0.0)
        for v in decks:
            r = np.linalg.norm(self.eval(pts + v, check=False) - (self.eval(pts, check=False) + v), axis=1)
            k = int(np.argmax(r))
            if r[k] > worst:
                worst, worst_pt = float(r[k]), (float(pts[k, 0]), float(pts[k, 1]))
        if worst > tol:
            raise SymmetryViolation(
                f"declared {self.symmetry} lift violates commutation: residual {worst:.3e} at {worst_pt}",
                witness=worst_pt,
                residual=worst,
            )
        return SymmetryReport(self.symmetry, n_samples, worst, worst_pt)

    def displacement(self, pts: np.ndarray) -> np.ndarray:
        """|h(p) - p| for each point."""
        pts = as_points(pts)
        return np.linalg.norm(self.spec.apply(pts) - pts, axis=1)
