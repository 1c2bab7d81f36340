"""Named example maps used by the test suite, scripts, and CLI demos."""

from __future__ import annotations

import math

from .maps import MapSpec, PlaneMap, Rect, const, exp_fn

DEFAULT_WINDOW = Rect(-3.0, -3.0, 3.0, 3.0)


def translation(dx: float, dy: float = 0.0, window: Rect = DEFAULT_WINDOW, symmetry: str = "none") -> PlaneMap:
    return PlaneMap(
        MapSpec("translation", dx=dx, dy=dy),
        window,
        symmetry=symmetry,
        name=f"translation({dx},{dy})",
    )


def vertical_unit_drift(window: Rect = DEFAULT_WINDOW) -> PlaneMap:
    """h(x, y) = (x, y + 1), the lift of the annulus map (theta, y) -> (theta, y + 1)."""
    return PlaneMap(
        MapSpec("vertical_drift", g=const(1.0)),
        window,
        symmetry="annulus",
        name="vertical_unit_drift",
    )


def half_rotation_lift(window: Rect = DEFAULT_WINDOW, symmetry: str = "annulus") -> PlaneMap:
    """h(x, y) = (x + 1/2, y), lift of the rigid rotation by a half turn."""
    return PlaneMap(
        MapSpec("translation", dx=0.5, dy=0.0),
        window,
        symmetry=symmetry,
        name="half_rotation_lift",
    )


def diagonal_torus_lift(window: Rect = DEFAULT_WINDOW) -> PlaneMap:
    """h(x, y) = (x + 1/2, y + 1/2), a torus lift with diagonal drift."""
    return PlaneMap(
        MapSpec("translation", dx=0.5, dy=0.5),
        window,
        symmetry="torus",
        name="diagonal_torus_lift",
    )


def exp_shear(window: Rect = Rect(-2.0, -2.0, 2.0, 2.0)) -> PlaneMap:
    """h(x, y) = (x + e^y, y): fixed point free annulus lift with y-dependent push."""
    return PlaneMap(
        MapSpec("horizontal_shear", g=exp_fn()),
        window,
        symmetry="annulus",
        name="exp_shear",
    )


def hyperbolic(window: Rect = DEFAULT_WINDOW) -> PlaneMap:
    """h(x, y) = (2x, y/2): orientation preserving with a fixed point at the origin.

    Negative control; must be rejected by the critical-radius machinery.
    """
    return PlaneMap(
        MapSpec("affine", matrix=((2.0, 0.0), (0.0, 0.5))),
        window,
        fixed_point_free=False,
        name="hyperbolic",
    )


def quarter_rotation(window: Rect = DEFAULT_WINDOW) -> PlaneMap:
    """Rotation by 90 degrees about the origin: fixed point with a genuine cyclic chain.

    Negative control for the Franks-chain validator.
    """
    return PlaneMap(
        MapSpec("affine", matrix=((0.0, -1.0), (1.0, 0.0))),
        window,
        fixed_point_free=False,
        name="quarter_rotation",
    )


FIXED_POINT_FREE = {
    "translation_half": lambda: translation(0.5),
    "translation_unit": lambda: translation(1.0),
    "translation_double": lambda: translation(2.0),
    "vertical_unit_drift": vertical_unit_drift,
    "half_rotation_lift": half_rotation_lift,
    "half_rotation_torus_lift": lambda: half_rotation_lift(symmetry="torus"),
    "diagonal_torus_lift": diagonal_torus_lift,
    "exp_shear": exp_shear,
}

WITH_FIXED_POINTS = {
    "hyperbolic": hyperbolic,
    "quarter_rotation": quarter_rotation,
}


def by_name(name: str) -> PlaneMap:
    if name in FIXED_POINT_FREE:
        return FIXED_POINT_FREE[name]()
    if name in WITH_FIXED_POINTS:
        return WITH_FIXED_POINTS[name]()
    raise KeyError(f"no catalog map named {name!r}")
