"""Recurrence detection, periodic free lines, deck-free surgery, band types,
infinite-chain selection, and the annulus/torus classification pipelines."""

from types import SimpleNamespace

import numpy as np
import pytest
import shapely
from shapely.geometry import LineString

from brouwerlines.catalog import (
    diagonal_torus_lift,
    half_rotation_lift,
    translation,
    vertical_unit_drift,
)
from brouwerlines.classify import (
    BandType,
    PeriodicLine,
    band_type,
    classify_annulus,
    classify_torus,
    deck_free_line,
    find_recurrence,
    konig_select,
    overlap_order,
    verify_periodic_line,
)
from brouwerlines.errors import AmbiguousTrend, DeadEnd, EmptyLevel, StallDiagnostics
from brouwerlines.geometry import Polyline
from brouwerlines.maps import Rect


# ---------------------------------------------------------------------------
# recurrence
# ---------------------------------------------------------------------------


def _stub_chain(centers, radii):
    c = np.asarray(centers, dtype=float)
    r = np.asarray(radii, dtype=float)
    return SimpleNamespace(centers=lambda: c, radii=lambda: r)


def test_find_recurrence_exact_lattice_return():
    chain = _stub_chain([[0, 0], [0.4, 0.3], [-1.0, 0.0]], [0.5, 0.4, 0.5])
    assert find_recurrence(chain, "annulus") == (0, 2, (-1, 0))


def test_find_recurrence_respects_annulus_lattice():
    chain = _stub_chain([[0, 0], [0.0, 1.0]], [0.5, 0.5])
    assert find_recurrence(chain, "annulus") is None
    assert find_recurrence(chain, "torus") == (0, 1, (0, 1))


def test_find_recurrence_tolerance_grows_with_gap():
    # a 1e-5 lattice mismatch exceeds the allowance over a 1-step gap but fits
    # the accumulated allowance over a 3-step subchain
    short = _stub_chain([[0, 0], [1.0 + 1e-5, 0.0]], [0.5, 0.5])
    assert find_recurrence(short, "annulus", tol=1e-6) is None
    long = _stub_chain(
        [[0, 0], [0.3, 0.7], [0.6, 1.4], [1.0 + 1e-5, 0.0]], [0.5] * 4
    )
    assert find_recurrence(long, "annulus", tol=1e-6) == (0, 3, (1, 0))


def test_find_recurrence_requires_matching_radii():
    chain = _stub_chain([[0, 0], [1.0, 0.0]], [0.5, 0.3])
    assert find_recurrence(chain, "annulus") is None


# ---------------------------------------------------------------------------
# periodic lines
# ---------------------------------------------------------------------------


def test_periodic_line_class_and_multiplicity():
    pl = PeriodicLine(np.array([[0.0, 0.0], [2.0, 2.0]]), (2, 2),
                      Polyline(np.array([[0.0, 0.0], [2.0, 2.0]])), 0.1, True)
    assert pl.primitive_class == (1, 1)
    assert pl.multiplicity == 2


def test_periodic_line_roundtrip():
    pl = PeriodicLine(np.array([[0.0, 0.0], [-1.0, 0.0]]), (-1, 0),
                      Polyline(np.array([[0.0, 0.0], [-1.0, 0.0]])), 0.25, True)
    again = PeriodicLine.from_dict(pl.to_dict())
    assert again.period == (-1, 0)
    assert np.allclose(again.period_vertices, pl.period_vertices)
    assert again.free_margin == pl.free_margin


def test_verify_periodic_line_horizontal_for_drift():
    pmap = vertical_unit_drift()
    period = np.array([[0.0, 0.0], [1.0, 0.0]])
    pl = verify_periodic_line(pmap, period, (1, 0), pmap.window)
    assert pl.simple_in_quotient
    assert pl.free_margin > 0.9


def test_verify_periodic_line_rejects_nonfree():
    # a horizontal period for a horizontal translation is not free
    pmap = translation(1.0, 0.0, symmetry="annulus")
    period = np.array([[0.0, 0.0], [1.0, 0.0]])
    with pytest.raises(Exception):
        verify_periodic_line(pmap, period, (1, 0), pmap.window)


# ---------------------------------------------------------------------------
# deck-free surgery
# ---------------------------------------------------------------------------

SURGERY_WINDOW = Rect(-5.0, -2.0, 5.0, 2.0)

FOLDED_N = np.array([
    [0.0, -2.0], [0.0, -0.5], [1.6, 0.1], [0.35, -0.25], [0.35, 2.0],
])
STEPPED = np.array([
    [0.2, -2.0], [0.2, 0.4], [1.2, 0.4], [1.2, -0.3], [1.9, -0.3], [1.9, 2.0],
])


@pytest.mark.parametrize("verts", [FOLDED_N, STEPPED], ids=["folded-n", "stepped"])
def test_deck_free_line_clears_overlaps(verts):
    pmap = translation(3.0, 0.0, window=Rect(-8, -4, 8, 4), symmetry="annulus")
    line = Polyline(verts)
    shift = np.array([1.0, 0.0])
    assert overlap_order(line, shift, 8) >= 1
    history = []
    out = deck_free_line(pmap, line, SURGERY_WINDOW, shift, history=history)
    # history[0] is the input's order; the surgery rounds after the frontier
    # pass strictly decrease it to zero
    assert history[0] >= 1
    assert all(b < a for a, b in zip(history[1:], history[2:]))
    assert history[-1] == 0
    assert overlap_order(out, shift, 8) == 0
    # exact disjointness from every in-window translate
    ls = out.as_linestring()
    for k in range(1, 9):
        assert ls.distance(LineString(out.vertices + k * shift)) > 0.0


def test_overlap_order_vertical_line_is_zero():
    line = Polyline(np.array([[0.0, -2.0], [0.0, 2.0]]))
    assert overlap_order(line, np.array([1.0, 0.0]), 5) == 0


# ---------------------------------------------------------------------------
# band types
# ---------------------------------------------------------------------------


def _fake_chain(centers):
    c = np.asarray(centers, dtype=float)
    return SimpleNamespace(centers=lambda: c)


def test_band_type_to_north():
    pmap = vertical_unit_drift()
    chain = _fake_chain([[0, 0], [0.1, 0.5], [0.2, 1.0], [0.3, 1.5]])
    assert band_type(pmap, chain, pmap.window) is BandType.TO_NORTH


def test_band_type_from_south():
    pmap = vertical_unit_drift()
    chain = _fake_chain([[0, 0], [0.1, -0.5], [0.2, -1.0], [0.3, -1.5]])
    assert band_type(pmap, chain, pmap.window) is BandType.FROM_SOUTH


def test_band_type_ambiguous():
    pmap = vertical_unit_drift()
    chain = _fake_chain([[0, 0], [0.5, 0.0], [1.0, 0.0]])
    with pytest.raises(AmbiguousTrend):
        band_type(pmap, chain, pmap.window)


# ---------------------------------------------------------------------------
# chain selection over leveled candidates
# ---------------------------------------------------------------------------


def test_konig_select_planted_chain():
    rng = np.random.default_rng(7)
    n_levels, width = 50, 6
    levels = [[(l, k) for k in range(width)] for l in range(n_levels)]
    planted = [int(rng.integers(width)) for _ in range(n_levels)]
    edges = set()
    for l in range(n_levels - 1):
        edges.add(((l, planted[l]), (l + 1, planted[l + 1])))
        # decoy edges that all eventually dead-end
        for _ in range(3):
            a, b = int(rng.integers(width)), int(rng.integers(width))
            if (a, b) != (planted[l], planted[l + 1]) and l < n_levels - 2:
                edges.add(((l, a), (l + 1, b)))

    def children(level, parent, cand):
        return (parent, cand) in edges

    path = konig_select(levels, children)
    assert len(path) == n_levels
    for a, b in zip(path, path[1:]):
        assert (a, b) in edges


def test_konig_select_empty_level():
    with pytest.raises(EmptyLevel):
        konig_select([[1], [], [2]], lambda l, p, c: True)


def test_konig_select_dead_end():
    levels = [[0], [1, 2], [3]]

    def children(level, parent, cand):
        # both middle nodes extend the root but neither reaches the last level
        return level == 0

    with pytest.raises(DeadEnd):
        konig_select(levels, children)


# ---------------------------------------------------------------------------
# pipelines
# ---------------------------------------------------------------------------


def test_classify_annulus_drift_essential_curve():
    out = classify_annulus(vertical_unit_drift())
    assert out.kind == "essential_curve"
    assert out.case == 1
    assert out.curve.primitive_class in ((1, 0), (-1, 0))
    assert out.curve.free_margin > 0.5
    assert out.curve.simple_in_quotient


def test_classify_annulus_half_rotation_line():
    out = classify_annulus(half_rotation_lift())
    assert out.kind == "line_joining_ends"
    assert out.case == 2
    assert out.line_cert.verified


def test_classify_annulus_rejects_wrong_symmetry():
    with pytest.raises(StallDiagnostics):
        classify_annulus(translation(1.0, 0.0))


def test_classify_torus_diagonal():
    out = classify_torus(diagonal_torus_lift())
    assert out.kind == "essential_curve"
    assert abs(out.displacement_class[0]) == 1
    assert abs(out.displacement_class[1]) == 1
    assert out.curve.free_margin > 0.1


def test_classify_torus_half_rotation():
    out = classify_torus(half_rotation_lift(symmetry="torus"))
    assert out.kind == "essential_curve"
    assert out.curve.primitive_class in ((0, 1), (0, -1))
