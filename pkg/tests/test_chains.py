"""Extension chains, Brouwer-line synthesis/verification, cyclic free-disc
chains, and translation-arc trajectories."""

import numpy as np
import pytest

from brouwerlines.catalog import (
    exp_shear,
    half_rotation_lift,
    quarter_rotation,
    translation,
    vertical_unit_drift,
)
from brouwerlines.chains import (
    BrouwerLineCert,
    build_bidirectional,
    build_chain,
    chain_union_free,
    check_escape,
    clip_polyline_to_window,
    franks_validate,
    increment_area_ratio,
    increments_pairwise_disjoint,
    synth_brouwer_line,
    trajectory,
    trajectory_probe_check,
    verify_brouwer_line,
)
from brouwerlines.critical import critical_disc
from brouwerlines.errors import (
    ClaimUnverified,
    EscapeViolation,
    SeparationFailure,
    SimplicityFailure,
)
from brouwerlines.geometry import Disc, Polyline
from brouwerlines.maps import Rect


BIG = Rect(-40.0, -40.0, 40.0, 40.0)


@pytest.fixture(scope="module")
def trans_chain():
    pmap = translation(1.0, 0.0, window=BIG)
    seed = critical_disc(pmap, (0.0, 0.0))
    return pmap, build_chain(pmap, seed, "high", 6)


def test_translation_chain_marches_perpendicular(trans_chain):
    _, chain = trans_chain
    c = chain.centers()
    assert len(chain) == 7
    # strict extensions march along the future line, perpendicular to the
    # translation direction
    assert np.all(np.diff(c[:, 1]) > 0)
    assert np.allclose(c[:, 0], 0.0, atol=1e-9)
    # radii stay at the translation's uniform critical radius 1/2
    assert np.allclose(chain.radii(), 0.5, atol=1e-4)


def test_chain_union_is_free(trans_chain):
    pmap, chain = trans_chain
    cert = chain_union_free(pmap, chain)
    assert cert.verdict == "free"
    assert cert.margin > 0.0


def test_increments_pairwise_disjoint(trans_chain):
    _, chain = trans_chain
    assert increments_pairwise_disjoint(chain)


def test_increment_area_ratio_full_variant():
    # two unit-ratio discs of equal radius r with centers r apart: the
    # uncovered fraction of the new disc is 1 - lens/(pi r^2) ~ 0.609
    from brouwerlines.critical import GenDisc

    pmap = translation(1.0, 0.0, window=BIG)
    a = critical_disc(pmap, (0.0, 0.0))
    b = critical_disc(pmap, (0.5, 0.0))
    ratio = increment_area_ratio(GenDisc(a, "full"), GenDisc(b, "full"))
    lens = 2.0 * 0.25 * (np.pi / 3.0 * 2.0 - np.sin(np.pi / 3.0 * 2.0) * 0.0)
    # exact: 2 r^2 (theta - sin theta cos theta) with cos theta = 1/2
    th = np.arccos(0.5)
    lens = 2.0 * 0.25 * (th - np.sin(th) * np.cos(th))
    assert ratio == pytest.approx(1.0 - lens / (np.pi * 0.25), abs=1e-3)


def test_check_escape(trans_chain):
    _, chain = trans_chain
    rep = check_escape(chain, Rect(-1.0, -1.0, 1.0, 1.0))
    assert rep.escaped
    assert rep.tail_clear_from > rep.last_touch_index


def test_check_escape_violation():
    # a chain that leaves K and comes back must be rejected
    pmap = translation(1.0, 0.0, window=BIG)
    fwd = build_chain(pmap, critical_disc(pmap, (0.0, 0.0)), "high", 4)
    back = fwd.subchain(0, len(fwd) - 1)
    back.discs.extend(reversed(fwd.discs[:-1]))
    with pytest.raises(EscapeViolation):
        check_escape(back, Rect(-0.6, -0.6, 0.6, 0.6))


def test_bidirectional_seed_index():
    pmap = vertical_unit_drift()
    seed = critical_disc(pmap, (0.0, 0.0))
    chain = build_bidirectional(pmap, seed, 2)
    k = chain.seed_index
    assert np.allclose(chain.discs[k].center, seed.center)
    c = chain.centers()
    # drift chains march horizontally, strictly monotone through the ordering
    assert np.all(np.diff(c[:, 0]) < 0) or np.all(np.diff(c[:, 0]) > 0)
    assert c.shape[0] == 5


def test_stop_window_halts_chain():
    pmap = translation(1.0, 0.0, window=BIG)
    seed = critical_disc(pmap, (0.0, 0.0))
    chain = build_chain(pmap, seed, "high", 50, stop_window=Rect(-2.0, -2.0, 2.0, 2.0))
    assert len(chain) < 20
    assert chain.centers()[-1, 1] > 2.0


# ---------------------------------------------------------------------------
# Brouwer lines
# ---------------------------------------------------------------------------


def _line_for(pmap, seed_pt, window, steps=8):
    seed = critical_disc(pmap, seed_pt)
    chain = build_bidirectional(pmap, seed, steps, stop_window=window.pad(1.0))
    return synth_brouwer_line(pmap, chain, window)


def test_verified_line_translation():
    w = Rect(-3.0, -3.0, 3.0, 3.0)
    cert = _line_for(translation(1.0, 0.0, window=BIG), (0.0, 0.0), w)
    assert cert.verified
    assert cert.free_margin > 0.0
    assert cert.sep_d_ok == cert.sep_samples
    assert cert.sep_g_ok == cert.sep_samples


def test_verified_line_half_rotation():
    w = Rect(-3.0, -3.0, 3.0, 3.0)
    cert = _line_for(half_rotation_lift(window=BIG), (0.0, 0.0), w, steps=16)
    assert cert.verified


def test_verified_line_exp_shear():
    pmap = exp_shear()
    w = pmap.window
    cert = _line_for(pmap, (0.0, 0.0), w, steps=16)
    assert cert.verified
    assert cert.free_margin > 0.05


def test_mutated_line_fails_verification():
    pmap = exp_shear()
    w = pmap.window
    cert = _line_for(pmap, (0.0, 0.0), w, steps=16)
    verts = cert.line.vertices.copy()
    # fold the line back on itself over a y-interval wider than the local
    # displacement, so the image of the line crosses the line itself
    k = int(np.argmin(np.abs(verts[:, 1] + 1.0)))
    verts[k] = np.array([1.0, verts[k + 2, 1]])
    mutated = Polyline(verts)
    try:
        bad = verify_brouwer_line(pmap, mutated, w)
        ok = bad.verified
    except (SeparationFailure, SimplicityFailure):
        ok = False
    assert not ok


def test_cert_serialization_roundtrip():
    w = Rect(-3.0, -3.0, 3.0, 3.0)
    cert = _line_for(translation(1.0, 0.0, window=BIG), (0.0, 0.0), w)
    again = BrouwerLineCert.from_dict(cert.to_dict())
    assert again.verified
    assert np.allclose(again.line.vertices, cert.line.vertices)
    assert again.ends == cert.ends


def test_clip_polyline():
    w = Rect(0.0, 0.0, 1.0, 1.0)
    poly = Polyline(np.array([[-1.0, 0.5], [2.0, 0.5]]))
    clipped = clip_polyline_to_window(poly, w)
    assert clipped.vertices[:, 0].min() == pytest.approx(0.0, abs=1e-9)
    assert clipped.vertices[:, 0].max() == pytest.approx(1.0, abs=1e-9)


# ---------------------------------------------------------------------------
# cyclic free-disc chains (fixed-point witnesses)
# ---------------------------------------------------------------------------


def _quarter_cycle():
    pmap = quarter_rotation()
    discs = [
        Disc((1.0, 0.0), 0.3),
        Disc((0.0, 1.0), 0.3),
        Disc((-1.0, 0.0), 0.3),
        Disc((0.0, -1.0), 0.3),
    ]
    hits = [(0, 1), (1, 1), (2, 1), (3, 1)]
    return pmap, discs, hits


def test_franks_chain_forces_fixed_point():
    pmap, discs, hits = _quarter_cycle()
    rep = franks_validate(pmap, discs, hits)
    assert rep.fixed_point_forced
    assert all(c.is_free for c in rep.disc_certs)
    assert len(rep.claim_witnesses) == 4


def test_franks_rejects_overlapping_discs():
    pmap, discs, hits = _quarter_cycle()
    discs[1] = Disc((0.9, 0.3), 0.3)
    with pytest.raises(ClaimUnverified):
        franks_validate(pmap, discs, hits)


def test_franks_rejects_unlinked_orbit():
    # a pure translation has no cyclic orbit links at all
    pmap = translation(1.0, 0.0, window=BIG)
    discs = [Disc((0.0, 0.0), 0.2), Disc((0.0, 3.0), 0.2)]
    with pytest.raises(ClaimUnverified):
        franks_validate(pmap, discs, [(0, 1), (1, 1)])


def test_franks_rejects_nonfree_disc():
    pmap = translation(1.0, 0.0, window=BIG)
    discs = [Disc((0.0, 0.0), 0.7), Disc((0.0, 5.0), 0.2)]
    with pytest.raises(ClaimUnverified):
        franks_validate(pmap, discs, [(0, 1), (1, 1)])


# ---------------------------------------------------------------------------
# trajectories
# ---------------------------------------------------------------------------


def test_trajectory_simple_translation():
    pmap = translation(1.0, 0.0, window=BIG)
    cd = critical_disc(pmap, (0.0, 0.0))
    traj = trajectory(pmap, cd, "high", 3)
    assert traj.n == 3
    assert len(traj.iterates) == 7
    assert traj.union.is_simple()


def test_trajectory_probe():
    pmap = translation(1.0, 0.0, window=BIG)
    cd = critical_disc(pmap, (0.0, 0.0))
    traj = trajectory(pmap, cd, "high", 3)
    mid = np.asarray(traj.base_arc.vertices[len(traj.base_arc.vertices) // 2])
    probe = Disc((float(mid[0]), float(mid[1])), 0.05)
    assert trajectory_probe_check(traj, probe)
