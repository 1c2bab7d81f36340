"""Acceptance suite: twelve end-to-end criteria, one test each, printing a
single PASS/FAIL line per criterion."""

import json
import time

import numpy as np
import pytest
from shapely.geometry import LineString

from brouwerlines.catalog import (
    by_name,
    exp_shear,
    half_rotation_lift,
    hyperbolic,
    quarter_rotation,
    translation,
    vertical_unit_drift,
)
from brouwerlines.chains import (
    build_chain,
    chain_union_free,
    check_escape,
    franks_validate,
    increments_pairwise_disjoint,
)
from brouwerlines.classify import deck_free_line, konig_select, overlap_order
from brouwerlines.cli import EXIT_OK, main
from brouwerlines.critical import critical_disc, critical_radius_bracket, find_strict_extension
from brouwerlines.errors import FixedPointSuspected
from brouwerlines.geometry import Disc, DiscDomain, DiscTarget, Polyline, separation_test
from brouwerlines.maps import Rect


BIG = Rect(-20.0, -20.0, 20.0, 20.0)


def _report(n: int, label: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {n:2d} ({label}): {detail}")
    assert ok, f"criterion {n} ({label}) failed: {detail}"


# ---------------------------------------------------------------------------
# suite of constructed discs, shared by criteria 3 and 4
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def disc_suite():
    cases = [
        (translation(1.0, 0.0, window=BIG), (0.0, 0.0)),
        (translation(2.0, 0.0, window=BIG), (0.3, -0.2)),
        (vertical_unit_drift(), (0.0, 0.0)),
        (half_rotation_lift(), (0.5, 0.5)),
        (exp_shear(), (0.0, 0.0)),
        (exp_shear(), (0.0, -0.5)),
    ]
    return [(pmap, critical_disc(pmap, seed)) for pmap, seed in cases]


@pytest.fixture(scope="module")
def chains30():
    maps = {
        "translation_unit": translation(1.0, 0.0, window=BIG),
        "vertical_unit_drift": vertical_unit_drift(window=BIG),
        "half_rotation_lift": half_rotation_lift(window=BIG),
    }
    out = {}
    for name, pmap in maps.items():
        t0 = time.time()
        seed = critical_disc(pmap, (0.0, 0.0))
        chain = build_chain(pmap, seed, "high", 30)
        out[name] = (pmap, chain, time.time() - t0)
    return out


def test_criterion_01_translation_oracle():
    t0 = time.time()
    worst = 0.0
    for d in (0.5, 1.0, 2.0):
        pmap = translation(d, 0.0, window=BIG)
        xs = np.linspace(-2.0, 2.0, 5)
        for x in xs:
            for y in xs:
                lo, hi = critical_radius_bracket(pmap, np.array([x, y]))
                worst = max(worst, abs(lo - d / 2.0))
    dt = time.time() - t0
    _report(1, "translation oracle", worst <= 1e-6 and dt < 5.0,
            f"max |r - d/2| = {worst:.2e} over 75 points in {dt:.2f}s")


def test_criterion_02_lipschitz_field():
    t0 = time.time()
    pmap = exp_shear()
    rng = np.random.default_rng(42)
    pts = rng.uniform([0.0, -1.0], [1.0, 1.0], size=(400, 2))
    radii = np.array([critical_radius_bracket(pmap, p)[0] for p in pts])
    a, b = pts[:200], pts[200:]
    ra, rb = radii[:200], radii[200:]
    slack = np.abs(ra - rb) - np.linalg.norm(a - b, axis=1)
    dt = time.time() - t0
    _report(2, "1-Lipschitz radius field", float(slack.max()) <= 2e-6 and dt < 30.0,
            f"max violation {slack.max():.2e} over 200 pairs in {dt:.1f}s")


def test_criterion_03_power_disjointness(disc_suite):
    bad = []
    for pmap, cd in disc_suite:
        for n in (-5, -4, -3, -2, 2, 3, 4, 5):
            res = separation_test(pmap, DiscDomain(cd.disc), DiscTarget(cd.disc),
                                  power=n, tol=1e-6)
            if res.verdict != "free":
                bad.append((pmap.name, n, res.verdict))
    _report(3, "power disjointness", not bad,
            f"h^n(D) cap D = empty for n in +-{{2..5}} on {len(disc_suite)} discs"
            + (f"; failures {bad}" if bad else ""))


def test_criterion_04_derived_disc_constants(disc_suite):
    rng = np.random.default_rng(7)
    ok = True
    details = []
    for pmap, cd in disc_suite:
        # inf over the arcs of the decomposition; degenerate contacts are
        # single points and do not contribute a length
        arcs = [cd.alpha_high.length(), cd.alpha_low.length()]
        if not cd.contacts_degenerate:
            arcs += [cd.lam.length(), cd.mu.length()]
        for variant in ("high", "low"):
            eps = cd.epsilon
            if not (eps <= 0.125 * min(arcs) + 1e-12 and eps < (np.pi / 8.0) * cd.radius):
                ok = False
                details.append(f"{pmap.name}:{variant} eps bounds")
            # MC area with a 99% (2.58 sigma) one-sided margin
            n = 40000
            r = cd.radius
            pts = cd.center + rng.uniform(-r, r, size=(n, 2))
            in_disc = cd.disc.contains(pts)
            pts = pts[in_disc]
            bites = cd.bite_discs(variant)
            hit = ~(bites[0].contains(pts) | bites[1].contains(pts))
            p = hit.mean()
            se = np.sqrt(p * (1.0 - p) / len(pts))
            area_lo = (p - 2.58 * se) * np.pi * r * r
            if not area_lo > (2.0 * np.pi / 3.0) * r * r:
                ok = False
                details.append(f"{pmap.name}:{variant} area {area_lo:.4f}")
    _report(4, "derived-disc constants", ok,
            "epsilon bounds and MC area > (2pi/3) r^2 at 99% confidence"
            + (f"; failures {details}" if details else ""))


def test_criterion_05_chain_structure(chains30):
    ok = True
    details = []
    for name, (pmap, chain, dt) in chains30.items():
        t0 = time.time()
        disjoint = increments_pairwise_disjoint(chain)
        union = chain_union_free(pmap, chain)
        dt_total = dt + time.time() - t0
        good = disjoint and union.verdict == "free" and dt_total < 120.0
        ok = ok and good
        details.append(f"{name}: {len(chain)} discs, union margin "
                       f"{union.margin:.1e}, {dt_total:.1f}s")
    _report(5, "30-step chain structure", ok, "; ".join(details))


def test_criterion_06_escape(chains30):
    K = Rect(-2.0, -2.0, 2.0, 2.0)
    ok = True
    details = []
    for name, (_, chain, _) in chains30.items():
        rep = check_escape(chain, K)
        good = rep.escaped and all(r > 0.0 for r in rep.area_ratios)
        ok = ok and good
        details.append(f"{name}: tail clear from {rep.tail_clear_from}, "
                       f"min ratio {min(rep.area_ratios):.3f}")
    _report(6, "escape from compacta", ok, "; ".join(details))


def test_criterion_07_plane_translation(tmp_path):
    maps = {
        "translation_unit": Rect(-3, -3, 3, 3),
        "vertical_unit_drift": Rect(-3, -3, 3, 3),
        "half_rotation_lift": Rect(-2, -2, 2, 2),
        "exp_shear": Rect(-2, -2, 2, 2),
    }
    rng = np.random.default_rng(2024)
    runs, ok = 0, True
    for name, w in maps.items():
        for _ in range(5):
            seed = rng.uniform(-0.4, 0.4, size=2)
            cfg = tmp_path / f"{name}_{runs}.toml"
            cfg.write_text(
                f"window = [{w.x0}, {w.y0}, {w.x1}, {w.y1}]\n\n"
                f'[map]\ncatalog = "{name}"\n\n'
                f"[pipeline]\nsteps = 40\nseed = [{seed[0]:.6f}, {seed[1]:.6f}]\n"
            )
            out = tmp_path / f"{name}_{runs}.json"
            if main(["line", "--config", str(cfg), "--out", str(out)]) != EXIT_OK:
                ok = False
                break
            rep = json.loads(out.read_text())
            pay = rep["outcome"]["certificate"]["payload"]
            if not (pay["free_margin"] > 0.0
                    and pay["sep_d_ok"] == pay["sep_samples"]
                    and pay["sep_g_ok"] == pay["sep_samples"]
                    and pay["sep_samples"] >= 1000):
                ok = False
                break
            if main(["verify", str(out)]) != EXIT_OK:
                ok = False
                break
            runs += 1
    _report(7, "plane translation at desk scale", ok and runs == 20,
            f"{runs}/20 synthesized lines independently re-verified")


def test_criterion_08_annulus_dichotomy(tmp_path):
    t0 = time.time()
    cases = {
        "vertical_unit_drift": ("essential_curve", Rect(-3, -3, 3, 3)),
        "half_rotation_lift": ("line_joining_ends", Rect(-2, -2, 2, 2)),
        "exp_shear": ("line_joining_ends", Rect(-2, -2, 2, 2)),
    }
    ok = True
    details = []
    for name, (expected, w) in cases.items():
        cfg = tmp_path / f"{name}.toml"
        cfg.write_text(
            f"window = [{w.x0}, {w.y0}, {w.x1}, {w.y1}]\n\n"
            f'[map]\ncatalog = "{name}"\n\n[pipeline]\nsteps = 40\nseed = [0.0, 0.0]\n'
        )
        out = tmp_path / f"{name}.json"
        code = main(["classify-annulus", "--config", str(cfg), "--out", str(out)])
        rep = json.loads(out.read_text()) if code == EXIT_OK else {}
        kind = rep.get("outcome", {}).get("kind")
        reverified = code == EXIT_OK and main(["verify", str(out)]) == EXIT_OK
        good = kind == expected and reverified
        ok = ok and good
        details.append(f"{name} -> {kind}")
    dt = time.time() - t0
    ok = ok and dt < 300.0
    _report(8, "annulus dichotomy", ok, "; ".join(details) + f" in {dt:.0f}s")


def test_criterion_09_surgery():
    pmap = translation(3.0, 0.0, window=Rect(-8, -4, 8, 4), symmetry="annulus")
    window = Rect(-5.0, -2.0, 5.0, 2.0)
    zig = Polyline(np.array(
        [[0.0, -2.0], [0.0, -0.5], [1.6, 0.1], [0.35, -0.25], [0.35, 2.0]]
    ))
    shift = np.array([1.0, 0.0])
    history = []
    out = deck_free_line(pmap, zig, window, shift, history=history)
    rounds_decrease = all(b < a for a, b in zip(history[1:], history[2:]))
    ls = out.as_linestring()
    disjoint = all(
        ls.intersection(LineString(out.vertices + k * shift)).is_empty
        for k in range(1, 13)
    )
    from brouwerlines.chains import verify_brouwer_line

    cert = verify_brouwer_line(pmap, out, window)
    ok = history[0] >= 1 and rounds_decrease and disjoint and cert.verified
    _report(9, "deck-translate surgery", ok,
            f"overlap orders {history}, exact disjointness {disjoint}, "
            f"margin {cert.free_margin:.3f}")


def test_criterion_10_torus_classes(tmp_path):
    cases = {
        "half_rotation_torus_lift": (0, 1),
        "diagonal_torus_lift": (1, 1),
    }
    ok = True
    details = []
    for name, expected_abs in cases.items():
        cfg = tmp_path / f"{name}.toml"
        cfg.write_text(
            "window = [-2.0, -2.0, 2.0, 2.0]\n\n"
            f'[map]\ncatalog = "{name}"\n\n[pipeline]\nsteps = 40\nseed = [0.0, 0.0]\n'
        )
        out = tmp_path / f"{name}.json"
        code = main(["classify-torus", "--config", str(cfg), "--out", str(out)])
        rep = json.loads(out.read_text()) if code == EXIT_OK else {}
        cls = rep.get("outcome", {}).get("displacement_class")
        good = code == EXIT_OK and cls is not None and \
            tuple(sorted(map(abs, cls))) == tuple(sorted(expected_abs))
        ok = ok and good
        details.append(f"{name} -> {tuple(cls) if cls else None}")
    _report(10, "torus displacement classes", ok, "; ".join(details))


def test_criterion_11_negative_control():
    rejected = False
    try:
        critical_disc(hyperbolic(), (1e-9, 1e-9))
    except FixedPointSuspected:
        rejected = True

    pmap = quarter_rotation()
    discs = [Disc((1.0, 0.0), 0.3), Disc((0.0, 1.0), 0.3),
             Disc((-1.0, 0.0), 0.3), Disc((0.0, -1.0), 0.3)]
    rep = franks_validate(pmap, discs, [(0, 1), (1, 1), (2, 1), (3, 1)])
    ok = rejected and rep.fixed_point_forced
    _report(11, "fixed-point negative control", ok,
            f"hyperbolic rejected: {rejected}; witness chain forces fixed point: "
            f"{rep.fixed_point_forced}")


def test_criterion_12_koenig_utility():
    rng = np.random.default_rng(99)
    n_instances, n_levels, width = 100, 50, 5
    ok = True
    for _ in range(n_instances):
        levels = [[(l, k) for k in range(width)] for l in range(n_levels)]
        planted = rng.integers(width, size=n_levels)
        edges = set()
        for l in range(n_levels - 1):
            edges.add(((l, int(planted[l])), (l + 1, int(planted[l + 1]))))
            for _ in range(int(rng.integers(0, 4))):
                a, b = int(rng.integers(width)), int(rng.integers(width))
                edges.add(((l, a), (l + 1, b)))

        def children(level, parent, cand, edges=edges):
            return (parent, cand) in edges

        path = konig_select(levels, children)
        if len(path) != n_levels or any(
            (a, b) not in edges for a, b in zip(path, path[1:])
        ):
            ok = False
            break
    _report(12, "chain selection utility", ok,
            f"{n_instances} randomized {n_levels}-level instances solved")
