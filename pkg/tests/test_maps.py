import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from brouwerlines.catalog import (
    by_name,
    diagonal_torus_lift,
    exp_shear,
    half_rotation_lift,
    hyperbolic,
    translation,
    vertical_unit_drift,
)
from brouwerlines.errors import SymmetryViolation
from brouwerlines.maps import Func1D, MapSpec, PlaneMap, Rect, exp_fn, sin_fn

ALL_NAMES = [
    "translation_half", "translation_unit", "translation_double",
    "vertical_unit_drift", "half_rotation_lift", "half_rotation_torus_lift",
    "diagonal_torus_lift", "exp_shear", "hyperbolic", "quarter_rotation",
]

pts_strategy = st.lists(
    st.tuples(st.floats(-2, 2), st.floats(-2, 2)), min_size=1, max_size=20
).map(np.array)


@pytest.mark.parametrize("name", ALL_NAMES)
def test_inverse_roundtrip(name):
    m = by_name(name)
    rng = np.random.default_rng(7)
    p = rng.uniform(-1.5, 1.5, size=(200, 2))
    back = m.eval_inverse(m.eval(p, check=False), check=False)
    assert np.max(np.linalg.norm(back - p, axis=1)) < 1e-9


@given(pts_strategy)
@settings(max_examples=50, deadline=None)
def test_exp_shear_roundtrip_property(pts):
    m = exp_shear()
    back = m.eval_inverse(m.eval(pts, check=False), check=False)
    assert np.max(np.linalg.norm(back - pts, axis=1)) < 1e-9


@pytest.mark.parametrize("name", ALL_NAMES)
def test_image_bbox_encloses(name):
    m = by_name(name)
    rect = Rect(-1.0, -1.0, 1.5, 0.5)
    rng = np.random.default_rng(11)
    p = np.column_stack([
        rng.uniform(rect.x0, rect.x1, 500), rng.uniform(rect.y0, rect.y1, 500)
    ])
    for inverse in (False, True):
        bb = m.spec.image_bbox(rect, inverse=inverse)
        q = m.eval_inverse(p, check=False) if inverse else m.eval(p, check=False)
        assert np.all(q[:, 0] >= bb.x0 - 1e-12) and np.all(q[:, 0] <= bb.x1 + 1e-12)
        assert np.all(q[:, 1] >= bb.y0 - 1e-12) and np.all(q[:, 1] <= bb.y1 + 1e-12)


def test_lipschitz_bound_exp_shear_exact():
    # sup of the operator norm of Dh for h(x,y) = (x + e^y, y) on y <= 1
    m = exp_shear()
    b = m.lipschitz_bound(Rect(-1, -1, 1, 1))
    assert b == pytest.approx(1.0 + math.e, rel=1e-9)


@pytest.mark.parametrize("name", ALL_NAMES)
def test_lipschitz_bound_dominates_samples(name):
    m = by_name(name)
    rect = Rect(-1.0, -1.0, 1.0, 1.0)
    bound = m.lipschitz_bound(rect)
    rng = np.random.default_rng(3)
    p = np.column_stack([rng.uniform(-1, 1, 400), rng.uniform(-1, 1, 400)])
    q = p + rng.normal(scale=1e-6, size=p.shape)
    q = np.clip(q, -1, 1)
    num = np.linalg.norm(m.eval(p, check=False) - m.eval(q, check=False), axis=1)
    den = np.linalg.norm(p - q, axis=1)
    ok = den > 0
    assert np.all(num[ok] <= bound * den[ok] * (1 + 1e-7))


def test_power_bound_dominates_iterates():
    m = exp_shear()
    rect = Rect(-0.5, -0.5, 0.5, 0.5)
    for n in (2, 3, -2):
        bound = m.lipschitz_power_bound(rect, n)
        rng = np.random.default_rng(5)
        p = np.column_stack([rng.uniform(-0.5, 0.5, 300), rng.uniform(-0.5, 0.5, 300)])
        q = np.clip(p + rng.normal(scale=1e-7, size=p.shape), -0.5, 0.5)
        num = np.linalg.norm(m.eval_power(p, n, check=False) - m.eval_power(q, n, check=False), axis=1)
        den = np.linalg.norm(p - q, axis=1)
        ok = den > 0
        assert np.all(num[ok] <= bound * den[ok] * (1 + 1e-6))


def test_eval_power_composes():
    m = vertical_unit_drift()
    p = np.array([[0.3, -0.2]])
    assert np.allclose(m.eval_power(p, 3, check=False), [[0.3, 2.8]])
    assert np.allclose(m.eval_power(p, -2, check=False), [[0.3, -2.2]])
    assert np.allclose(m.eval_power(p, 0, check=False), p)


def test_symmetry_check_passes_for_lifts():
    vertical_unit_drift().check_symmetry()
    half_rotation_lift().check_symmetry()
    diagonal_torus_lift().check_symmetry()
    exp_shear().check_symmetry()


def test_symmetry_check_rejects_false_claim():
    bad = PlaneMap(hyperbolic().spec, Rect(-2, -2, 2, 2), symmetry="annulus",
                   fixed_point_free=False, name="bad")
    with pytest.raises(SymmetryViolation):
        bad.check_symmetry()


def test_spec_serialization_roundtrip():
    for name in ALL_NAMES:
        spec = by_name(name).spec
        again = MapSpec.from_dict(spec.to_dict())
        p = np.array([[0.2, -0.7], [1.1, 0.4]])
        assert np.allclose(spec.apply(p), again.apply(p))
        assert np.allclose(spec.apply_inverse(p), again.apply_inverse(p))


def test_func1d_range_bound_encloses():
    for f in (exp_fn(1.0), sin_fn(1.0, 2.0, 0.3)):
        lo, hi = f.range_bound(-1.0, 2.0)
        xs = np.linspace(-1.0, 2.0, 4001)
        vals = f(xs)
        assert lo <= vals.min() + 1e-12 and vals.max() <= hi + 1e-12


def test_displacement_positive_for_free_maps():
    for name in ("translation_unit", "vertical_unit_drift", "exp_shear"):
        m = by_name(name)
        rng = np.random.default_rng(1)
        p = rng.uniform(-1.5, 1.5, size=(300, 2))
        assert np.min(m.displacement(p)) > 1e-3
