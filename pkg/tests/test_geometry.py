import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hypwigner.geometry import (
    DomainError,
    Model,
    apply_map,
    apply_to_boundary,
    as_points,
    check_interior,
    disc_measure_ratio,
    diffeo_measure_ratio_fd,
    geodesic_midpoint,
    geodesic_symmetry,
    hyperbolic_distance,
    measure_ratio_fd,
    midpoint_jacobian,
    midpoint_jacobian_fd,
    mobius,
    planar_rotation,
    random_boundary,
    random_map,
    random_points,
    to_complex,
)

coord = st.floats(-0.7, 0.7, allow_nan=False)
disc_point = st.tuples(coord, coord).map(np.array).filter(lambda p: p @ p < 0.64)
seeds = st.integers(0, 2**32 - 1)


@given(disc_point, disc_point)
def test_mobius_is_involution(a, x):
    assert np.allclose(mobius(a, mobius(a, x)), x, atol=1e-12)


@given(disc_point)
def test_mobius_swaps_point_and_origin(a):
    assert np.allclose(mobius(a, a), 0.0, atol=1e-14)
    assert np.allclose(mobius(a, np.zeros(2)), a, atol=1e-14)


@given(disc_point, disc_point)
def test_disc_mobius_matches_complex_formula(a, x):
    za, zx = complex(to_complex(a)), complex(to_complex(x))
    expect = (za - zx) / (1 - za.conjugate() * zx)
    assert abs(complex(to_complex(mobius(a, x))) - expect) < 1e-12


@given(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9))
def test_interval_mobius_matches_real_formula(a, x):
    assert mobius([a], [x])[0] == pytest.approx((a - x) / (1 - a * x), abs=1e-12)


@pytest.mark.parametrize("name", ["interval", "disc", "ball:3", "ball:4"])
@given(seed=seeds)
def test_isometries_preserve_distance(name, seed):
    model = Model.parse(name, 1.0)
    rng = np.random.default_rng(seed)
    x, y = random_points(model, 2, rng, 0.8)
    g = random_map(model, rng)
    assert hyperbolic_distance(model, g(x), g(y)) == pytest.approx(hyperbolic_distance(model, x, y), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("name", ["interval", "disc", "ball:3"])
@given(seed=seeds)
def test_isometries_preserve_measure(name, seed):
    model = Model.parse(name, 1.0)
    rng = np.random.default_rng(seed)
    x = random_points(model, (), rng, 0.7)
    assert measure_ratio_fd(model, random_map(model, rng), x) == pytest.approx(1.0, rel=1e-7)


@pytest.mark.parametrize("name", ["interval", "disc", "ball:3"])
@given(seed=seeds)
def test_midpoint_halves_distance(name, seed):
    model = Model.parse(name, 1.0)
    x, y = random_points(model, 2, np.random.default_rng(seed), 0.85)
    m = geodesic_midpoint(x, y)
    d = hyperbolic_distance(model, x, y)
    assert hyperbolic_distance(model, x, m) == pytest.approx(d / 2, abs=1e-9)
    assert hyperbolic_distance(model, m, y) == pytest.approx(d / 2, abs=1e-9)


@given(disc_point, disc_point)
def test_geodesic_symmetry(x, y):
    sy = geodesic_symmetry(x, y)
    assert np.allclose(geodesic_symmetry(x, x), x, atol=1e-12)
    assert np.allclose(geodesic_symmetry(x, sy), y, atol=1e-9)
    assert np.allclose(geodesic_midpoint(y, sy), x, atol=1e-9)


def test_symmetry_at_origin_is_minus_identity():
    y = np.array([0.3, -0.4])
    assert np.allclose(geodesic_symmetry(np.zeros(2), y), -y)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_jacobian_at_origin(n):
    model = Model(n)
    zero = np.zeros(n)
    assert midpoint_jacobian(model, zero, zero) == 2.0**n
    assert midpoint_jacobian_fd(model, zero, zero) == pytest.approx(2.0**n, rel=1e-9)


@pytest.mark.parametrize("name", ["interval", "disc", "ball:3"])
@given(seed=seeds)
def test_jacobian_closed_form_symmetric_invariant(name, seed):
    model = Model.parse(name, 1.0)
    rng = np.random.default_rng(seed)
    x, y = random_points(model, 2, rng, 0.75)
    fd = midpoint_jacobian_fd(model, x, y)
    assert midpoint_jacobian(model, x, y) == pytest.approx(fd, rel=1e-6)
    assert midpoint_jacobian_fd(model, y, x) == pytest.approx(fd, rel=1e-6)
    g = random_map(model, rng)
    assert midpoint_jacobian_fd(model, g(x), g(y)) == pytest.approx(fd, rel=1e-6)


@given(seed=seeds)
def test_disc_distortion_formula(seed):
    model = Model.disc()
    x, y = random_points(model, 2, np.random.default_rng(seed), 0.8)
    assert diffeo_measure_ratio_fd(model, x, y) == pytest.approx(disc_measure_ratio(x, y), rel=1e-6)


def test_rotation_commutes_with_mobius_at_origin():
    k = planar_rotation(0.7)
    a, x = np.array([0.2, 0.1]), np.array([-0.3, 0.4])
    assert np.allclose(k(mobius(a, x)), mobius(k(a), k(x)))


def test_boundary_action_stays_on_sphere(disc, rng):
    b = random_boundary(disc, 10, rng)
    gb = apply_to_boundary(random_map(disc, rng), b)
    assert np.allclose(np.linalg.norm(gb, axis=-1), 1.0)


@pytest.mark.parametrize("bad", [[1.0, 0.0], [0.8, 0.8], [np.nan, 0.0]])
def test_outside_points_rejected(bad):
    with pytest.raises(DomainError):
        check_interior(np.array(bad))
    with pytest.raises(DomainError):
        apply_map(planar_rotation(0.1), np.array(bad))


def test_as_points_accepts_complex_and_scalars():
    assert np.allclose(as_points(Model.disc(), 0.1 + 0.2j), [0.1, 0.2])
    assert as_points(Model.interval(), 0.3).shape == (1,)
    with pytest.raises(ValueError):
        as_points(Model.ball(3), np.zeros(2))


@pytest.mark.parametrize("name,dim,rho", [("interval", 1, 0.0), ("disc", 2, 1.0), ("ball:5", 5, 4.0)])
def test_model_parse(name, dim, rho):
    m = Model.parse(name)
    assert (m.dim, m.rho, m.name) == (dim, rho, name)
    assert m.eigenvalue(2.0) == -(4.0 + rho**2)


@pytest.mark.parametrize("name", ["plane", "ball:2", "ball:x", ""])
def test_model_parse_rejects(name):
    with pytest.raises(ValueError):
        Model.parse(name)


def test_default_scales():
    assert Model.interval().spectral_scale == pytest.approx(1 / (2 * math.pi))
    assert Model.disc().spectral_scale == 1.0
    assert Model.ball(3).spectral_scale is None
