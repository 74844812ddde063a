import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hypwigner.geometry import Model, hyperbolic_distance, random_boundary, random_map, random_points
from hypwigner.harmonic import (
    DensityNotCalibrated,
    ball_scale_guess,
    boundary_pairing,
    invariant_operator_apply,
    invariant_operator_at,
    invariant_operator_points,
    plancherel_base,
    plancherel_density,
    plane_wave,
    plane_wave_modulus_sq,
    plane_wave_transform_rule_check,
    spherical_function,
    spherical_function_at_point,
    spherical_function_radial,
)

seeds = st.integers(0, 2**32 - 1)
lams = st.floats(-10.0, 10.0, allow_nan=False)


@pytest.mark.parametrize("name", ["interval", "disc", "ball:3"])
@given(seed=seeds, lam=lams)
def test_transform_rule(name, seed, lam):
    model = Model.parse(name, 1.0)
    rng = np.random.default_rng(seed)
    b = random_boundary(model, (), rng)
    x = random_points(model, (), rng, 0.8)
    assert plane_wave_transform_rule_check(model, lam, b, random_map(model, rng), x) < 1e-9


@given(seed=seeds, lam=lams)
def test_negative_lambda_is_conjugate(seed, lam):
    model = Model.disc()
    rng = np.random.default_rng(seed)
    b = random_boundary(model, (), rng)
    x = random_points(model, (), rng)
    assert np.allclose(plane_wave(model, -lam, b, x), np.conj(plane_wave(model, lam, b, x)))
    assert abs(plane_wave(model, lam, b, x)) ** 2 == pytest.approx(plane_wave_modulus_sq(model, b, x))


def test_interval_plane_waves_are_exponentials(interval):
    xi = np.linspace(-2, 2, 9)
    x = np.tanh(xi)[:, None]
    assert np.allclose(plane_wave(interval, 1.5, [1.0], x), np.exp(1.5j * xi))
    assert np.allclose(plane_wave(interval, 1.5, [-1.0], x), np.exp(-1.5j * xi))


@pytest.mark.parametrize("name", ["disc", "ball:3", "ball:4"])
def test_radial_phi_matches_boundary_average(name):
    model = Model.parse(name)
    x = np.array([[0.1] + [0.0] * (model.dim - 1), [0.0] * (model.dim - 1) + [0.6]])
    lam = np.array([0.0, 1.7, 6.0])[:, None]
    avg = spherical_function(model, lam, x[None], tol=1e-12)
    assert np.allclose(avg, spherical_function_at_point(model, lam, x[None]), atol=1e-10)


@given(st.floats(0.01, 8.0), st.floats(0.0, 30.0))
def test_ball3_phi_closed_form(t, lam):
    expect = math.sin(lam * t / 2) / ((lam / 2) * math.sinh(t)) if lam > 1e-6 else t / math.sinh(t)
    assert spherical_function_radial(Model.ball(3), lam, t).real == pytest.approx(expect, abs=1e-11)


@given(st.floats(0.0, 8.0), st.floats(-20.0, 20.0))
def test_phi_even_and_bounded(t, lam):
    model = Model.disc()
    phi = spherical_function_radial(model, lam, t)
    assert phi == pytest.approx(spherical_function_radial(model, -lam, t), abs=1e-13)
    assert abs(phi) <= 1 + 1e-12


def test_phi_at_origin(model):
    assert np.allclose(spherical_function_radial(model, np.linspace(-9, 9, 7), 0.0), 1.0)


@pytest.mark.parametrize("name", ["interval", "disc", "ball:3"])
def test_boundary_pairing_is_phi_of_distance(name, rng):
    model = Model.parse(name)
    x = random_points(model, 20, rng, 0.9)
    y = random_points(model, 20, rng, 0.9)
    lam = rng.uniform(-10, 10, 20)
    t = hyperbolic_distance(model, x, y)
    assert np.max(np.abs(boundary_pairing(model, lam, x, y) - spherical_function_radial(model, lam, t))) < 1e-8


def test_plancherel_base_shapes():
    lam = np.array([0.0, 1.0, 5.0])
    assert np.allclose(plancherel_base(Model.interval(), lam), 1.0)
    assert np.allclose(plancherel_base(Model.disc(), lam), lam / (4 * math.pi) * np.tanh(math.pi * lam / 2))
    # |Gamma(1 + i lam/2) / Gamma(i lam/2)|^2 = lam^2 / 4
    assert np.allclose(plancherel_base(Model.ball(3), lam), lam**2 / 4)


def test_uncalibrated_ball_density_raises():
    with pytest.raises(DensityNotCalibrated):
        plancherel_density(Model.ball(3), 1.0)


@pytest.mark.parametrize("n,expect", [(1, 1 / (2 * math.pi)), (3, 1 / math.pi**2)])
def test_ball_scale_guess(n, expect):
    assert ball_scale_guess(n) == pytest.approx(expect, rel=1e-14)


def test_ball_scale_guess_reproduces_disc_density():
    # the Gamma-ratio shape at n = 2 is (lam/2) tanh(pi lam/2)
    lam = np.linspace(0.1, 10, 7)
    shape = lam / 2 * np.tanh(math.pi * lam / 2)
    assert np.allclose(ball_scale_guess(2) * shape, plancherel_density(Model.disc(), lam), rtol=1e-14)


@pytest.mark.parametrize("name", ["interval", "disc", "ball:3"])
@given(seed=seeds, lam=st.floats(0.0, 4.0))
def test_plane_wave_eigenfunction(name, seed, lam):
    model = Model.parse(name)
    rng = np.random.default_rng(seed)
    b = random_boundary(model, (), rng)
    x = random_points(model, 3, rng, 0.5)
    e = lambda p: plane_wave(model, lam, b, p)
    got = invariant_operator_points(model, e, x, 0.005)
    assert np.allclose(got, model.eigenvalue(lam) * e(x), rtol=2e-3, atol=1e-4)


def test_stencil_variants_agree(disc):
    b = np.array([0.6, 0.8])
    e = lambda p: plane_wave(disc, 2.0, b, p)
    x = np.array([0.2, -0.1])
    assert invariant_operator_at(disc, e, x, 0.01) == pytest.approx(invariant_operator_points(disc, e, x, 0.01), rel=1e-12)


def test_operator_rejects_coarse_grid(disc):
    with pytest.raises(ValueError):
        invariant_operator_apply(disc, np.zeros((5, 5)), 0.1)
