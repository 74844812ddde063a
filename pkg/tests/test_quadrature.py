import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hypwigner.geometry import DomainError, Model, radial_coordinate
from hypwigner.quadrature import (
    build_aligned_grid,
    build_omega_grid,
    build_spectral_grid,
    geodesic_ball_volume,
    graded_circle_rule,
    integrate_omega,
    integrate_values,
    lambda_edges,
    lambda_rule,
    sphere_rule,
)


@pytest.mark.parametrize("dim,order", [(1, 2), (2, 16), (3, 16), (4, 12), (5, 8)])
def test_sphere_rule_is_probability(dim, order):
    rule = sphere_rule(dim, order)
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-14)
    assert np.allclose(np.linalg.norm(rule.nodes, axis=-1), 1.0)


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_sphere_rule_second_moments(dim):
    rule = sphere_rule(dim, 16)
    m = np.einsum("w,wi,wj->ij", rule.weights, rule.nodes, rule.nodes)
    assert np.allclose(m, np.eye(dim) / dim, atol=1e-14)


def test_graded_circle_rule_integrates_trig():
    rule = graded_circle_rule(1e-3)
    theta = np.arctan2(rule.nodes[:, 1], rule.nodes[:, 0])
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-13)
    assert rule.weights @ np.cos(theta) ** 2 == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("name,t_max", [("interval", 3.0), ("disc", 4.0), ("ball:3", 3.0)])
def test_omega_grid_volume(name, t_max):
    model = Model.parse(name, 1.0)
    g = build_omega_grid(model, t_max, 32, 16)
    assert g.weights.sum() == pytest.approx(geodesic_ball_volume(model, t_max), rel=1e-12)
    assert np.allclose(radial_coordinate(model, np.linalg.norm(g.nodes, axis=-1)), g.t)


def test_disc_volume_closed_form():
    # area of a geodesic disc with the stated measure normalisation
    g = build_omega_grid(Model.disc(), 2.0, 24, 8)
    assert g.weights.sum() == pytest.approx(math.pi * math.sinh(1.0) ** 2, rel=1e-12)


def test_aligned_grid_same_volume():
    model = Model.disc()
    a = build_aligned_grid(model, 3.0, 24, 32)
    p = build_omega_grid(model, 3.0, 24, 32)
    assert a.weights.sum() == pytest.approx(p.weights.sum(), rel=1e-12)
    assert len(a) > len(p)


@pytest.mark.parametrize("kw", [dict(t_max=0.0), dict(t_max=13.0), dict(radial_order=2), dict(angular_order=3)])
def test_omega_grid_rejects(kw):
    with pytest.raises(ValueError):
        build_omega_grid(Model.disc(), **{"t_max": 4.0, **kw})


def test_omega_grid_too_close_to_boundary():
    with pytest.raises(DomainError):
        build_omega_grid(Model.interval(), 11.0)


def test_lambda_edges():
    assert list(lambda_edges(24.0)) == [0.0, 1.0, 2.0, 4.0, 24.0]
    assert list(lambda_edges(3.0)) == [0.0, 1.0, 2.0, 3.0]


@given(st.sampled_from([8, 48, 96, 192]), st.floats(3.0, 40.0))
def test_lambda_rule_symmetric(order, lam_max):
    lam, w = lambda_rule(lam_max, order)
    assert len(lam) == order
    assert np.allclose(lam, -lam[::-1])
    assert np.allclose(w, w[::-1])
    assert w.sum() == pytest.approx(2 * lam_max, rel=1e-12)


@pytest.mark.parametrize("graded,rel", [(True, 1e-10), (False, 1e-13)])
def test_lambda_rule_integrates_gaussian(graded, rel):
    lam, w = lambda_rule(24.0, 192, graded)
    assert w @ np.exp(-lam**2) == pytest.approx(math.sqrt(math.pi), rel=rel)


def test_lambda_rule_odd_order():
    with pytest.raises(ValueError):
        lambda_rule(10.0, 7)


def test_spectral_grid_folds_density(disc):
    sg = build_spectral_grid(disc, 12.0, 48, 8)
    assert sg.shape == (48, 8)
    assert sg.integrate(np.ones(sg.shape)) == pytest.approx(np.sum(sg.lam_weights))
    assert np.all(sg.lam_weights > 0)


def test_integrate_values_rejects_nan():
    with pytest.raises(FloatingPointError):
        integrate_values(np.ones(3), np.array([1.0, np.nan, 2.0]))


def test_integrate_omega_gaussian_interval(interval):
    g = build_omega_grid(interval, 8.0, 96, 4)
    val = integrate_omega(g, lambda x: np.exp(-np.arctanh(x[..., 0]) ** 2))
    assert val == pytest.approx(math.sqrt(math.pi), rel=1e-12)
