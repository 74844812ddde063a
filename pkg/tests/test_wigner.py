import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypwigner.functions import gaussian_bump
from hypwigner.geometry import random_boundary, random_map, random_points
from hypwigner.hft import GridFunction, hft_forward
from hypwigner.quadrature import build_omega_grid, build_spectral_grid
from hypwigner.verify import product_bumps
from hypwigner.wigner import (
    PhaseSpaceFunction,
    ProductKernel,
    Pullback,
    interpolate,
    marginal_space,
    marginal_spectral,
    phase_space,
    transformed_point,
    wigner_grid,
    wigner_transform,
)

from conftest import model_named

seeds = st.integers(0, 2**32 - 1)


@pytest.fixture(scope="module", params=["interval", "disc"])
def setup(request):
    m = model_named(request.param)
    u, v = product_bumps(m)
    return m, ProductKernel(u, v), wigner_grid(m, 4.0, 48, 64)


@settings(max_examples=15)
@given(seed=seeds)
def test_forms_agree(setup, seed):
    m, F, grid = setup
    rng = np.random.default_rng(seed)
    x = random_points(m, (), rng, 0.4)
    b = random_boundary(m, (), rng)
    lam = rng.uniform(-4, 4, 3)
    c = wigner_transform(F, x, lam, b, grid)
    scale = np.max(np.abs(c)) + 1e-3
    for form in ("first", "second"):
        assert np.max(np.abs(wigner_transform(F, x, lam, b, grid, form=form) - c)) / scale < 1e-9


@settings(max_examples=15)
@given(seed=seeds, alpha=st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_sesquilinear(setup, seed, alpha):
    m, F, grid = setup
    rng = np.random.default_rng(seed)
    x, b = random_points(m, (), rng, 0.4), random_boundary(m, (), rng)
    lam = [0.0, 1.3]
    assert np.allclose(wigner_transform(F.scaled(alpha), x, lam, b, grid), alpha * wigner_transform(F, x, lam, b, grid), atol=1e-13)


@settings(max_examples=15)
@given(seed=seeds)
def test_hermitian(setup, seed):
    m, F, grid = setup
    rng = np.random.default_rng(seed)
    x, b = random_points(m, (), rng, 0.4), random_boundary(m, (), rng)
    lam = rng.uniform(-4, 4, 4)
    w = wigner_transform(F, x, lam, b, grid)
    assert np.allclose(w, np.conj(wigner_transform(F.adjoint(), x, lam, b, grid)), atol=1e-9)


def test_real_for_u_equal_v(setup):
    m, F, grid = setup
    G = ProductKernel(F.u, F.u)
    x = np.full(m.dim, 0.1)
    b = np.eye(m.dim)[0]
    assert np.max(np.abs(wigner_transform(G, x, np.linspace(-3, 3, 7), b, grid).imag)) < 1e-12


def test_prefactor_is_lambda_independent(disc):
    # at lam = 0 the first form reduces to the plain reflection integral
    u, v = product_bumps(disc)
    F = ProductKernel(u, v)
    grid = build_omega_grid(disc, 4.0, 48, 64)
    x, b = np.array([0.1, -0.2]), np.array([0.0, 1.0])
    w0 = wigner_transform(F, x, 0.0, b, grid, form="first", align=False)[0]
    w1 = wigner_transform(F, x, [0.0, 2.0], b, grid, form="first", align=False)[0]
    assert w0 == pytest.approx(w1, abs=1e-15)


@pytest.mark.parametrize("name", ["interval", "disc"])
def test_invariance(name, rng):
    m = model_named(name)
    u, v = product_bumps(m)
    F = ProductKernel(u, v)
    grid = wigner_grid(m, 4.0, 48, 64)
    for _ in range(4):
        g = random_map(m, rng)
        x = random_points(m, (), rng, 0.3)
        b = random_boundary(m, (), rng)
        gx, gb = transformed_point(g, x, b)
        lam = rng.uniform(-4, 4, 3)
        lhs = wigner_transform(Pullback(F, g), x, lam, b, grid)
        rhs = wigner_transform(F, gx, lam, gb, grid)
        assert np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)) < 1e-5


@pytest.fixture(scope="module")
def interval_phase_space():
    m = model_named("interval")
    u, v = product_bumps(m)
    og = build_omega_grid(m, 3.0, 24, 4)
    sg = build_spectral_grid(m, 24.0, 96, 2)
    W = phase_space(ProductKernel(u, v), og, sg, wigner_grid(m, 3.0, 64, 4))
    return m, u, v, og, sg, W


def test_spectral_marginal(interval_phase_space):
    m, u, v, og, sg, W = interval_phase_space
    fine = build_omega_grid(m, 8.0, 96, 4)
    ut = hft_forward(GridFunction.sample(fine, u), sg).values
    vt = hft_forward(GridFunction.sample(fine, v), sg).values
    ref = ut * np.conj(vt)
    mask = np.abs(ref) > 1e-4
    got = marginal_spectral(W).values
    assert np.max(np.abs(got[mask] - ref[mask]) / np.abs(ref[mask])) < 1e-4


def test_space_marginal(interval_phase_space):
    m, u, v, og, sg, W = interval_phase_space
    ref = u(og.nodes) * np.conj(v(og.nodes))
    mask = np.abs(ref) > 1e-4
    got = marginal_space(W).values
    assert np.max(np.abs(got[mask] - ref[mask]) / np.abs(ref[mask])) < 1e-4


def test_zero_kernel(interval_phase_space):
    m, u, v, og, sg, _ = interval_phase_space
    W = phase_space(ProductKernel(u, lambda y: np.zeros(y.shape[:-1])), og, sg, wigner_grid(m, 3.0, 16, 4))
    assert np.all(marginal_space(W).values == 0)


def test_phase_space_shape_check(interval_phase_space):
    _, _, _, og, sg, W = interval_phase_space
    with pytest.raises(ValueError):
        PhaseSpaceFunction(og, sg, W.values[:-1])


def test_interpolate_reproduces_smooth_data(disc):
    og = build_omega_grid(disc, 5.0, 64, 64)
    f = gaussian_bump(disc, (0.1, 0.05), 0.6)
    fi = interpolate(GridFunction.sample(og, f))
    pts = random_points(disc, 20, np.random.default_rng(1), 0.6)
    assert np.max(np.abs(fi(pts) - f(pts))) < 1e-4
