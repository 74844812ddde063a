import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypwigner.functions import gaussian_bump
from hypwigner.geometry import geodesic_midpoint, hyperbolic_distance, random_boundary, random_map, random_points, random_rotation
from hypwigner.harmonic import spherical_function_radial
from hypwigner.quadrature import build_omega_grid, build_spectral_grid
from hypwigner.verify import bump_symbol, class_a_bump
from hypwigner.weyl import (
    SphericalTable,
    Symbol,
    SymbolNotBIndependent,
    WeylKernel,
    apply_operator,
    check_b_independent,
    class_a_coordinates,
    class_a_inverse,
    conjugation_defect,
    conjugation_matrix_defect,
    haar_spot_check,
    inversion_defect,
    kernel_covariance_defect,
    kernel_from_symbol,
    kernel_matrix,
    reconstruction_defect,
    unitarity_defect,
)
from hypwigner.wigner import wigner_grid

from conftest import model_named

seeds = st.integers(0, 2**32 - 1)


def lam_grid(m, b_order=4, lam_order=192):
    return build_spectral_grid(m, 24.0, lam_order, b_order)


@pytest.fixture(scope="module", params=["interval", "disc"])
def m(request):
    return model_named(request.param)


def test_product_symbol_ignores_b(m, rng):
    a = bump_symbol(m)
    assert a.b_independent and a.separable
    assert check_b_independent(a, m, np.full(m.dim, 0.1), 1.5, rng) < 1e-24


def test_b_dependent_symbol_detected(disc, rng):
    a = Symbol(lambda x, lam, b: np.exp(-lam**2) * (1 + b[..., 0]))
    assert check_b_independent(a, disc, np.zeros(2), 0.5, rng) > 1e-3
    with pytest.raises(SymbolNotBIndependent):
        a(np.zeros(2), 0.5)
    with pytest.raises(SymbolNotBIndependent):
        WeylKernel(a, lam_grid(disc), "fast")


@pytest.mark.parametrize("name", ["disc", "ball:3"])
def test_spherical_table_paths_agree(name):
    model = model_named(name)
    lam = np.linspace(-10, 10, 21)
    t = np.linspace(0, 6, 5000)
    exact = SphericalTable(model, lam, exact=True)(t)
    spline = SphericalTable(model, lam, max_unique=100)(t)
    assert np.max(np.abs(exact - spline)) < 1e-8
    assert np.allclose(exact[:, 10], spherical_function_radial(model, lam, t[10]).real)


def test_fast_and_slow_kernels_agree(m, rng):
    sg = lam_grid(m, 64 if m.dim == 2 else 2, 96)
    a = bump_symbol(m)
    y = random_points(m, 10, rng, 0.5)
    z = random_points(m, 10, rng, 0.5)
    fast = kernel_from_symbol(a, y, z, sg, "fast")
    slow = kernel_from_symbol(a, y, z, sg, "slow")
    assert np.max(np.abs(fast - slow)) < 1e-8 * np.max(np.abs(fast))


def test_class_a_kernel_depends_on_midpoint_and_distance(disc, rng):
    kern = WeylKernel(bump_symbol(disc), lam_grid(disc))
    y, z = random_points(disc, 2, rng, 0.5)
    k = random_rotation(disc, rng)
    assert kern(k(y), k(z)) == pytest.approx(kern(y, z), abs=1e-14)
    assert kern(y, z) == pytest.approx(kern.profile(geodesic_midpoint(z, y), hyperbolic_distance(disc, y, z)), abs=1e-14)


def test_kernel_matrix_hermitian(m, rng):
    kern = WeylKernel(bump_symbol(m), lam_grid(m))
    K = kernel_matrix(kern, random_points(m, 8, rng, 0.5))
    assert np.allclose(K, K.conj().T, atol=1e-14)


@settings(max_examples=25)
@given(seed=seeds)
def test_class_a_coordinates_invert(seed):
    model = model_named("disc")
    rng = np.random.default_rng(seed)
    x, y = random_points(model, 2, rng, 0.9)
    X, Y = class_a_inverse(*class_a_coordinates(x, y))
    assert np.allclose(X, x, atol=1e-9) and np.allclose(Y, y, atol=1e-9)


def test_class_a_function_is_k_invariant(disc, rng):
    F = class_a_bump(disc)
    mm = random_points(disc, 5, rng, 0.5)
    u = random_points(disc, 5, rng, 0.5)
    k = random_rotation(disc, rng)
    assert np.allclose(F.A(mm, k(u)), F.A(mm, u), atol=1e-12)


def test_inversion(m):
    sg = lam_grid(m)
    grid = wigner_grid(m, 3.5 if m.dim == 1 else 7.0, 64, 64)
    xs = np.array([[0.0] * m.dim, [0.3] + [0.1] * (m.dim - 1)])
    r = inversion_defect(bump_symbol(m), xs, np.linspace(-3, 3, 8), random_boundary(m, 3, np.random.default_rng(0)), grid, sg)
    assert r["defect"] < 1e-3
    assert r["b_spread"] < 1e-3


def test_inversion_rejects_b_dependent(disc):
    a = Symbol(lambda x, lam, b: np.exp(-lam**2) * (1 + b[..., 0]))
    with pytest.raises(SymbolNotBIndependent):
        inversion_defect(a, np.zeros((1, 2)), [0.0], np.eye(2)[:1], wigner_grid(disc, 2.0, 8, 8), lam_grid(disc))


def test_reconstruction_interval(interval, rng):
    sg = lam_grid(interval)
    grid = wigner_grid(interval, 4.0, 64, 4)
    y = random_points(interval, 6, rng, 0.6)
    z = random_points(interval, 6, rng, 0.6)
    assert reconstruction_defect(class_a_bump(interval), y, z, sg, grid) < 1e-3


def test_unit_and_multiplication_symbols(m, rng):
    sg = lam_grid(m)
    grid = build_omega_grid(m, 5.0, 96, 64 if m.dim == 2 else 4)
    u = gaussian_bump(m, np.full(m.dim, 0.05), 0.5)
    sp = gaussian_bump(m, np.r_[-0.1, np.full(m.dim - 1, 0.1)], 0.8)
    pts = random_points(m, 4, rng, 0.45)
    one = apply_operator(Symbol.of_lam(np.ones_like), u, pts, grid, sg, check=False)
    mult = apply_operator(Symbol.of_x(sp), u, pts, grid, sg, check=False)
    assert np.max(np.abs(one - u(pts))) < 1e-5
    assert np.max(np.abs(mult - sp(pts) * u(pts))) < 1e-5


def test_decay_warning(m):
    with pytest.warns(UserWarning, match="decay"):
        WeylKernel(Symbol.of_lam(np.ones_like), lam_grid(m))


@pytest.mark.parametrize("s", [1.0, 4.0])
def test_unitarity_interval(interval, s):
    # interval radii are half the disc ones (xi = artanh x)
    og = build_omega_grid(interval, 3.5, 48, 4)
    grid = build_omega_grid(interval, 5.0, 96, 4)
    assert unitarity_defect(bump_symbol(interval, 1.0, s), og, grid, lam_grid(interval)) < 1e-3


def test_haar_spot_check(disc):
    d = lambda x: 2 * np.arctanh(np.linalg.norm(x, axis=-1))
    og = build_omega_grid(disc, 8.0, 64, 64)
    assert haar_spot_check(disc, lambda x: np.exp(-0.5 * d(x) ** 2), np.array([0.3, 0.2]), og, 16) < 1e-4


@pytest.mark.parametrize("b_dependent", [False, True])
def test_kernel_covariance(disc, rng, b_dependent):
    sg = build_spectral_grid(disc, 24.0, 96, 64)
    sp = gaussian_bump(disc, (-0.1, 0.1), 0.8)
    if b_dependent:
        a = Symbol(lambda x, lam, b: sp(x) * np.exp(-lam**2) * (1 + 0.3 * b[..., 0]))
    else:
        a = Symbol.product(sp, lambda lam: np.exp(-lam**2))
    y = random_points(disc, 6, rng, 0.5)
    z = random_points(disc, 6, rng, 0.5)
    g = random_map(disc, rng)
    assert kernel_covariance_defect(a, g, y, z, sg) < 1e-4
    assert conjugation_matrix_defect(a, g, y[:4], sg) < 1e-3


def test_conjugation_pairing_interval(interval, rng):
    sg = lam_grid(interval)
    sp = gaussian_bump(interval, [-0.1], 0.8)
    a = Symbol.product(sp, lambda lam: np.exp(-lam**2))
    u = gaussian_bump(interval, [0.05], 0.5)
    v = gaussian_bump(interval, [-0.05], 0.45)
    og = build_omega_grid(interval, 6.0, 48, 4)
    grid = build_omega_grid(interval, 6.0, 96, 4)
    assert conjugation_defect(a, random_map(interval, rng, 0.3), u, v, og, grid, sg) < 1e-4
