"""Plane waves, spherical functions, Plancherel densities and the invariant
second-order operator of each model."""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, loggamma, roots_jacobi

from .geometry import MoebiusMap, Model, check_boundary, check_interior, radial_coordinate
from .quadrature import sphere_rule


class DensityNotCalibrated(RuntimeError):
    """The Plancherel density of Ball(n) needs a configured spectral scale."""


class QuadratureNotConverged(RuntimeError):
    pass


def log_poisson(x, b):
    """log((1 - |x|^2) / |x - b|^2), broadcasting x and b."""
    x = np.asarray(x, dtype=float)
    b = np.asarray(b, dtype=float)
    one_minus = 1.0 - np.sum(x * x, axis=-1)
    d = x - b
    return np.log(one_minus) - np.log(np.sum(d * d, axis=-1))


def plane_wave(model: Model, lam, b, x):
    """e_{lam,b}(x) = ((1 - |x|^2) / |x - b|^2)^{(rho + i lam)/2}.

    Evaluated in log space; lam broadcasts against the leading axes of b and x.
    """
    lp = log_poisson(x, b)
    lam = np.asarray(lam, dtype=float)
    return np.exp(0.5 * (model.rho + 1j * lam) * lp)


def plane_wave_modulus_sq(model: Model, b, x):
    """|e_{lam,b}(x)|^2, which does not depend on lam."""
    return np.exp(model.rho * log_poisson(x, b))


def plane_wave_transform_rule_check(model: Model, lam: float, b, g: MoebiusMap, x) -> float:
    """|e_{lam,b}(gx) - e_{lam,b}(g0) e_{lam,g^{-1}b}(x)|."""
    b = check_boundary(np.asarray(b, dtype=float))
    x = check_interior(np.asarray(x, dtype=float))
    zero = np.zeros(model.dim)
    ginv_b = g.inverse().boundary(b)
    ginv_b = ginv_b / np.linalg.norm(ginv_b)
    lhs = plane_wave(model, lam, b, g(x))
    rhs = plane_wave(model, lam, b, g(zero)) * plane_wave(model, lam, ginv_b, x)
    return float(np.max(np.abs(lhs - rhs)))


# --------------------------------------------------------------------------
# spherical functions
# --------------------------------------------------------------------------


def default_b_order(model: Model) -> int:
    return 128 if model.dim <= 2 else 32


def _b_average(model: Model, lam, x, order: int):
    rule = sphere_rule(model.dim, order)
    x = np.asarray(x, dtype=float)[..., None, :]
    lam = np.asarray(lam, dtype=float)[..., None]
    return np.sum(rule.weights * plane_wave(model, lam, rule.nodes, x), axis=-1)


def spherical_function(model: Model, lam, x, order: int | None = None, tol: float = 1e-8, max_order: int = 8192):
    """Phi_lam(x) as the boundary average of e_{lam,b}(x).

    The rule is doubled until two successive orders agree to ``tol``.
    """
    x = check_interior(np.asarray(x, dtype=float))
    order = order or default_b_order(model)
    prev = _b_average(model, lam, x, order)
    if model.dim == 1:
        return prev
    while order < max_order:
        order *= 2
        cur = _b_average(model, lam, x, order)
        if np.max(np.abs(cur - prev)) <= tol:
            return cur
        prev = cur
    raise QuadratureNotConverged(f"boundary average not converged at order {order}")


def _b_pairing(model: Model, lam, x, y, order: int):
    rule = sphere_rule(model.dim, order)
    lx = log_poisson(np.asarray(x, dtype=float)[..., None, :], rule.nodes)
    ly = log_poisson(np.asarray(y, dtype=float)[..., None, :], rule.nodes)
    lam = np.asarray(lam, dtype=float)[..., None]
    terms = np.exp(0.5 * model.rho * (lx + ly) + 0.5j * lam * (lx - ly))
    return np.sum(rule.weights * terms, axis=-1)


def boundary_pairing(model: Model, lam, x, y, order: int | None = None, tol: float = 1e-11, max_order: int = 16384):
    """int_B e_{lam,b}(x) e_{-lam,b}(y) db, doubling the rule until converged.

    Equals Phi_lam at the distance between x and y.
    """
    x = check_interior(np.asarray(x, dtype=float))
    y = check_interior(np.asarray(y, dtype=float))
    order = order or default_b_order(model)
    prev = _b_pairing(model, lam, x, y, order)
    if model.dim == 1:
        return prev
    while order < max_order:
        order *= 2
        cur = _b_pairing(model, lam, x, y, order)
        if np.max(np.abs(cur - prev)) <= tol:
            return cur
        prev = cur
    raise QuadratureNotConverged(f"boundary pairing not converged at order {order}")


@lru_cache(maxsize=64)
def _jacobi_rule(alpha: float, order: int):
    return roots_jacobi(order, alpha, alpha)


def _sinhc(x):
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    nz = np.abs(x) > 1e-8
    out[nz] = np.sinh(x[nz]) / x[nz]
    out[~nz] = 1.0 + x[~nz] ** 2 / 6.0
    return out


def spherical_function_radial(model: Model, lam, t, order: int | None = None):
    """Phi_lam at geodesic radius t from a one-dimensional Mehler-type integral.

    For n >= 2,
        Phi_lam(t) = c_n sinh(t)^{2-n} int_{-t}^{t} cos(lam v/2)
                     (2 cosh t - 2 cosh v)^{(n-3)/2} dv,
    c_n = Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2)), evaluated by Gauss-Jacobi
    with the endpoint behaviour as weight.  On the interval Phi_lam = cos(lam t).

    Returns an array of shape broadcast(lam, t).
    """
    lam = np.asarray(lam, dtype=float)
    t = np.asarray(t, dtype=float)
    if model.dim == 1:
        return np.cos(lam * t) + 0j
    n = model.dim
    alpha = (n - 3) / 2.0
    lt = float(np.max(np.abs(lam)) * np.max(t)) if lam.size and t.size else 0.0
    if order is None:
        order = int(min(2000, max(48, 0.6 * lt + 40)))
    s, w = _jacobi_rule(alpha, order)
    lam_b, t_b = np.broadcast_arrays(lam, t)
    tt = t_b[..., None]
    g = _sinhc(tt * (1 + s) / 2.0) * _sinhc(tt * (1 - s) / 2.0)
    integrand = np.cos(lam_b[..., None] * tt * s / 2.0) * g**alpha
    logc = gammaln(n / 2.0) - 0.5 * math.log(math.pi) - gammaln((n - 1) / 2.0)
    # sinh(t)^{2-n} t^{n-2} written with sinhc for stability at small t
    pref = math.exp(logc) * _sinhc(t_b) ** (2 - n)
    return (pref * np.sum(w * integrand, axis=-1)) + 0j


def spherical_function_at_point(model: Model, lam, x, order: int | None = None):
    """Phi_lam(x) via the radial formula (Phi is K-invariant)."""
    r = np.sqrt(np.sum(np.asarray(x, dtype=float) ** 2, axis=-1))
    return spherical_function_radial(model, lam, radial_coordinate(model, r), order)


# --------------------------------------------------------------------------
# Plancherel density
# --------------------------------------------------------------------------


def plancherel_base(model: Model, lam):
    """Density shape before the model's spectral scale is applied.

    interval: 1 (c = 1); disc: (lam / 4 pi) tanh(pi lam / 2);
    Ball(n): |Gamma((n - 1 + i lam)/2) / Gamma(i lam / 2)|^2.
    """
    lam = np.asarray(lam, dtype=float)
    if model.dim == 1:
        return np.ones_like(lam)
    if model.dim == 2:
        return lam / (4.0 * math.pi) * np.tanh(math.pi * lam / 2.0)
    n = model.dim
    out = np.zeros_like(lam)
    nz = lam != 0
    z = 0.5j * lam[nz]
    out[nz] = np.exp(2.0 * np.real(loggamma(0.5 * (n - 1) + z) - loggamma(z)))
    return out


def ball_scale_guess(n: int) -> float:
    """Spectral scale 2^{n-1} / ((4 pi)^{n/2} Gamma(n/2)) reproducing the
    interval (n = 1) and disc (n = 2) constants; validated by calibration."""
    return 2.0 ** (n - 1) / ((4.0 * math.pi) ** (n / 2.0) * math.gamma(n / 2.0))


def plancherel_density(model: Model, lam):
    """Plancherel density against d lam on the full line and db (probability)."""
    if model.spectral_scale is None:
        raise DensityNotCalibrated(
            f"Plancherel density for {model.name} is not calibrated; run calibrate_normalization"
        )
    return model.spectral_scale * plancherel_base(model, lam)


# --------------------------------------------------------------------------
# invariant operator
# --------------------------------------------------------------------------

MAX_STEP = 0.05


def invariant_operator_apply(model: Model, values: np.ndarray, h: float, origin=None) -> np.ndarray:
    """Apply the invariant operator to samples on a Cartesian grid.

    ``values`` has one axis per dimension with spacing ``h``; node (i, j, ...)
    sits at origin + h (i, j, ...).  Returns an array of the same shape with
    NaN on the outer layer and outside the ball.

    D f = (1 - |x|^2) [ (1 - |x|^2) Lap f + (2n - 4) x . grad f ]
    """
    if h > MAX_STEP:
        raise ValueError(f"grid too coarse: h = {h} > {MAX_STEP}")
    values = np.asarray(values)
    n = model.dim
    if values.ndim != n:
        raise ValueError("values must have one axis per dimension")
    origin = np.zeros(n) if origin is None else np.asarray(origin, dtype=float)
    axes = [origin[j] + h * np.arange(values.shape[j]) for j in range(n)]
    coords = np.meshgrid(*axes, indexing="ij")
    inner = tuple(slice(1, -1) for _ in range(n))
    lap = np.zeros_like(values[inner])
    drift = np.zeros_like(values[inner])
    for j in range(n):
        fwd = [slice(1, -1)] * n
        bwd = [slice(1, -1)] * n
        fwd[j] = slice(2, None)
        bwd[j] = slice(None, -2)
        fp, fm = values[tuple(fwd)], values[tuple(bwd)]
        lap = lap + (fp - 2.0 * values[inner] + fm) / h**2
        drift = drift + coords[j][inner] * (fp - fm) / (2.0 * h)
    one_minus = 1.0 - sum(c[inner] ** 2 for c in coords)
    out = np.full(values.shape, np.nan, dtype=np.result_type(values, float))
    res = one_minus * (one_minus * lap + (2 * n - 4) * drift)
    res = np.where(one_minus > 0, res, np.nan)
    out[inner] = res
    return out


def invariant_operator_at(model: Model, f, x, h: float = 0.01):
    """The invariant operator applied to a callable f at the point x, using a
    3^n stencil of the same central differences."""
    x = np.asarray(x, dtype=float)
    n = model.dim
    offsets = np.stack(np.meshgrid(*([np.arange(3)] * n), indexing="ij"), -1) - 1
    samples = f(x + h * offsets)
    out = invariant_operator_apply(model, samples, h, origin=x - h)
    return out[(1,) * n]


def invariant_operator_points(model: Model, f, x, h: float = 0.01) -> np.ndarray:
    """Same central differences as invariant_operator_at, vectorised over
    points x of shape (..., n)."""
    if h > MAX_STEP:
        raise ValueError(f"grid too coarse: h = {h} > {MAX_STEP}")
    x = np.asarray(x, dtype=float)
    n = model.dim
    f0 = f(x)
    lap = np.zeros_like(f0)
    drift = np.zeros_like(f0)
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        fp, fm = f(x + e), f(x - e)
        lap = lap + (fp - 2.0 * f0 + fm) / h**2
        drift = drift + x[..., j] * (fp - fm) / (2.0 * h)
    one_minus = 1.0 - np.sum(x * x, axis=-1)
    return one_minus * (one_minus * lap + (2 * n - 4) * drift)
