"""Quadrature grids over the ball, its boundary sphere and the spectral side."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .geometry import DomainError, Model, radius_from_coordinate, sphere_surface

T_MAX_LIMIT = 12.0


@dataclass(frozen=True)
class SphereRule:
    """Nodes on S^{n-1} with weights summing to one."""

    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return len(self.weights)


def circle_rule(order: int, offset: float = 0.0) -> SphereRule:
    theta = offset + 2.0 * np.pi * np.arange(order) / order
    return SphereRule(np.stack([np.cos(theta), np.sin(theta)], -1), np.full(order, 1.0 / order))


def sphere_rule(dim: int, order: int) -> SphereRule:
    """Probability quadrature on S^{dim-1}.

    dim = 1 is the two-point sphere {-1, 1}; dim = 2 the uniform trapezoid
    with ``order`` nodes; dim >= 3 a product rule, Gauss-Jacobi in the polar
    cosine (order // 2 nodes) times a rule on S^{dim-2}.
    """
    if dim == 1:
        return SphereRule(np.array([[1.0], [-1.0]]), np.array([0.5, 0.5]))
    if dim == 2:
        return circle_rule(order)
    alpha = (dim - 3) / 2.0
    u, wu = roots_jacobi(max(order // 2, 2), alpha, alpha)
    wu = wu / wu.sum()
    inner = sphere_rule(dim - 1, order)
    s = np.sqrt(1.0 - u**2)
    nodes = np.concatenate(
        [u[:, None, None] * np.ones((1, len(inner), 1)), s[:, None, None] * inner.nodes[None]], axis=-1
    ).reshape(-1, dim)
    weights = (wu[:, None] * inner.weights[None]).ravel()
    return SphereRule(nodes, weights)


def graded_circle_rule(width: float, base_order: int = 64, per_panel: int = 8, cap: float = 0.2) -> SphereRule:
    """Circle rule clustered geometrically at angles 0 and pi.

    Resolves integrands with spikes of angular half-width ``width`` at +-e1,
    which is what plane waves e_{lam,b}(w) e_{-lam,b}(-w) look like for b = e1.
    Panels double in size up to ``cap``.  Falls back to the uniform rule when
    the spikes are wide.
    """
    if width >= 0.25:
        return circle_rule(base_order)
    edges = [0.0]
    h = width / 2.0
    while edges[-1] < np.pi / 2:
        edges.append(min(np.pi / 2, edges[-1] + min(h, cap)))
        h *= 2.0
    xg, wg = roots_legendre(per_panel)
    e = np.asarray(edges)
    half_w = 0.5 * np.diff(e)
    th = ((0.5 * (e[1:] + e[:-1]))[:, None] + half_w[:, None] * xg[None]).ravel()
    wt = (half_w[:, None] * wg[None]).ravel()
    # quarter [0, pi/2] mirrored to [-pi/2, pi/2], then shifted by pi
    half = np.concatenate([-th[::-1], th])
    whalf = np.concatenate([wt[::-1], wt])
    theta = np.concatenate([half, half + np.pi])
    w = np.concatenate([whalf, whalf]) / (2.0 * np.pi)
    return SphereRule(np.stack([np.cos(theta), np.sin(theta)], -1), w)


@dataclass(frozen=True)
class OmegaGrid:
    """Geodesic-polar grid with weights absorbing the invariant density.

    sum_i weights[i] f(nodes[i]) approximates the integral of f over the
    geodesic ball of radius t_max.
    """

    model: Model
    nodes: np.ndarray
    weights: np.ndarray
    t_max: float
    radial_order: int
    angular_order: int
    radial_nodes: np.ndarray
    radial_index: np.ndarray
    uniform_shells: bool = True

    def __len__(self):
        return len(self.weights)

    @property
    def t(self) -> np.ndarray:
        """Geodesic radius of every node."""
        return self.radial_nodes[self.radial_index]

    @property
    def r_max(self) -> float:
        return float(radius_from_coordinate(self.model, self.t_max))

    def integrate(self, values) -> complex:
        return integrate_values(self.weights, values)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow([f"x{j}" for j in range(self.model.dim)] + ["weight"])
            for x, wt in zip(self.nodes, self.weights):
                w.writerow([f"{v:.17g}" for v in x] + [f"{wt:.17g}"])


def radial_density(model: Model, t):
    """Invariant measure in geodesic-polar coordinates, per dt and per unit of
    (non-normalised) surface measure on S^{n-1}."""
    t = np.asarray(t, dtype=float)
    if model.dim == 1:
        return np.ones_like(t)
    return 0.5 * (0.5 * np.sinh(t)) ** (model.dim - 1)


def geodesic_ball_volume(model: Model, t_max: float) -> float:
    """Invariant volume of the geodesic ball, by adaptive 1-D quadrature."""
    from scipy.integrate import quad

    val, _ = quad(lambda t: float(radial_density(model, t)), 0.0, t_max, epsabs=0.0, epsrel=1e-13, limit=200)
    return val * sphere_surface(model.dim)


def build_omega_grid(
    model: Model,
    t_max: float = 8.0,
    radial_order: int = 96,
    angular_order: int = 128,
    sphere: SphereRule | Callable[[float], SphereRule] | None = None,
) -> OmegaGrid:
    """Gauss-Legendre in the geodesic radius times a rule on the sphere.

    ``sphere`` may be a callable of the radius t returning a per-shell rule.
    """
    if not 0.0 < t_max <= T_MAX_LIMIT:
        raise ValueError(f"t_max must lie in (0, {T_MAX_LIMIT}]")
    if radial_order < 4 or angular_order < 4:
        raise ValueError("orders must be >= 4")
    if radius_from_coordinate(model, t_max) > 1.0 - 1e-9:
        raise DomainError("t_max puts nodes within 1e-9 of the boundary")
    xg, wg = roots_legendre(radial_order)
    t = 0.5 * t_max * (xg + 1.0)
    wt = 0.5 * t_max * wg * radial_density(model, t) * sphere_surface(model.dim)
    uniform = sphere is None
    if sphere is None:
        sphere = sphere_rule(model.dim, angular_order)
    nodes, weights, idx = [], [], []
    for i, (ti, wi) in enumerate(zip(t, wt)):
        rule = sphere(ti) if callable(sphere) else sphere
        nodes.append(radius_from_coordinate(model, ti) * rule.nodes)
        weights.append(wi * rule.weights)
        idx.append(np.full(len(rule), i))
    return OmegaGrid(
        model,
        np.concatenate(nodes),
        np.concatenate(weights),
        float(t_max),
        radial_order,
        angular_order,
        t,
        np.concatenate(idx),
        uniform,
    )


def build_aligned_grid(
    model: Model, t_max: float, radial_order: int, angular_order: int, per_panel: int = 8
) -> OmegaGrid:
    """Grid whose shells are graded towards +-e1 (disc only; plain grid otherwise)."""
    if model.dim != 2:
        return build_omega_grid(model, t_max, radial_order, angular_order)

    def shell(t):
        r = math.tanh(t / 2.0)
        return graded_circle_rule((1.0 - r) / math.sqrt(max(r, 1e-300)), angular_order, per_panel)

    return build_omega_grid(model, t_max, radial_order, angular_order, sphere=shell)


@dataclass(frozen=True)
class SpectralGrid:
    """Product grid on R x B with the Plancherel density folded into the weights."""

    model: Model
    lam: np.ndarray
    lam_weights: np.ndarray
    b: np.ndarray
    b_weights: np.ndarray
    lam_max: float

    @property
    def shape(self):
        return (len(self.lam), len(self.b))

    @property
    def weights(self) -> np.ndarray:
        return self.lam_weights[:, None] * self.b_weights[None, :]

    def integrate(self, values) -> complex:
        return integrate_values(self.weights.ravel(), np.asarray(values).ravel())


def build_spectral_grid(model: Model, lam_max: float = 24.0, lam_order: int = 192, b_order: int = 128) -> SpectralGrid:
    from .harmonic import plancherel_density

    lam, wl = lambda_rule(lam_max, lam_order, graded=model.dim > 1)
    lw = wl * plancherel_density(model, lam)
    rule = sphere_rule(model.dim, b_order)
    return SpectralGrid(model, lam, lw, rule.nodes, rule.weights, float(lam_max))


def lambda_edges(lam_max: float) -> np.ndarray:
    """Panel edges on [0, lam_max]: 0, 1, 2, 4, then one panel to lam_max.

    The disc and ball densities have poles at lam = +-i, so a single
    Gauss-Legendre panel over a long interval converges only like
    exp(-2 N / lam_max).  Short panels near 0 keep the poles far (in the
    Bernstein-ellipse sense) from every panel, while the long outer panel
    keeps the efficiency Gauss-Legendre has on oscillatory integrands.
    """
    edges = [e for e in (0.0, 1.0, 2.0, 4.0) if e < lam_max]
    return np.asarray(edges + [float(lam_max)])


def lambda_rule(lam_max: float, lam_order: int, graded: bool = True):
    """Composite Gauss-Legendre rule on [-lam_max, lam_max], symmetric about 0.

    ``lam_order`` (even) nodes are shared between the panels of
    :func:`lambda_edges` in proportion to their width, with a floor of
    max(4, lam_order / 24) per panel.  Too few nodes for that falls back to
    a single panel, as does ``graded=False`` (right for the flat interval
    density).
    """
    if lam_order % 2 or lam_order < 2:
        raise ValueError("lam_order must be even and positive")
    e = lambda_edges(lam_max)
    width = np.diff(e)
    half = lam_order // 2
    floor = max(4, lam_order // 24)
    if not graded or half < floor * len(width):
        xg, wg = roots_legendre(lam_order)
        return lam_max * xg, lam_max * wg
    counts = np.full(len(width), floor)
    share = width / width.sum() * half
    for _ in range(half - counts.sum()):
        counts[int(np.argmax(share - counts))] += 1
    nodes, weights = [], []
    for a, b, k in zip(e[:-1], e[1:], counts):
        xg, wg = roots_legendre(int(k))
        nodes.append(0.5 * (b - a) * xg + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * wg)
    pos = np.concatenate(nodes)
    wpos = np.concatenate(weights)
    return np.concatenate([-pos[::-1], pos]), np.concatenate([wpos[::-1], wpos])


def integrate_values(weights, values) -> complex:
    """sum_i w_i v_i, accumulated with numpy's pairwise summation."""
    values = np.asarray(values)
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values.ravel()))[0])
        raise FloatingPointError(f"non-finite integrand at node {bad}")
    out = np.sum(np.asarray(weights) * values)
    return complex(out) if np.iscomplexobj(out) else float(out)


def integrate_omega(grid: OmegaGrid, f: Callable[[np.ndarray], np.ndarray]):
    try:
        values = f(grid.nodes)
    except Exception as exc:  # pragma: no cover - surfaced to the caller
        raise RuntimeError(f"integrand evaluation failed: {exc}") from exc
    return integrate_values(grid.weights, values)


def integrate_spectral(grid: SpectralGrid, F: Callable[[np.ndarray, np.ndarray], np.ndarray]):
    """F is called with lam of shape (L, 1) and b of shape (1, B, n)."""
    values = F(grid.lam[:, None], grid.b[None, :, :])
    values = np.broadcast_to(values, grid.shape)
    return integrate_values(grid.weights, values)
