"""Helgason-Fourier transform, spherical transform and normalisation calibration."""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from scipy.special import roots_legendre

from .functions import gaussian_bump, radial_bump
from .geometry import Model, MoebiusMap, apply_to_boundary
from .harmonic import invariant_operator_points, log_poisson, plancherel_base, plane_wave, spherical_function_radial
from .quadrature import (
    OmegaGrid,
    SpectralGrid,
    build_omega_grid,
    build_spectral_grid,
    integrate_values,
    lambda_rule,
)

SUPPORT_TOL = 1e-12
DECAY_TOL = 1e-10


class CalibrationError(RuntimeError):
    pass


@dataclass
class GridFunction:
    grid: OmegaGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape[0] != len(self.grid):
            raise ValueError("values do not match the grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite values")

    @classmethod
    def sample(cls, grid: OmegaGrid, f) -> "GridFunction":
        return cls(grid, np.asarray(f(grid.nodes)))

    def norm_sq(self) -> float:
        return float(np.real(integrate_values(self.grid.weights, np.abs(self.values) ** 2)))


@dataclass
class SpectralGridFunction:
    grid: SpectralGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape[:2] != self.grid.shape:
            raise ValueError("values do not match the spectral grid")

    def norm_sq(self) -> float:
        w = self.grid.weights
        return float(np.sum(w * np.abs(self.values) ** 2))


def _split_lambda(lam: np.ndarray):
    """Indices of the positive nodes and of their mirror images (GL is symmetric)."""
    pos = np.flatnonzero(lam > 0)
    neg = np.array([int(np.argmin(np.abs(lam + lam[i]))) for i in pos])
    if not np.allclose(lam[neg], -lam[pos], atol=1e-13):
        raise ValueError("lambda nodes are not symmetric")
    zero = np.flatnonzero(lam == 0)
    return pos, neg, zero


def _map_b(fn, nb: int, workers: int):
    if workers <= 1:
        return [fn(j) for j in range(nb)]
    with ThreadPoolExecutor(workers) as ex:
        return list(ex.map(fn, range(nb)))


def forward_matrix(model: Model, nodes, weights, values, lam, b, workers: int = 1) -> np.ndarray:
    """sum_i w_i f_i e_{-lam,b}(x_i) for columns f of ``values`` (N, m).

    Returns shape (L, B, m).  Uses e_{-lam} = conj(e_{lam}) to halve the
    trigonometric work.
    """
    values = np.asarray(values, dtype=complex)
    if values.ndim == 1:
        values = values[:, None]
    pos, neg, zero = _split_lambda(lam)
    wf = np.asarray(weights)[:, None] * values

    def one(j):
        lp = log_poisson(nodes, b[j])
        amp = np.exp(0.5 * model.rho * lp)[:, None] * wf
        ph = 0.5 * np.outer(lam[pos], lp)
        c = np.cos(ph) @ amp
        s = np.sin(ph) @ amp
        col = np.empty((len(lam), values.shape[1]), dtype=complex)
        col[pos] = c - 1j * s
        col[neg] = c + 1j * s
        if zero.size:
            col[zero] = amp.sum(axis=0)
        return col

    cols = _map_b(one, len(b), workers)
    return np.stack(cols, axis=1)


def inverse_matrix(model: Model, spec_weights, values, lam, b, nodes, workers: int = 1) -> np.ndarray:
    """sum_{k,j} W_kj F_kj e_{lam_k,b_j}(x) at the given nodes; values (L, B, m)."""
    values = np.asarray(values, dtype=complex)
    if values.ndim == 2:
        values = values[..., None]
    pos, neg, zero = _split_lambda(lam)
    G = np.asarray(spec_weights)[..., None] * values

    def one(j):
        lp = log_poisson(nodes, b[j])
        ph = 0.5 * np.outer(lp, lam[pos])
        gp, gn = G[pos, j], G[neg, j]
        acc = np.cos(ph) @ (gp + gn) + 1j * (np.sin(ph) @ (gp - gn))
        if zero.size:
            acc = acc + G[zero, j].sum(axis=0)[None, :]
        return np.exp(0.5 * model.rho * lp)[:, None] * acc

    parts = _map_b(one, len(b), workers)
    return np.sum(parts, axis=0)


# --------------------------------------------------------------------------
# angular modes of disc plane waves
# --------------------------------------------------------------------------


def _graded_half_circle(r: float, per_panel: int = 16, cap: float = 0.05):
    """Panels on [0, pi] refined geometrically towards 0, where the Poisson
    kernel at radius r peaks with width ~ 1 - r."""
    h = max(0.25 * (1.0 - r), 1e-14)
    edges = [0.0]
    while edges[-1] < np.pi:
        edges.append(min(np.pi, edges[-1] + min(h, cap)))
        h *= 2.0
    e = np.asarray(edges)
    xg, wg = roots_legendre(per_panel)
    half = 0.5 * np.diff(e)
    phi = (0.5 * (e[1:] + e[:-1]))[:, None] + half[:, None] * xg[None]
    w = half[:, None] * wg[None]
    return phi.ravel(), w.ravel()


def plane_wave_modes(lam, radii, m_max: int) -> np.ndarray:
    """gamma_m(lam, r) = (1/2 pi) int e_{lam,1}(r e^{i phi}) e^{-i m phi} d phi on the disc.

    e_{lam,b}(r e^{i theta}) = sum_m gamma_m(lam, r) e^{i m (theta - beta)}
    for b = e^{i beta}.  Returns shape (R, L, m_max + 1); gamma_{-m} = gamma_m.
    """
    lam = np.asarray(lam, dtype=float)
    m = np.arange(m_max + 1)
    out = np.empty((len(radii), len(lam), m_max + 1), dtype=complex)
    for i, r in enumerate(np.asarray(radii, dtype=float)):
        phi, w = _graded_half_circle(r)
        lp = np.log1p(-r * r) - np.log1p(r * r - 2.0 * r * np.cos(phi))
        e = np.exp(0.5 * lp[None, :] * (1.0 + 1j * lam[:, None]))
        out[i] = (e * (w / np.pi)) @ np.cos(np.outer(phi, m))
    return out


def _mode_index(n: int) -> np.ndarray:
    return np.fft.fftfreq(n, 1.0 / n).astype(int)


def _fourier(values, axis):
    """Coefficients c_m of sum_m c_m e^{i m theta} sampled uniformly along
    ``axis``; the Nyquist mode is split evenly between +-n/2."""
    n = values.shape[axis]
    c = np.fft.fft(values, axis=axis) / n
    return c, _mode_index(n)


def _circle_angles(points) -> np.ndarray:
    return np.arctan2(points[..., 1], points[..., 0])


def forward_modal(og: OmegaGrid, values, sg: SpectralGrid) -> np.ndarray:
    """Disc forward transform with exact angular integration of band-limited
    shell data.  Returns (L, B, m)."""
    values = np.asarray(values, dtype=complex)
    if values.ndim == 1:
        values = values[:, None]
    na, nr = og.angular_order, og.radial_order
    shell_w = np.zeros(nr)
    np.add.at(shell_w, og.radial_index, og.weights)
    v = values.reshape(nr, na, -1)
    c, modes = _fourier(v, axis=1)  # (R, M, m)
    radii = np.tanh(og.radial_nodes / 2.0)
    gam = plane_wave_modes(-sg.lam, radii, na // 2)  # (R, L, M+)
    g = gam[:, :, np.abs(modes)]  # (R, L, M)
    # sum over shells: A[l, M, m] = sum_i w_i c[i, M, m] g[i, l, M]
    A = np.einsum("i,imk,ilm->lmk", shell_w, c, g)
    beta = _circle_angles(sg.b)
    ph = np.exp(1j * np.outer(beta, modes))
    if na % 2 == 0:
        nyq = np.flatnonzero(np.abs(modes) == na // 2)
        ph[:, nyq] = np.cos(np.outer(beta, modes[nyq]))
    return np.einsum("jm,lmk->ljk", ph, A)


def inverse_modal(sg: SpectralGrid, values, nodes) -> np.ndarray:
    """Disc inverse transform treating f~(lam, .) as a trigonometric
    polynomial on the uniform boundary rule; exact in the boundary variable.
    Returns (N, m)."""
    values = np.asarray(values, dtype=complex)
    if values.ndim == 2:
        values = values[..., None]
    nb = len(sg.b)
    beta = _circle_angles(sg.b)
    if not np.allclose(np.diff(np.unwrap(beta)), 2 * np.pi / nb, atol=1e-12):
        raise ValueError("modal inverse needs the uniform boundary rule")
    # rotate so the first boundary node sits at angle 0
    c, modes = _fourier(values, axis=1)  # (L, M, m)
    c = c * np.exp(-1j * modes * beta[0])[None, :, None]
    G = sg.lam_weights[:, None, None] * c
    nodes = np.asarray(nodes, dtype=float)
    r = np.sqrt(np.sum(nodes * nodes, axis=-1))
    theta = _circle_angles(nodes)
    ur, inv = np.unique(np.round(r, 15), return_inverse=True)
    gam = plane_wave_modes(sg.lam, ur, nb // 2)[:, :, np.abs(modes)]  # (U, L, M)
    S = np.einsum("ulm,lmk->umk", gam, G)  # per radius, per mode
    ph = np.exp(1j * np.outer(theta, modes))
    if nb % 2 == 0:
        nyq = np.flatnonzero(np.abs(modes) == nb // 2)
        ph[:, nyq] = np.cos(np.outer(theta, modes[nyq]))
    return np.einsum("nm,nmk->nk", ph, S[inv])


def check_support(f: GridFunction, tol: float = SUPPORT_TOL, shells: int = 2) -> None:
    """Warn when f is not negligible on the outermost radial shells."""
    idx = f.grid.radial_index >= f.grid.radial_order - shells
    peak = float(np.max(np.abs(f.values[idx]))) if idx.any() else 0.0
    if peak > tol:
        warnings.warn(f"function not supported well inside the grid (|f| = {peak:.2e} near r_max)", stacklevel=3)


def _use_modal(model: Model, method: str, og: OmegaGrid | None = None) -> bool:
    if method not in ("auto", "modal", "dense"):
        raise ValueError(f"unknown method {method!r}")
    ok = model.dim == 2 and (og is None or og.uniform_shells)
    if method == "modal" and not ok:
        raise ValueError("modal evaluation needs the disc with uniform shells")
    return ok and method != "dense"


def hft_forward(f: GridFunction, sg: SpectralGrid, workers: int = 1, method: str = "auto") -> SpectralGridFunction:
    """f~(lam, b) = int f(x) e_{-lam,b}(x) dmu(x).

    On the disc the default ("auto") integrates each shell in angular Fourier
    modes; "dense" sums node by node.
    """
    check_support(f)
    g = f.grid
    if _use_modal(g.model, method, g):
        out = forward_modal(g, f.values, sg)[..., 0]
    else:
        out = forward_matrix(g.model, g.nodes, g.weights, f.values, sg.lam, sg.b, workers)[..., 0]
    return SpectralGridFunction(sg, out)


def check_decay(F: SpectralGridFunction, tol: float = DECAY_TOL) -> None:
    lam = F.grid.lam
    edge = np.abs(lam) >= np.max(np.abs(lam)) - 1e-12
    scale = max(1.0, float(np.max(np.abs(F.values))))
    peak = float(np.max(np.abs(F.values[edge])))
    if peak > tol * scale:
        warnings.warn(f"spectral data does not decay at |lam| = Lambda ({peak:.2e})", stacklevel=3)


def hft_inverse(F: SpectralGridFunction, og: OmegaGrid, workers: int = 1, method: str = "auto") -> GridFunction:
    """f(x) = int int f~(lam, b) e_{lam,b}(x) drho(lam, b)."""
    check_decay(F)
    sg = F.grid
    if _use_modal(sg.model, method):
        out = inverse_modal(sg, F.values, og.nodes)[..., 0]
    else:
        out = inverse_matrix(sg.model, sg.weights, F.values, sg.lam, sg.b, og.nodes, workers)[..., 0]
    return GridFunction(og, out)


def plancherel_defect(f: GridFunction, sg: SpectralGrid, workers: int = 1, method: str = "auto") -> float:
    """| ||f||^2 - ||f~||^2 | / ||f||^2 in L^2(dmu) and L^2(drho)."""
    lhs = f.norm_sq()
    if lhs == 0.0:
        return 0.0
    rhs = hft_forward(f, sg, workers, method).norm_sq()
    return abs(lhs - rhs) / lhs


def conjugate_symmetry_defect(F: SpectralGridFunction) -> float:
    """max |F(-lam, b) - conj F(lam, b)|; zero for transforms of real f."""
    lam = F.grid.lam
    mirror = np.array([int(np.argmin(np.abs(lam + l))) for l in lam])
    if not np.allclose(lam[mirror], -lam, atol=1e-12):
        raise ValueError("lam grid is not symmetric")
    return float(np.max(np.abs(F.values[mirror] - np.conj(F.values))))


def covariance_defect(f, g: MoebiusMap, og: OmegaGrid, lam, b) -> float:
    """max |(f o g)~(lam, b) - f~(lam, gb) e_{-lam,b}(g^{-1} 0)| relative to max |f~|.

    Both transforms are dense sums on ``og`` at the given (lam, b) nodes.
    """
    model = og.model
    lam = np.asarray(lam, dtype=float)
    b = np.atleast_2d(np.asarray(b, dtype=float))
    gb = apply_to_boundary(g, b)
    lhs = forward_matrix(model, og.nodes, og.weights, f(g(og.nodes))[:, None], lam, b)[..., 0]
    ft = forward_matrix(model, og.nodes, og.weights, f(og.nodes)[:, None], lam, gb)[..., 0]
    origin = g.inverse()(np.zeros(model.dim))
    factor = plane_wave(model, -lam[:, None], b[None, :, :], origin)
    rhs = ft * factor
    scale = float(np.max(np.abs(ft)))
    return float(np.max(np.abs(lhs - rhs)) / scale) if scale > 0 else 0.0


def multiplier_defect(f, og: OmegaGrid, sg: SpectralGrid, h: float = 0.01, method: str = "auto") -> float:
    """max |(Df)~ - eigenvalue(lam) f~| relative to max |eigenvalue f~|, D by
    central differences of step h (so the defect is O(h^2)).  Nodes whose
    stencil leaves the ball get D f = 0, so f must vanish there."""
    model = og.model
    inside = np.linalg.norm(og.nodes, axis=-1) < 1.0 - 2.0 * h
    dvals = np.zeros(len(og), dtype=complex)
    dvals[inside] = invariant_operator_points(model, f, og.nodes[inside], h)
    Df = GridFunction(og, dvals)
    lhs = hft_forward(Df, sg, method=method).values
    ft = hft_forward(GridFunction.sample(og, f), sg, method=method).values
    rhs = model.eigenvalue(sg.lam)[:, None] * ft
    return float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)))


# --------------------------------------------------------------------------
# spherical transform
# --------------------------------------------------------------------------


class NotKInvariant(ValueError):
    pass


def angular_spread(f: GridFunction) -> float:
    """max over shells of (max - min) of f, relative to max |f|."""
    v = f.values
    scale = float(np.max(np.abs(v))) if v.size else 0.0
    if scale == 0.0:
        return 0.0
    spread = 0.0
    for i in np.unique(f.grid.radial_index):
        s = v[f.grid.radial_index == i]
        spread = max(spread, float(np.max(np.abs(s - s[0]))))
    return spread / scale


def _phi_table(model: Model, lam, t):
    return spherical_function_radial(model, np.asarray(lam)[:, None], np.asarray(t)[None, :])


def spherical_forward(f: GridFunction, lam, tol: float = 1e-10) -> np.ndarray:
    """f~(lam) = int f Phi_{-lam} dmu for K-invariant f."""
    if angular_spread(f) > tol:
        raise NotKInvariant("function is not K-invariant on the grid")
    g = f.grid
    phi = _phi_table(g.model, -np.asarray(lam, dtype=float), g.radial_nodes)
    shell = np.zeros(g.radial_order, dtype=complex)
    np.add.at(shell, g.radial_index, g.weights * f.values)
    return phi @ shell


def spherical_inverse(values, lam, lam_weights, og: OmegaGrid) -> GridFunction:
    """f(x) = int f~(lam) Phi_lam(x) drho(lam); ``lam_weights`` include the density."""
    phi = _phi_table(og.model, lam, og.radial_nodes)
    shell = (np.asarray(lam_weights) * np.asarray(values)) @ phi
    return GridFunction(og, shell[og.radial_index])


# --------------------------------------------------------------------------
# calibration
# --------------------------------------------------------------------------


@dataclass
class CalibrationRecord:
    model: str
    kappa_spec: float
    roundtrip_error: float
    t_max: float
    radial_order: int
    angular_order: int
    lam_max: float
    lam_order: int
    b_order: int
    method: str
    errors: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def calibration_family(model: Model) -> list:
    """Five smooth bumps used to pin the spectral scale."""
    if model.dim == 1:
        c = [0.0, 0.2, -0.3, 0.1, 0.0]
        s = [1 / math.sqrt(2), 0.8, 0.9, 1.0, 1.2]
        return [gaussian_bump(model, [ci], si) for ci, si in zip(c, s)]
    if model.dim == 2:
        c = [(0.0, 0.0), (0.15, 0.0), (0.0, -0.2), (-0.1, 0.1), (0.0, 0.0)]
        s = [0.55, 0.6, 0.65, 0.6, 0.7]
        return [gaussian_bump(model, ci, si) for ci, si in zip(c, s)]
    return [radial_bump(model, s) for s in (0.5, 0.6, 0.7, 0.8, 0.9)]


def calibrate_normalization(
    model: Model,
    t_max: float = 8.0,
    radial_order: int = 96,
    angular_order: int = 128,
    lam_max: float = 24.0,
    lam_order: int = 192,
    b_order: int = 128,
    fail_above: float = 1e-3,
) -> CalibrationRecord:
    """Least-squares spectral scale making inverse(forward(f)) = f on a fixed
    family of bumps, with the base density shape of the model.

    The interval and disc use the full transform; Ball(n) uses the spherical
    transform on K-invariant bumps (a boundary grid on S^{n-1} is not needed).
    """
    base = model.with_scale(1.0)
    family = calibration_family(model)
    if model.dim <= 2:
        og = build_omega_grid(base, t_max, radial_order, angular_order)
        sg = build_spectral_grid(base, lam_max, lam_order, b_order)
        vals = np.stack([f(og.nodes) for f in family], axis=1)
        if model.dim == 2:
            F = forward_modal(og, vals, sg)
            rec = inverse_modal(sg, F, og.nodes)
        else:
            F = forward_matrix(base, og.nodes, og.weights, vals, sg.lam, sg.b)
            rec = inverse_matrix(base, sg.weights, F, sg.lam, sg.b, og.nodes)
        method = "helgason-fourier round trip"
    else:
        og = build_omega_grid(base, t_max, radial_order, 8)
        lam, lw = lambda_rule(lam_max, lam_order)
        lw = lw * plancherel_base(base, lam)
        vals = np.stack([f(og.nodes) for f in family], axis=1)
        cols = []
        for k in range(vals.shape[1]):
            ft = spherical_forward(GridFunction(og, vals[:, k]), lam)
            cols.append(spherical_inverse(ft, lam, lw, og).values)
        rec = np.stack(cols, axis=1)
        method = "spherical round trip"
    kappa = float(np.real(np.vdot(rec, vals)) / np.real(np.vdot(rec, rec)))
    errs = [float(np.max(np.abs(vals[:, k] - kappa * rec[:, k])) / np.max(np.abs(vals[:, k]))) for k in range(vals.shape[1])]
    record = CalibrationRecord(
        model.name, kappa, max(errs), t_max, radial_order, angular_order, lam_max, lam_order, b_order, method, errs
    )
    if record.roundtrip_error > fail_above:
        raise CalibrationError(f"best round-trip error {record.roundtrip_error:.3e} exceeds {fail_above:g}")
    return record
