"""Weyl calculus: symbols, integral kernels, operators, inversion, unitarity."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .geometry import (
    Model,
    MoebiusMap,
    apply_to_boundary,
    geodesic_midpoint,
    geodesic_symmetry,
    hyperbolic_distance,
    mobius,
    random_boundary,
)
from .harmonic import log_poisson, spherical_function_radial
from .quadrature import OmegaGrid, SpectralGrid, sphere_rule
from .wigner import wigner_transform

DECAY_TOL = 1e-10


class SymbolNotBIndependent(ValueError):
    pass


# --------------------------------------------------------------------------
# symbols
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Symbol:
    """a(x; lam, b).

    ``fn(x, lam, b)`` broadcasts numpy-style: x has a trailing axis of length
    n, lam is scalar-per-entry, b has a trailing axis of length n (or is None
    for b-independent symbols).  ``spatial``/``spectral`` record a product
    structure a = spatial(x) spectral(lam) when there is one; kernels use it
    to avoid per-pair lam sums.
    """

    fn: Callable
    b_independent: bool = False
    spatial: Callable | None = None
    spectral: Callable | None = None

    def __call__(self, x, lam, b=None):
        if b is None and not self.b_independent:
            raise SymbolNotBIndependent("this symbol needs a boundary point")
        return self.fn(np.asarray(x, dtype=float), np.asarray(lam, dtype=float), b)

    @property
    def separable(self) -> bool:
        return self.spatial is not None and self.spectral is not None

    @classmethod
    def product(cls, spatial: Callable, spectral: Callable) -> "Symbol":
        """a(x; lam) = spatial(x) spectral(lam)."""

        def fn(x, lam, b=None):
            return spatial(x) * spectral(lam)

        return cls(fn, True, spatial, spectral)

    @classmethod
    def of_x(cls, spatial: Callable) -> "Symbol":
        return cls.product(spatial, lambda lam: np.ones_like(np.asarray(lam, dtype=float)))

    @classmethod
    def of_lam(cls, spectral: Callable) -> "Symbol":
        return cls.product(lambda x: np.ones(np.shape(x)[:-1]), spectral)

    def pullback(self, g: MoebiusMap) -> "Symbol":
        """a^g(x; lam, b) = a(gx; lam, gb)."""
        fn = self.fn
        if self.b_independent:
            sp = self.spatial

            def fn_g(x, lam, b=None):
                return fn(g(x), lam, None)

            spatial_g = (lambda x: sp(g(x))) if sp is not None else None
            return Symbol(fn_g, True, spatial_g, self.spectral)

        def fn_gb(x, lam, b):
            return fn(g(x), lam, apply_to_boundary(g, b))

        return Symbol(fn_gb, False)


def check_b_independent(a: Symbol, model: Model, x, lam, rng: np.random.Generator, samples: int = 8) -> float:
    """Spread of a(x; lam, b) over random b at fixed (x, lam)."""
    b = random_boundary(model, samples, rng)
    x = np.broadcast_to(np.asarray(x, dtype=float), (samples, model.dim))
    vals = a.fn(x, np.full(samples, float(lam)), b)
    return float(np.var(vals))


@dataclass(frozen=True)
class ClassAFunction:
    """F(x, y) = A(m_{xy}, phi_x y) with A(m, u) depending on u through |u|."""

    model: Model
    A: Callable

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return self.A(geodesic_midpoint(x, y), mobius(x, y))

    def profile(self, m, t):
        """A(m, u) at any u with geodesic radius t."""
        m = np.asarray(m, dtype=float)
        t = np.asarray(t, dtype=float)
        from .geometry import radius_from_coordinate

        u = np.zeros(np.broadcast_shapes(m.shape, t.shape + (self.model.dim,)))
        u[..., 0] = radius_from_coordinate(self.model, t)
        return self.A(m, u)


def product_class_a(model: Model, spatial: Callable, radial: Callable) -> ClassAFunction:
    """A(m, u) = spatial(m) radial(u) with radial K-invariant."""
    return ClassAFunction(model, lambda m, u: spatial(m) * radial(u))


# --------------------------------------------------------------------------
# spherical profiles
# --------------------------------------------------------------------------


class SphericalTable:
    """Phi_{lam_k}(t) for a fixed lam grid.

    Few distinct t values (rounded to 1e-10) are computed exactly and
    memoised, which suits centred grids; otherwise a table with
    spacing ``h`` and cubic interpolation in t is used (error ~ (h lam)^4).
    ``exact=True`` always computes directly.
    """

    def __init__(self, model: Model, lam, h: float = 2e-3, exact: bool = False, max_unique: int = 4096):
        self.model = model
        self.lam = np.asarray(lam, dtype=float)
        self.h = h
        self.exact = exact
        self.max_unique = max_unique
        self._spline = None
        self._t_hi = 0.0
        self._memo: dict[float, np.ndarray] = {}

    digits = 10

    def _memoized(self, uniq):
        missing = np.array([t for t in uniq if t not in self._memo])
        if missing.size:
            cols = self._direct(missing)
            if len(self._memo) + missing.size <= 16 * self.max_unique:
                self._memo.update(zip(missing.tolist(), cols.T))
            else:
                fresh = dict(zip(missing.tolist(), cols.T))
                return np.stack([self._memo.get(t, fresh.get(t)) for t in uniq.tolist()], axis=1)
        return np.stack([self._memo[t] for t in uniq.tolist()], axis=1)

    def _direct(self, t):
        out = np.empty((len(self.lam), len(t)))
        for s in range(0, len(t), 512):
            tt = t[s : s + 512]
            out[:, s : s + 512] = spherical_function_radial(self.model, self.lam[:, None], tt[None, :]).real
        return out

    def _build(self, t_hi: float):
        t_hi = max(t_hi, 1.0)
        grid = np.arange(0.0, t_hi + 4 * self.h, self.h)
        self._spline = CubicSpline(grid, self._direct(grid), axis=1)
        self._t_hi = grid[-1]

    def __call__(self, t) -> np.ndarray:
        """Array of shape (L,) + t.shape."""
        t = np.asarray(t, dtype=float)
        flat = t.ravel()
        key = np.round(flat, self.digits)
        uniq, inv = np.unique(key, return_inverse=True)
        if self.exact or len(uniq) <= self.max_unique:
            vals = self._memoized(uniq)[:, inv]
        else:
            if flat.max() > self._t_hi:
                self._build(float(flat.max()))
            vals = self._spline(flat)
        return vals.reshape((len(self.lam),) + t.shape)


def _lam_profile_weights(a: Symbol, sg: SpectralGrid):
    if a.spectral is None:
        return None
    return sg.lam_weights * a.spectral(sg.lam)


def check_lambda_decay(a: Symbol, sg: SpectralGrid, x=None, tol: float = DECAY_TOL) -> None:
    """Warn when the symbol is not small at |lam| = Lambda."""
    edge = np.array([-sg.lam_max, sg.lam_max])
    if a.spectral is not None:
        peak = float(np.max(np.abs(a.spectral(edge))))
    else:
        x = np.zeros(sg.model.dim) if x is None else np.asarray(x, dtype=float)
        b = None if a.b_independent else sg.b[:1]
        peak = float(np.max(np.abs(a.fn(x[None], edge, b))))
    if peak > tol:
        warnings.warn(f"symbol does not decay at |lam| = Lambda ({peak:.2e})", stacklevel=3)


# --------------------------------------------------------------------------
# kernels
# --------------------------------------------------------------------------


@dataclass
class WeylKernel:
    """Integral kernel a~(y, z) = int int a(m_{zy}; lam, b) e_{lam,b}(y) e_{-lam,b}(z) drho.

    For b-independent symbols the b-integral collapses to the spherical
    function, a~(y, z) = a_check(m_{zy}; d(y, z)) with
    a_check(m; t) = int a(m; lam) Phi_lam(t) drho(lam) ("fast").  The
    double integral is "slow".  Calls broadcast over leading axes.
    """

    a: Symbol
    sg: SpectralGrid
    method: str = "auto"
    exact: bool = False
    check: bool = True
    table: SphericalTable = field(init=False, repr=False)

    def __post_init__(self):
        if self.method not in ("auto", "fast", "slow"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "fast" and not self.a.b_independent:
            raise SymbolNotBIndependent("the fast kernel needs a b-independent symbol")
        if self.check:
            check_lambda_decay(self.a, self.sg)
        self.table = SphericalTable(self.sg.model, self.sg.lam, exact=self.exact)

    @property
    def model(self) -> Model:
        return self.sg.model

    def _fast_path(self) -> bool:
        return self.a.b_independent and self.method != "slow"

    def profile(self, m, t):
        """a_check(m; t) for broadcastable m (..., n) and t (...)."""
        m = np.asarray(m, dtype=float)
        t = np.asarray(t, dtype=float)
        shape = np.broadcast_shapes(m.shape[:-1], t.shape)
        t = np.broadcast_to(t, shape)
        phi = self.table(t)  # (L, ...)
        wl = _lam_profile_weights(self.a, self.sg)
        if self.a.separable:
            return self.a.spatial(m) * np.tensordot(wl, phi, axes=(0, 0))
        m = np.broadcast_to(m, shape + (m.shape[-1],))
        lam = self.sg.lam.reshape((-1,) + (1,) * len(shape))
        vals = self.a.fn(m[None], lam, None)  # (L, ...)
        return np.sum(self.sg.lam_weights.reshape(lam.shape) * vals * phi, axis=0)

    def __call__(self, y, z):
        y = np.asarray(y, dtype=float)
        z = np.asarray(z, dtype=float)
        y, z = np.broadcast_arrays(y, z)
        m = geodesic_midpoint(z, y)
        if self._fast_path():
            return self.profile(m, hyperbolic_distance(self.model, y, z))
        return self._slow(y, z, m)

    def _slow(self, y, z, m, chunk: int = 32):
        sg = self.sg
        rho = self.model.rho
        shape = y.shape[:-1]
        yf = y.reshape(-1, y.shape[-1])
        zf = z.reshape(-1, z.shape[-1])
        mf = m.reshape(-1, m.shape[-1])
        out = np.empty(len(yf), dtype=complex)
        lam = sg.lam[:, None, None]
        for s in range(0, len(yf), chunk):
            sl = slice(s, s + chunk)
            ly = log_poisson(yf[sl, None, :], sg.b)
            lz = log_poisson(zf[sl, None, :], sg.b)
            pw = np.exp(0.5 * rho * (ly + lz))[None] * np.exp(0.5j * lam * (ly - lz)[None])
            if self.a.b_independent:
                av = self.a.fn(mf[sl][None, :, :], sg.lam[:, None], None)[..., None]
            else:
                av = self.a.fn(mf[sl][None, :, None, :], lam, sg.b[None, None, :, :])
            out[sl] = np.einsum("kj,kpj->p", sg.weights, av * pw)
        return out.reshape(shape)


def kernel_from_symbol(a: Symbol, y, z, sg: SpectralGrid, method: str = "auto", exact: bool = False):
    """a~(y, z); see :class:`WeylKernel`."""
    return WeylKernel(a, sg, method, exact)(y, z)


def kernel_matrix(kernel: WeylKernel, nodes, weights=None) -> np.ndarray:
    """K[i, j] = a~(y_i, z_j) (times the quadrature weight of z_j if given)."""
    nodes = np.asarray(nodes, dtype=float)
    K = kernel(nodes[:, None, :], nodes[None, :, :])
    if weights is not None:
        K = K * np.asarray(weights)[None, :]
    return K


# --------------------------------------------------------------------------
# operators
# --------------------------------------------------------------------------


def apply_operator(
    a: Symbol, u: Callable, points, grid: OmegaGrid, sg: SpectralGrid, check: bool = True
) -> np.ndarray:
    """Psi_a u at ``points``, with u a callable.

    Centres the z-integral at each output point y (z = phi_y w, w on
    ``grid``), so d(y, z) = t_w and the spherical functions are needed only
    at the radial nodes of ``grid``:

        Psi_a u(y) = sum_w mu_w a_check(m_{phi_y w, y}; t_w) u(phi_y w)

    b-dependent symbols fall back to the double (lam, b) kernel.  Symbols
    that do not decay in lam (multipliers, polynomials) are exact on u whose
    transform vanishes beyond Lambda; pass ``check=False`` for them.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    kern = WeylKernel(a, sg, check=check)
    w = grid.nodes
    out = np.empty(len(points), dtype=complex)
    if a.b_independent:
        phi = kern.table(grid.radial_nodes)  # (L, R)
        if a.separable:
            radial = _lam_profile_weights(a, sg) @ phi
        for i, y in enumerate(points):
            z = mobius(y, w)
            m = geodesic_midpoint(z, y)
            if a.separable:
                prof = a.spatial(m) * radial[grid.radial_index]
            else:
                vals = a.fn(m[None], sg.lam[:, None], None)  # (L, N)
                prof = np.sum(sg.lam_weights[:, None] * vals * phi[:, grid.radial_index], axis=0)
            out[i] = np.sum(grid.weights * prof * u(z))
        return out
    for i, y in enumerate(points):
        z = mobius(y, w)
        out[i] = np.sum(grid.weights * kern(np.broadcast_to(y, z.shape), z) * u(z))
    return out


def translate(u: Callable, g: MoebiusMap) -> Callable:
    """U_g u (z) = u(g^{-1} z)."""
    ginv = g.inverse()
    return lambda z: u(ginv(np.asarray(z, dtype=float)))


def conjugation_defect(
    a: Symbol, g: MoebiusMap, u: Callable, v: Callable, og: OmegaGrid, grid: OmegaGrid, sg: SpectralGrid
) -> float:
    """|<Psi_a U_g u, U_g v> - <Psi_{a^g} u, v>| / (||u|| ||v||), inner products on og."""
    Ugu, Ugv = translate(u, g), translate(v, g)
    lhs = np.sum(og.weights * apply_operator(a, Ugu, og.nodes, grid, sg) * np.conj(Ugv(og.nodes)))
    rhs = np.sum(og.weights * apply_operator(a.pullback(g), u, og.nodes, grid, sg) * np.conj(v(og.nodes)))
    nu = np.sqrt(np.sum(og.weights * np.abs(u(og.nodes)) ** 2))
    nv = np.sqrt(np.sum(og.weights * np.abs(v(og.nodes)) ** 2))
    scale = nu * nv
    return float(abs(lhs - rhs) / scale) if scale > 0 else float(abs(lhs - rhs))


def conjugation_matrix_defect(a: Symbol, g: MoebiusMap, nodes, sg: SpectralGrid, method: str = "auto") -> float:
    """max |a~(g y_i, g z_j) - (a^g)~(y_i, z_j)| / max |a~|, i.e. U_g^* Psi_a U_g
    against Psi_{a^g} as node matrices."""
    nodes = np.asarray(nodes, dtype=float)
    gn = g(nodes)
    K1 = kernel_matrix(WeylKernel(a, sg, method), gn)
    K2 = kernel_matrix(WeylKernel(a.pullback(g), sg, method), nodes)
    scale = float(np.max(np.abs(K1)))
    return float(np.max(np.abs(K1 - K2)) / scale) if scale > 0 else 0.0


def kernel_covariance_defect(a: Symbol, g: MoebiusMap, y, z, sg: SpectralGrid, method: str = "auto") -> float:
    """max |a~(gy, gz) - (a^g)~(y, z)| over the given pairs, relative to max |a~|."""
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    k1 = WeylKernel(a, sg, method)(g(y), g(z))
    k2 = WeylKernel(a.pullback(g), sg, method)(y, z)
    scale = float(np.max(np.abs(k1)))
    return float(np.max(np.abs(k1 - k2)) / scale) if scale > 0 else 0.0


# --------------------------------------------------------------------------
# inversion and reconstruction
# --------------------------------------------------------------------------


def wigner_of_kernel(a: Symbol, x, lam, b, grid: OmegaGrid, sg: SpectralGrid, method: str = "auto"):
    """W_{a~}(x; lam, b) for an array of lam."""
    return wigner_transform(WeylKernel(a, sg, method), x, lam, b, grid)


def inversion_defect(a: Symbol, xs, lams, bs, grid: OmegaGrid, sg: SpectralGrid) -> dict:
    """max |W_{a~}(x; lam, b) - a(x; lam)| and the spread over b of W_{a~}."""
    if not a.b_independent:
        raise SymbolNotBIndependent("inversion holds for b-independent symbols")
    kern = WeylKernel(a, sg)
    lams = np.asarray(lams, dtype=float)
    worst, spread = 0.0, 0.0
    for x in np.atleast_2d(xs):
        target = a.fn(np.asarray(x)[None], lams, None)
        vals = np.stack([wigner_transform(kern, x, lams, b, grid) for b in np.atleast_2d(bs)])
        worst = max(worst, float(np.max(np.abs(vals - target[None]))))
        spread = max(spread, float(np.max(np.abs(vals - vals[:1]))))
    return {"defect": worst, "b_spread": spread}


def b_dependent_probe(a: Symbol, xs, lams, bs, grid: OmegaGrid, sg: SpectralGrid) -> float:
    """max |W_{a~}(x; lam, b) - a(x; lam, b)| for a b-dependent symbol.

    Reported only: nothing is claimed about its size.
    """
    kern = WeylKernel(a, sg, "slow")
    lams = np.asarray(lams, dtype=float)
    worst = 0.0
    for x in np.atleast_2d(xs):
        for b in np.atleast_2d(bs):
            target = a.fn(np.asarray(x)[None], lams, np.asarray(b)[None])
            val = wigner_transform(kern, x, lams, b, grid)
            worst = max(worst, float(np.max(np.abs(val - target))))
    return worst


@dataclass
class Reconstruction:
    """a~ built from a = W_F for F of class A, on a lam grid."""

    F: ClassAFunction
    sg: SpectralGrid
    grid: OmegaGrid

    def symbol_at(self, m) -> np.ndarray:
        """W_F(m; lam, e1) on the lam grid; b-independent for F of class A."""
        b = np.zeros(self.F.model.dim)
        b[0] = 1.0
        return wigner_transform(self.F, m, self.sg.lam, b, self.grid)

    def __call__(self, y, z):
        y = np.atleast_2d(np.asarray(y, dtype=float))
        z = np.atleast_2d(np.asarray(z, dtype=float))
        model = self.F.model
        m = geodesic_midpoint(z, y)
        t = hyperbolic_distance(model, y, z)
        phi = SphericalTable(model, self.sg.lam)(t)  # (L, P)
        out = np.empty(len(y), dtype=complex)
        for p in range(len(y)):
            out[p] = np.sum(self.sg.lam_weights * self.symbol_at(m[p]) * phi[:, p])
        return out


def kernel_of_wigner(F: ClassAFunction, y, z, sg: SpectralGrid, grid: OmegaGrid) -> np.ndarray:
    """Kernel of the operator whose symbol is W_F; equals F for F in class A."""
    return Reconstruction(F, sg, grid)(y, z)


def reconstruction_defect(F: ClassAFunction, y, z, sg: SpectralGrid, grid: OmegaGrid) -> float:
    """max |kernel_of_wigner(F) - F| over the pairs."""
    rec = kernel_of_wigner(F, y, z, sg, grid)
    return float(np.max(np.abs(rec - F(np.atleast_2d(y), np.atleast_2d(z)))))


def class_a_inverse(m, u):
    """(m, u) -> (phi_m u, phi_m s_0 u) = (phi_m u, phi_m(-u))."""
    m = np.asarray(m, dtype=float)
    u = np.asarray(u, dtype=float)
    return mobius(m, u), mobius(m, -u)


def class_a_coordinates(x, y):
    """(x, y) -> (m_{xy}, phi_{m_{xy}} x)."""
    m = geodesic_midpoint(x, y)
    return m, mobius(m, x)


# --------------------------------------------------------------------------
# unitarity
# --------------------------------------------------------------------------


def symbol_norm_sq(a: Symbol, og: OmegaGrid, sg: SpectralGrid) -> float:
    """int int |a(x; lam)|^2 drho(lam) dmu(x)."""
    if a.separable:
        sp = np.sum(og.weights * np.abs(a.spatial(og.nodes)) ** 2)
        return float(sp * np.sum(sg.lam_weights * np.abs(a.spectral(sg.lam)) ** 2))
    vals = a.fn(og.nodes[:, None, :], sg.lam[None, :], None)
    return float(np.sum(og.weights[:, None] * sg.lam_weights[None, :] * np.abs(vals) ** 2))


def kernel_norm_sq(a: Symbol, og: OmegaGrid, grid: OmegaGrid, sg: SpectralGrid) -> float:
    """int int |a~(x, y)|^2 dmu(x) dmu(y), with y = phi_x w and w on ``grid``."""
    kern = WeylKernel(a, sg)
    phi = kern.table(grid.radial_nodes)
    total = 0.0
    if a.separable:
        radial = (_lam_profile_weights(a, sg) @ phi)[grid.radial_index]
        wr = grid.weights * np.abs(radial) ** 2
        for x, wx in zip(og.nodes, og.weights):
            m = geodesic_midpoint(mobius(x, grid.nodes), x)
            total += wx * float(np.sum(wr * np.abs(a.spatial(m)) ** 2))
        return total
    for x, wx in zip(og.nodes, og.weights):
        y = mobius(x, grid.nodes)
        m = geodesic_midpoint(y, x)
        vals = a.fn(m[None], sg.lam[:, None], None)
        prof = np.sum(sg.lam_weights[:, None] * vals * phi[:, grid.radial_index], axis=0)
        total += wx * float(np.sum(grid.weights * np.abs(prof) ** 2))
    return total


def unitarity_defect(a: Symbol, og: OmegaGrid, grid: OmegaGrid, sg: SpectralGrid) -> float:
    """| ||a||^2 - ||a~||^2 | / ||a||^2 for a b-independent symbol."""
    if not a.b_independent:
        raise SymbolNotBIndependent("unitarity is stated for b-independent symbols")
    lhs = symbol_norm_sq(a, og, sg)
    if lhs == 0.0:
        return 0.0
    return abs(lhs - kernel_norm_sq(a, og, grid, sg)) / lhs


def haar_spot_check(model: Model, f: Callable, y, og: OmegaGrid, k_order: int = 64) -> float:
    """Relative gap between int_K int f(k phi_x 0) and int_K int f(k phi_x m_{0y})."""
    rule = sphere_rule(model.dim, k_order)
    p = geodesic_midpoint(np.zeros(model.dim), np.asarray(y, dtype=float))
    base = mobius(og.nodes, np.zeros(model.dim))
    moved = mobius(og.nodes, p)
    frames = [_rotation_to(model, b) for b in rule.nodes]
    lhs = sum(wk * np.sum(og.weights * f(base @ R.T)) for wk, R in zip(rule.weights, frames))
    rhs = sum(wk * np.sum(og.weights * f(moved @ R.T)) for wk, R in zip(rule.weights, frames))
    return float(abs(lhs - rhs) / abs(lhs))


def _rotation_to(model: Model, b):
    """An orthogonal map taking e1 to b; averaging over b samples K (for
    K-invariant integrands the stabiliser of e1 does not matter)."""
    n = model.dim
    if n == 1:
        return np.array([[float(np.sign(b[0]))]])
    if n == 2:
        c, s = b[0], b[1]
        return np.array([[c, -s], [s, c]])
    e1 = np.zeros(n)
    e1[0] = 1.0
    v = e1 - b
    nv = float(v @ v)
    return np.eye(n) if nv < 1e-30 else np.eye(n) - 2.0 * np.outer(v, v) / nv


def invariant_coordinates(model: Model, y, z):
    """(m_{yz}, d(y, z)): the data a class-A kernel depends on."""
    return geodesic_midpoint(y, z), hyperbolic_distance(model, y, z)


def symmetry_pair(x, y):
    """(s_x y, y): the pair at which W_F samples F."""
    return geodesic_symmetry(x, y), np.asarray(y, dtype=float)

