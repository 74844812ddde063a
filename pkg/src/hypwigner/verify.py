"""Verification suites: each check measures the defect of one identity."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .config import RunConfig, WGridConfig
from .functions import gaussian_bump
from .geometry import (
    Model,
    diffeo_measure_ratio_fd,
    disc_measure_ratio,
    geodesic_midpoint,
    midpoint_jacobian,
    midpoint_jacobian_fd,
    mobius,
    radial_coordinate,
    random_boundary,
    random_map,
    random_points,
    random_rotation,
)
from .harmonic import (
    boundary_pairing,
    invariant_operator_points,
    plane_wave,
    plane_wave_transform_rule_check,
    spherical_function_radial,
)
from .hft import (
    GridFunction,
    conjugate_symmetry_defect,
    covariance_defect,
    hft_forward,
    hft_inverse,
    multiplier_defect,
    plancherel_defect,
)
from .quadrature import OmegaGrid, build_omega_grid, build_spectral_grid
from .weyl import (
    ClassAFunction,
    Symbol,
    apply_operator,
    b_dependent_probe,
    class_a_coordinates,
    class_a_inverse,
    conjugation_defect,
    conjugation_matrix_defect,
    haar_spot_check,
    inversion_defect,
    kernel_covariance_defect,
    reconstruction_defect,
    unitarity_defect,
)
from .wigner import ProductKernel, Pullback, marginal_space, marginal_spectral, phase_space, wigner_grid, wigner_transform


@dataclass
class Check:
    name: str
    identity: str
    defect: float
    tolerance: float
    passed: bool | None

    @classmethod
    def of(cls, name: str, identity: str, defect: float, tolerance: float) -> "Check":
        defect = float(defect)
        return cls(name, identity, defect, tolerance, bool(defect < tolerance))

    @classmethod
    def report(cls, name: str, identity: str, defect: float) -> "Check":
        """Measured but not judged."""
        return cls(name, identity, float(defect), math.nan, None)

    def as_dict(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        status = {True: "PASS", False: "FAIL", None: "INFO"}[self.passed]
        tol = "" if self.passed is None else f" < {self.tolerance:.0e}"
        return f"{status} {self.name}: {self.defect:.3e}{tol}  [{self.identity}]"


def _radius(model: Model, t: float) -> float:
    """Config radii are in the curvature -1 distance; the interval coordinate
    xi = artanh x is half of that, so its w-grids stop at t / 2."""
    return 0.5 * t if model.dim == 1 else t


def _grid(model, g) -> OmegaGrid:
    return build_omega_grid(model, _radius(model, g.t_max), g.radial_order, g.angular_order)


def _wgrid(model, g) -> OmegaGrid:
    return wigner_grid(model, _radius(model, g.t_max), g.radial_order, g.angular_order)


# --------------------------------------------------------------------------
# geometry
# --------------------------------------------------------------------------


def jacobian_checks(cfg: RunConfig, stated_value: float | None = None) -> list[Check]:
    """Symmetry, G-invariance, closed form, defining identity and (disc) the
    distortion ratio.  ``stated_value`` adds a check J(0,0) = stated_value."""
    model = cfg.model_obj()
    n = model.dim
    rng = np.random.default_rng(cfg.seed)
    zero = np.zeros(n)
    out = []
    j00 = float(midpoint_jacobian(model, zero, zero))
    if stated_value is not None:
        out.append(Check.of("J(0,0) as stated", f"J(0,0) = {stated_value:g}", abs(j00 - stated_value), 1e-8))
    out.append(Check.of("J(0,0)", "J(0,0) = 2^n", abs(midpoint_jacobian_fd(model, zero, zero) - 2.0**n) / 2.0**n, 1e-8))
    x = random_points(model, 200, rng, 0.8)
    y = random_points(model, 200, rng, 0.8)
    fd = np.array([midpoint_jacobian_fd(model, a, b) for a, b in zip(x, y)])
    fd_swap = np.array([midpoint_jacobian_fd(model, b, a) for a, b in zip(x, y)])
    out.append(Check.of("symmetry", "J(x,y) = J(y,x)", np.max(np.abs(fd - fd_swap) / fd), 1e-7))
    inv = []
    for a, b, j in zip(x, y, fd):
        g = random_map(model, rng)
        inv.append(abs(midpoint_jacobian_fd(model, g(a), g(b)) - j) / j)
    out.append(Check.of("G-invariance", "J(gx,gy) = J(x,y)", max(inv), 1e-7))
    closed = midpoint_jacobian(model, x, y)
    out.append(Check.of("closed form", "J = 2^n cosh^{n-1} d(x,y) vs pushforward of x -> s_x y", np.max(np.abs(closed - fd) / fd), 1e-6))
    out.append(defining_identity_check(model))
    if n == 2:
        xs = random_points(model, 50, rng, 0.8)
        ys = random_points(model, 50, rng, 0.8)
        ratio = max(abs(diffeo_measure_ratio_fd(model, a, b) - disc_measure_ratio(a, b)) for a, b in zip(xs, ys))
        out.append(Check.of("disc distortion", "(x,y) -> (m_xy, phi_x y) ratio = (2-2Re(conj(x)y))/(2|1-conj(x)y|) sqrt((1-|x|^2)/(1-|y|^2))", ratio, 1e-6))
    return out


def defining_identity_check(model: Model, t_max: float = 8.0) -> Check:
    """int f(m_{z,y}) dmu(z) = int f(x) J(x,y) dmu(x) at y = 0.4 e1."""
    n = model.dim
    y = np.zeros(n)
    y[0] = 0.4
    c = np.zeros(n)
    c[-1] = 0.1
    f = gaussian_bump(model, c, 0.4)
    g = build_omega_grid(model, t_max, 192, 256 if n == 2 else 16)
    lhs = g.integrate(f(geodesic_midpoint(g.nodes, y)))
    rhs = g.integrate(f(g.nodes) * midpoint_jacobian(model, g.nodes, y))
    return Check.of("defining identity", "int f(m_{z,y}) dmu(z) = int f(x) J(x,y) dmu(x)", abs(lhs - rhs) / abs(rhs), 1e-4)


# --------------------------------------------------------------------------
# plane waves
# --------------------------------------------------------------------------


def planewave_checks(cfg: RunConfig) -> list[Check]:
    model = cfg.model_obj()
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for _ in range(50):
        lam = rng.uniform(-10, 10)
        b = random_boundary(model, 1, rng)[0]
        x = random_points(model, 1, rng, 0.8)[0]
        worst = max(worst, plane_wave_transform_rule_check(model, lam, b, random_map(model, rng), x))
    out = [Check.of("transform rule", "e_{lam,b}(gx) = e_{lam,b}(g0) e_{lam,g^-1 b}(x)", worst, 1e-9)]
    out += pairing_checks(model, rng)
    return out


def pairing_checks(model: Model, rng: np.random.Generator, count: int = 100) -> list[Check]:
    """int_B e_{lam,b}(x) e_{-lam,b}(y) db against Phi_lam(phi_y x) and Phi_lam(phi_x y)."""
    x = random_points(model, count, rng, 0.9)
    y = random_points(model, count, rng, 0.9)
    lam = rng.uniform(-10, 10, count)
    pairing = boundary_pairing(model, lam, x, y)
    t_yx = radial_coordinate(model, np.linalg.norm(mobius(y, x), axis=-1))
    t_xy = radial_coordinate(model, np.linalg.norm(mobius(x, y), axis=-1))
    return [
        Check.of("boundary pairing", "int_B e_{lam,b}(x) e_{-lam,b}(y) db = Phi_lam(phi_y x)", np.max(np.abs(pairing - spherical_function_radial(model, lam, t_yx))), 1e-8),
        Check.of("pairing swap", "int_B e_{lam,b}(x) e_{-lam,b}(y) db = Phi_lam(phi_x y)", np.max(np.abs(pairing - spherical_function_radial(model, lam, t_xy))), 1e-8),
    ]


def eigenvalue_checks(models, rng: np.random.Generator, h: float = 0.01, tol: float = 5e-3) -> list[Check]:
    """D e_{lam,b} = -(lam^2 + rho^2) e_{lam,b} by central differences."""
    out = []
    for model in models:
        worst = 0.0
        for _ in range(20):
            lam = rng.uniform(0.0, 4.0)
            b = random_boundary(model, 1, rng)[0]
            x = random_points(model, 1, rng, 0.5)
            e = lambda p: plane_wave(model, lam, b, p)
            lhs = invariant_operator_points(model, e, x, h)
            rhs = model.eigenvalue(lam) * e(x)
            worst = max(worst, float(np.max(np.abs(lhs - rhs) / np.abs(rhs))))
        out.append(Check.of(f"eigenvalue {model.kind}{'' if model.dim < 3 else model.dim}", f"D e = -(lam^2 + {model.rho ** 2:g}) e", worst, tol))
    return out


# --------------------------------------------------------------------------
# Helgason-Fourier transform
# --------------------------------------------------------------------------


def euclidean_check(cfg: RunConfig) -> Check:
    model = cfg.model_obj("interval")
    g = cfg.grid
    og = build_omega_grid(model, g.t_max, g.radial_order, 4)
    sg = build_spectral_grid(model, g.lam_max, g.lam_order, 2)
    f = GridFunction.sample(og, lambda x: np.exp(-np.arctanh(x[..., 0]) ** 2))
    F = hft_forward(f, sg).values
    keep = np.abs(sg.lam) <= 10.0
    oracle = math.sqrt(math.pi) * np.exp(-sg.lam[keep] ** 2 / 4.0)
    return Check.of("euclidean degeneration", "f(tanh xi) = exp(-xi^2) -> sqrt(pi) exp(-lam^2/4)", np.max(np.abs(F[keep] - oracle[:, None])), 1e-6)


def disc_bumps(model: Model) -> list:
    return [
        gaussian_bump(model, (0.0, 0.0), 0.6),
        gaussian_bump(model, (0.2, -0.1), 0.55),
        gaussian_bump(model, (-0.15, 0.25), 0.65),
    ]


def roundtrip_checks(cfg: RunConfig) -> list[Check]:
    model = cfg.model_obj("disc")
    g = cfg.grid
    og = build_omega_grid(model, g.t_max, g.radial_order, g.angular_order)
    sg = build_spectral_grid(model, g.lam_max, g.lam_order, g.b_order)
    rt, pl = 0.0, 0.0
    for bump in disc_bumps(model):
        f = GridFunction.sample(og, bump)
        back = hft_inverse(hft_forward(f, sg), og)
        rt = max(rt, float(np.max(np.abs(back.values - f.values)) / np.max(np.abs(f.values))))
        pl = max(pl, plancherel_defect(f, sg))
    return [
        Check.of("round trip", "||f - inverse(forward f)||_inf / ||f||_inf", rt, 1e-4),
        Check.of("plancherel", "int |f|^2 dmu = int int |f~|^2 drho", pl, 1e-5),
    ]


def hft_checks(cfg: RunConfig) -> list[Check]:
    out = [euclidean_check(cfg)] + roundtrip_checks(cfg)
    rng = np.random.default_rng(cfg.seed)
    model = cfg.model_obj()
    c = np.zeros(model.dim)
    c[0] = 0.1
    f = gaussian_bump(model, c, 0.5)
    og = build_omega_grid(model, 6.0, 64, {1: 4, 2: 256}.get(model.dim, 64))
    cov = max(covariance_defect(f, random_map(model, rng, 0.3), og, np.linspace(-5, 5, 11), random_boundary(model, 4, rng)) for _ in range(4))
    out.append(Check.of("transform covariance", "(f o g)~(lam,b) = f~(lam,gb) e_{-lam,b}(g^-1 0)", cov, 1e-6))
    if model.dim <= 2:
        g = cfg.grid
        og = build_omega_grid(model, g.t_max, g.radial_order, g.angular_order)
        sg = build_spectral_grid(model, g.lam_max, g.lam_order, g.b_order)
        h = gaussian_bump(model, np.full(model.dim, 0.05), 0.6)
        F = hft_forward(GridFunction.sample(og, h), sg)
        out.append(Check.of("conjugate symmetry", "f real => f~(-lam,b) = conj f~(lam,b)", conjugate_symmetry_defect(F), 1e-12))
        out.append(Check.of("fourier multiplier", "(Df)~ = -(lam^2 + rho^2) f~ (central differences, h = 1e-3)", multiplier_defect(h, og, sg, 1e-3), 1e-4))
    return out


# --------------------------------------------------------------------------
# Wigner transform
# --------------------------------------------------------------------------


def product_bumps(model: Model):
    n = model.dim
    cu = np.zeros(n)
    cv = np.zeros(n)
    cu[0], cv[0] = 0.1, -0.05
    if n > 1:
        cu[1], cv[1] = 0.05, 0.1
    return gaussian_bump(model, cu, 0.4), gaussian_bump(model, cv, 0.36)


def invariance_checks(cfg: RunConfig, count: int = 20) -> list[Check]:
    """W_{F o g}(x; lam, b) by the first form on a plain grid against
    W_F(gx; lam, gb) by the centred form on the aligned grid."""
    model = cfg.model_obj()
    rng = np.random.default_rng(cfg.seed)
    u, v = product_bumps(model)
    F = ProductKernel(u, v)
    grid = _wgrid(model, cfg.wigner)
    plain = build_omega_grid(model, _radius(model, cfg.wigner.t_max), 64, 128)
    lhs, rhs = [], []
    for _ in range(count):
        g = random_map(model, rng)
        gx = random_points(model, 1, rng, 0.4)[0]
        x = g.inverse()(gx)
        b = random_boundary(model, 1, rng)[0]
        gb = g.boundary(b)
        gb = gb / np.linalg.norm(gb)
        lam = rng.uniform(-4, 4)
        lhs.append(wigner_transform(Pullback(F, g), x, lam, b, plain, form="first", align=False)[0])
        rhs.append(wigner_transform(F, gx, lam, gb, grid)[0])
    lhs, rhs = np.array(lhs), np.array(rhs)
    return [Check.of("wigner invariance", "W_{F o g}(x;lam,b) = W_F(gx;lam,gb)", np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)), 1e-5)]


def _relative_where(value, ref, floor: float = 1e-4) -> float:
    mask = np.abs(ref) > floor
    return float(np.max(np.abs(value[mask] - ref[mask]) / np.abs(ref[mask]))) if mask.any() else 0.0


def marginality_checks(cfg: RunConfig) -> list[Check]:
    model = cfg.model_obj()
    ps, g = cfg.phase_space, cfg.grid
    og = build_omega_grid(model, ps.t_max, ps.radial_order, ps.angular_order)
    sg = build_spectral_grid(model, ps.lam_max, ps.lam_order, ps.b_order)
    wg = _wgrid(model, cfg.marginality_w)
    u, v = product_bumps(model)
    W = phase_space(ProductKernel(u, v), og, sg, wg)
    fine = build_omega_grid(model, g.t_max, g.radial_order, g.angular_order)
    ut = hft_forward(GridFunction.sample(fine, u), sg).values
    vt = hft_forward(GridFunction.sample(fine, v), sg).values
    spec = marginal_spectral(W).values
    space = marginal_space(W).values
    return [
        Check.of("spectral marginal", "int W_F |e_{lam,b}(x)|^2 dmu(x) = u~(lam,b) conj v~(lam,b)", _relative_where(spec, ut * np.conj(vt)), 1e-4),
        Check.of("space marginal", "int W_F |e_{lam,b}(x)|^2 drho = u(x) conj v(x)", _relative_where(space, u(og.nodes) * np.conj(v(og.nodes))), 1e-4),
    ]


# --------------------------------------------------------------------------
# Weyl calculus
# --------------------------------------------------------------------------


def _d(model: Model):
    return lambda x: radial_coordinate(model, np.linalg.norm(np.asarray(x, dtype=float), axis=-1))


def bump_symbol(model: Model, sigma: float = 1.0, s: float = 1.0) -> Symbol:
    """bump(delta(x)) exp(-lam^2 / s)."""
    d = _d(model)
    return Symbol.product(lambda x: np.exp(-0.5 * (d(x) / sigma) ** 2), lambda lam: np.exp(-np.asarray(lam) ** 2 / s))


def _lam_sg(cfg: RunConfig, model: Model, b_order: int = 4):
    return build_spectral_grid(model, cfg.grid.lam_max, cfg.grid.lam_order, b_order)


def inversion_checks(cfg: RunConfig) -> list[Check]:
    model = cfg.model_obj()
    n = model.dim
    rng = np.random.default_rng(cfg.seed)
    sg = _lam_sg(cfg, model)
    w = cfg.weyl
    grid = _wgrid(model, w)
    a = bump_symbol(model)
    g1 = np.linspace(-0.5, 0.5, 5)
    xs = np.array([[p, q] + [0.0] * (n - 2) for p in g1 for q in g1]) if n >= 2 else g1[:, None]
    lams = np.linspace(-3, 3, 8)
    bs = random_boundary(model, 8, rng)
    r = inversion_defect(a, xs, lams, bs, grid, sg)
    out = [
        Check.of("inversion", "W_{a~}(x;lam,b) = a(x;lam), a = bump(delta(x)) exp(-lam^2)", r["defect"], 1e-3),
        Check.of("b-independence", "W_{a~}(x;lam,b) = W_{a~}(x;lam,b')", r["b_spread"], 1e-3),
    ]
    flat = Symbol.of_lam(lambda lam: np.exp(-np.asarray(lam) ** 2))
    pts = np.zeros((2, n))
    if n >= 2:
        pts[1, 1] = 0.4
    else:
        pts[1, 0] = 0.4
    r = inversion_defect(flat, pts, lams, bs, grid, sg)
    out.append(Check.of("inversion, x-constant symbol", "W_{a~}(x;lam,b) = exp(-lam^2) at x = 0, 0.4 e_n", r["defect"], 1e-4))
    return out


def class_a_bump(model: Model, sigma_u: float = 0.7) -> ClassAFunction:
    d = _d(model)
    return ClassAFunction(model, lambda m, u: np.exp(-0.5 * d(m) ** 2) * np.exp(-0.5 * (d(u) / sigma_u) ** 2))


def reconstruction_checks(cfg: RunConfig) -> list[Check]:
    model = cfg.model_obj()
    rng = np.random.default_rng(cfg.seed)
    sg = _lam_sg(cfg, model)
    r = cfg.reconstruction
    grid = _wgrid(model, r)
    Y = random_points(model, 16, rng, 0.6)
    Z = random_points(model, 16, rng, 0.6)
    y = np.repeat(Y, 16, axis=0)
    z = np.tile(Z, (16, 1))
    out = [Check.of("reconstruction", "kernel of W_F = F for F(x,y) = A(m_xy, phi_x y)", reconstruction_defect(class_a_bump(model), y, z, sg, grid), 1e-3)]
    x = random_points(model, 100, rng, 0.9)
    yy = random_points(model, 100, rng, 0.9)
    m, u = class_a_coordinates(x, yy)
    X, Yb = class_a_inverse(m, u)
    out.append(Check.of("class A coordinates", "(m,u) -> (phi_m u, phi_m s_0 u) inverts (x,y) -> (m_xy, phi_{m_xy} x)", max(np.max(np.abs(X - x)), np.max(np.abs(Yb - yy))), 1e-9))
    return out


def unitarity_checks(cfg: RunConfig) -> list[Check]:
    model = cfg.model_obj()
    sg = _lam_sg(cfg, model)
    out = []
    wide = (_grid(model, cfg.unitarity_x), _grid(model, cfg.unitarity_w))
    narrow = (_grid(model, WGridConfig(6.0, 48, 64)), _grid(model, WGridConfig(6.0, 48, 96)))
    for label, a, grids in (("exp(-lam^2)", bump_symbol(model), wide), ("exp(-lam^2/4)", bump_symbol(model, 1.0, 4.0), narrow)):
        out.append(Check.of(f"unitarity {label}", f"int int |a|^2 drho dmu = int int |a~|^2 dmu dmu, a = bump(delta(x)) {label}", unitarity_defect(a, grids[0], grids[1], sg), 1e-3))
    d = _d(model)
    y = np.zeros(model.dim)
    y[0] = 0.3
    if model.dim > 1:
        y[1] = 0.2
    haar = haar_spot_check(model, lambda x: np.exp(-0.5 * d(x) ** 2), y, build_omega_grid(model, 8.0, 64, 64 if model.dim == 2 else 16), 16)
    out.append(Check.of("haar spot check", "int_K int f(k phi_x 0) = int_K int f(k phi_x m_{0y})", haar, 1e-4))
    return out


def b_dependent_checks(cfg: RunConfig) -> list[Check]:
    """Inversion defect for a b-dependent symbol, with a b-independent control
    run through the same double (lam, b) kernel.  Reported, not judged."""
    model = cfg.model_obj()
    rng = np.random.default_rng(cfg.seed)
    d = _d(model)
    e1 = np.zeros(model.dim)
    e1[0] = 1.0
    ab = Symbol(lambda x, lam, b: np.exp(-0.5 * d(x) ** 2) * np.exp(-lam**2) * (1.0 + 0.5 * (b @ e1)))
    a0 = Symbol(lambda x, lam, b: np.exp(-0.5 * d(x) ** 2) * np.exp(-lam**2) * np.ones(np.shape(b)[:-1]))
    sg = build_spectral_grid(model, 12.0, 96, cfg.grid.b_order)
    grid = wigner_grid(model, 6.0, 40, 32)
    xs = np.zeros((2, model.dim))
    xs[1, 0] = 0.2
    bs = random_boundary(model, 2, rng)
    lams = [0.0, 1.0, 2.0]
    return [
        Check.report("b-dependent probe", "max |W_{a~} - a|, a = bump exp(-lam^2)(1 + <b,e1>/2)", b_dependent_probe(ab, xs, lams, bs, grid, sg)),
        Check.report("b-dependent control", "same pipeline with a b-independent symbol", b_dependent_probe(a0, xs, lams, bs, grid, sg)),
    ]


def operator_checks(cfg: RunConfig) -> list[Check]:
    model = cfg.model_obj()
    rng = np.random.default_rng(cfg.seed)
    sg = _lam_sg(cfg, model)
    o = cfg.operators_w
    grid = _grid(model, o)
    n = model.dim
    u = gaussian_bump(model, np.full(n, 0.05), 0.5)
    sp = gaussian_bump(model, np.r_[-0.1, np.full(n - 1, 0.1)], 0.8)
    pts = random_points(model, 6, rng, 0.45)
    mult = apply_operator(Symbol.of_x(sp), u, pts, grid, sg, check=False)
    one = apply_operator(Symbol.of_lam(np.ones_like), u, pts, grid, sg, check=False)
    lap = apply_operator(Symbol.of_lam(lambda lam: model.eigenvalue(lam)), u, pts, grid, sg, check=False)
    fd = invariant_operator_points(model, u, pts, 0.01)
    out = [
        Check.of("multiplication operator", "a = a(x): Psi_a u = a u", np.max(np.abs(mult - sp(pts) * u(pts))), 1e-5),
        Check.of("unit symbol", "a = 1: Psi_a u = u", np.max(np.abs(one - u(pts))), 1e-5),
        Check.of("fourier multiplier", "a = -(lam^2 + rho^2): Psi_a u = D u (central differences, h = 0.01)", np.max(np.abs(lap - fd)) / np.max(np.abs(fd)), 1e-3),
    ]
    models = [cfg.model_obj("interval"), cfg.model_obj("disc"), cfg.model_obj("ball:3")]
    return out + eigenvalue_checks(models, rng)


def covariance_checks(cfg: RunConfig) -> list[Check]:
    model = cfg.model_obj()
    rng = np.random.default_rng(cfg.seed)
    sg = build_spectral_grid(model, cfg.grid.lam_max, cfg.grid.lam_order, cfg.grid.b_order)
    sp = gaussian_bump(model, np.r_[-0.1, np.full(model.dim - 1, 0.1)], 0.8)
    a = Symbol.product(sp, lambda lam: np.exp(-np.asarray(lam) ** 2))
    e = np.zeros(model.dim)
    e[0], e[-1] = 0.6, 0.8
    ab = Symbol(lambda x, lam, b: sp(x) * np.exp(-lam**2) * (1.0 + 0.3 * (b @ e)))
    Y = random_points(model, 12, rng, 0.5)
    Z = random_points(model, 12, rng, 0.5)
    kc, mc = 0.0, 0.0
    for _ in range(3):
        g = random_map(model, rng)
        kc = max(kc, kernel_covariance_defect(a, g, Y, Z, sg), kernel_covariance_defect(ab, g, Y, Z, sg))
        mc = max(mc, conjugation_matrix_defect(a, g, Y, sg), conjugation_matrix_defect(ab, g, Y[:6], sg))
    out = [
        Check.of("kernel covariance", "a~(gy,gz) = (a^g)~(y,z)", kc, 1e-4),
        Check.of("matrix conjugation", "U_g^* Psi_a U_g = Psi_{a^g} as node matrices", mc, 1e-3),
    ]
    u = gaussian_bump(model, np.full(model.dim, 0.05), 0.5)
    v = gaussian_bump(model, np.r_[-0.05, np.full(model.dim - 1, 0.1)], 0.45)
    og = build_omega_grid(model, 6.0, 48, 64)
    grid = build_omega_grid(model, 6.0, 96, 64)
    sgl = _lam_sg(cfg, model)
    g = random_map(model, rng, 0.3)
    out.append(Check.of("conjugation pairing", "<Psi_a U_g u, U_g v> = <Psi_{a^g} u, v>", conjugation_defect(a, g, u, v, og, grid, sgl), 1e-4))
    k = random_rotation(model, rng)
    out.append(Check.of("conjugation pairing, rotation", "<Psi_a U_k u, U_k v> = <Psi_{a^k} u, v>, a K-invariant", conjugation_defect(bump_symbol(model), k, u, v, og, grid, sgl), 1e-6))
    return out


SUITES = {
    "jacobian": jacobian_checks,
    "planewave": planewave_checks,
    "hft": hft_checks,
    "wigner-invariance": invariance_checks,
    "marginality": marginality_checks,
    "inversion": lambda cfg: inversion_checks(cfg) + reconstruction_checks(cfg),
    "unitarity": unitarity_checks,
    "covariance": covariance_checks,
    "operators": operator_checks,
}


def run_suite(name: str, cfg: RunConfig, probe: str | None = None) -> dict:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    if probe is not None and name != "unitarity":
        raise KeyError(f"probe {probe!r} belongs to the unitarity suite")
    if probe not in (None, "b-dependent"):
        raise KeyError(f"unknown probe {probe!r}")
    checks = b_dependent_checks(cfg) if probe else SUITES[name](cfg)
    judged = [c.passed for c in checks if c.passed is not None]
    return {
        "suite": name,
        "model": cfg.model,
        "config": cfg.name,
        "seed": cfg.seed,
        "probe": probe,
        "checks": [c.as_dict() for c in checks],
        "passed": all(judged),
        "report_only": not judged,
    }
