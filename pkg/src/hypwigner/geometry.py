"""Hyperbolic geometry of the rank-one models in Harish-Chandra coordinates.

Every model is the open unit ball of R^n: n = 1 is the interval (-1, 1),
n = 2 the Poincare disc (points stored as 2-vectors, complex input accepted)
and n >= 3 the real hyperbolic ball.  Points are numpy arrays whose last axis
has length n; all functions broadcast over leading axes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

BOUNDARY_MARGIN = 1e-9
BOUNDARY_TOL = 1e-12


class DomainError(ValueError):
    """A point lies outside the open ball, or a boundary point is off the sphere."""


@dataclass(frozen=True)
class Model:
    """One of the rank-one models.

    ``spectral_scale`` is the constant multiplying the base Plancherel density
    (see :func:`hypwigner.harmonic.plancherel_density`).  The interval and disc
    carry verified defaults; the ball has none until calibrated.
    """

    dim: int
    spectral_scale: float | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")

    @classmethod
    def interval(cls, spectral_scale: float | None = 1.0 / (2.0 * math.pi)) -> "Model":
        return cls(1, spectral_scale)

    @classmethod
    def disc(cls, spectral_scale: float | None = 1.0) -> "Model":
        return cls(2, spectral_scale)

    @classmethod
    def ball(cls, n: int, spectral_scale: float | None = None) -> "Model":
        if n < 3:
            raise ValueError("Ball(n) requires n >= 3; use interval() or disc()")
        return cls(n, spectral_scale)

    @classmethod
    def parse(cls, name: str, spectral_scale: float | None = None) -> "Model":
        """Parse ``interval``, ``disc`` or ``ball:n``."""
        name = name.strip().lower()
        if name == "interval":
            return cls.interval() if spectral_scale is None else cls.interval(spectral_scale)
        if name == "disc":
            return cls.disc() if spectral_scale is None else cls.disc(spectral_scale)
        if name.startswith("ball:"):
            return cls.ball(int(name.split(":", 1)[1]), spectral_scale)
        raise ValueError(f"unknown model {name!r}")

    @property
    def kind(self) -> str:
        return {1: "interval", 2: "disc"}.get(self.dim, "ball")

    @property
    def name(self) -> str:
        return self.kind if self.dim <= 2 else f"ball:{self.dim}"

    @property
    def rho(self) -> float:
        """Exponent shift of the plane waves: 0, 1 and n - 1."""
        return float(self.dim - 1)

    def with_scale(self, spectral_scale: float) -> "Model":
        return Model(self.dim, spectral_scale)

    def eigenvalue(self, lam):
        """Eigenvalue of the invariant operator on the plane wave e_{lam,b}."""
        lam = np.asarray(lam, dtype=float)
        return -(lam**2 + self.rho**2)


def as_points(model: Model, x) -> np.ndarray:
    """Coerce input to an array of points with trailing axis ``model.dim``.

    Complex input is accepted for the disc, scalars for the interval.
    """
    x = np.asarray(x)
    if model.dim == 2 and np.iscomplexobj(x):
        return np.stack([x.real, x.imag], axis=-1).astype(float)
    x = x.astype(float)
    if model.dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        return x[..., None]
    if x.shape[-1] != model.dim:
        raise ValueError(f"expected trailing axis of length {model.dim}, got shape {x.shape}")
    return x


def to_complex(z: np.ndarray) -> np.ndarray:
    """Disc points as complex numbers."""
    z = np.asarray(z)
    return z[..., 0] + 1j * z[..., 1]


def _sq(x):
    return np.sum(x * x, axis=-1)


def check_interior(x: np.ndarray) -> np.ndarray:
    r2 = _sq(x)
    if np.any(~np.isfinite(r2)) or np.any(np.sqrt(r2) >= 1.0 - BOUNDARY_MARGIN):
        raise DomainError("point(s) not strictly inside the unit ball")
    return x


def check_boundary(b: np.ndarray) -> np.ndarray:
    if np.any(np.abs(np.sqrt(_sq(b)) - 1.0) > BOUNDARY_TOL):
        raise DomainError("boundary point(s) not on the unit sphere")
    return b


def mobius(a, x) -> np.ndarray:
    """The involutive symmetry phi_a swapping a and the origin.

    Also valid for boundary points x (|x| = 1), where it gives the continuous
    extension.  ``a`` and ``x`` broadcast against each other.
    """
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    ax = np.sum(a * x, axis=-1, keepdims=True)
    aa = np.sum(a * a, axis=-1, keepdims=True)
    xx = np.sum(x * x, axis=-1, keepdims=True)
    num = (1.0 - 2.0 * ax + xx) * a - (1.0 - aa) * x
    den = 1.0 - 2.0 * ax + aa * xx
    return num / den


def one_minus_sq_mobius(a, x) -> np.ndarray:
    """1 - |phi_a x|^2 without cancellation near the boundary."""
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    ax = np.sum(a * x, axis=-1)
    aa = np.sum(a * a, axis=-1)
    xx = np.sum(x * x, axis=-1)
    return (1.0 - aa) * (1.0 - xx) / (1.0 - 2.0 * ax + aa * xx)


# --------------------------------------------------------------------------
# isometries
# --------------------------------------------------------------------------


class MoebiusMap:
    """An isometry of the ball, built from symmetries and orthogonal maps."""

    def __call__(self, x) -> np.ndarray:
        raise NotImplementedError

    def boundary(self, b) -> np.ndarray:
        raise NotImplementedError

    def inverse(self) -> "MoebiusMap":
        raise NotImplementedError

    def __matmul__(self, other: "MoebiusMap") -> "Composite":
        return Composite((self, other))


@dataclass(frozen=True)
class GeodesicSymmetryAt(MoebiusMap):
    """phi_p: the involution exchanging p and 0."""

    p: np.ndarray

    def __call__(self, x):
        return mobius(self.p, x)

    def boundary(self, b):
        return mobius(self.p, b)

    def inverse(self):
        return self


@dataclass(frozen=True)
class Rotation(MoebiusMap):
    """An element k of K = O(n), acting linearly."""

    k: np.ndarray

    def __post_init__(self):
        k = np.atleast_2d(np.asarray(self.k, dtype=float))
        if k.shape[0] != k.shape[1] or not np.allclose(k.T @ k, np.eye(k.shape[0]), atol=1e-12):
            raise ValueError("rotation matrix must be orthogonal")
        object.__setattr__(self, "k", k)

    def __call__(self, x):
        return np.asarray(x, dtype=float) @ self.k.T

    boundary = __call__

    def inverse(self):
        return Rotation(self.k.T)


@dataclass(frozen=True)
class Composite(MoebiusMap):
    """g_1 o g_2 o ... o g_m, applied right to left."""

    maps: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))

    def __call__(self, x):
        for g in reversed(self.maps):
            x = g(x)
        return x

    def boundary(self, b):
        for g in reversed(self.maps):
            b = g.boundary(b)
        return b

    def inverse(self):
        return Composite(tuple(g.inverse() for g in reversed(self.maps)))


def identity(model: Model) -> Rotation:
    return Rotation(np.eye(model.dim))


def planar_rotation(angle: float, dim: int = 2) -> Rotation:
    """Rotation by ``angle`` in the (e1, e2) plane."""
    k = np.eye(dim)
    c, s = math.cos(angle), math.sin(angle)
    k[:2, :2] = [[c, -s], [s, c]]
    return Rotation(k)


def random_rotation(model: Model, rng: np.random.Generator) -> Rotation:
    """Haar-random element of O(n)."""
    n = model.dim
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return Rotation(q * np.sign(np.diag(r)))


def random_points(model: Model, size, rng: np.random.Generator, r_max: float = 0.9) -> np.ndarray:
    """Points drawn uniformly (in Lebesgue measure) from the ball of radius r_max."""
    size = (size,) if np.isscalar(size) else tuple(size)
    v = rng.standard_normal(size + (model.dim,))
    v /= np.linalg.norm(v, axis=-1, keepdims=True)
    r = r_max * rng.uniform(0.0, 1.0, size + (1,)) ** (1.0 / model.dim)
    return v * r


def random_boundary(model: Model, size, rng: np.random.Generator) -> np.ndarray:
    size = (size,) if np.isscalar(size) else tuple(size)
    v = rng.standard_normal(size + (model.dim,))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def random_map(model: Model, rng: np.random.Generator, r_max: float = 0.6) -> Composite:
    """k o phi_a with a random and k Haar-random."""
    a = random_points(model, (), rng, r_max)
    return Composite((random_rotation(model, rng), GeodesicSymmetryAt(a)))


# --------------------------------------------------------------------------
# operations on points
# --------------------------------------------------------------------------


def apply_map(g: MoebiusMap, x) -> np.ndarray:
    x = check_interior(np.asarray(x, dtype=float))
    return g(x)


def apply_to_boundary(g: MoebiusMap, b) -> np.ndarray:
    b = check_boundary(np.asarray(b, dtype=float))
    out = g.boundary(b)
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


def geodesic_symmetry(x, y) -> np.ndarray:
    """s_x y = phi_x(-phi_x y)."""
    return mobius(x, -mobius(x, y))


def geodesic_midpoint(x, y) -> np.ndarray:
    """m_{x,y}: move x to 0, halve the geodesic radius of y, move back."""
    u = mobius(x, y)
    half = u / (1.0 + np.sqrt(np.clip(1.0 - _sq(u), 0.0, None)))[..., None]
    return mobius(x, half)


def radial_coordinate(model: Model, r):
    """Geodesic radius of a point at Euclidean radius r.

    x = tanh(xi) on the interval; r = tanh(t/2) on the disc and ball.
    """
    r = np.asarray(r, dtype=float)
    return np.arctanh(r) if model.dim == 1 else 2.0 * np.arctanh(r)


def radius_from_coordinate(model: Model, t):
    t = np.asarray(t, dtype=float)
    return np.tanh(t) if model.dim == 1 else np.tanh(t / 2.0)


def hyperbolic_distance(model: Model, x, y):
    return radial_coordinate(model, np.sqrt(_sq(mobius(x, y))))


def invariant_density(model: Model, x):
    """(1 - |x|^2)^{-n}, the invariant measure against Lebesgue measure."""
    x = check_interior(as_points(model, x))
    return (1.0 - _sq(x)) ** (-model.dim)


def complex_distance(x):
    """delta(x) = |x| in every rank-one model."""
    return np.sqrt(_sq(np.asarray(x, dtype=float)))


def pair_distance(x, y):
    """delta(x, y) = delta(phi_x y)."""
    return complex_distance(mobius(x, y))


def midpoint_jacobian(model: Model, x, y):
    """J(x, y) = 2^n cosh^{n-1} d(x, y), with d the curvature -1 distance.

    This is the density of z -> m_{z,y} against the invariant measure; see
    :func:`midpoint_jacobian_fd` for the finite-difference definition it is
    validated against.
    """
    r2 = _sq(mobius(x, y))
    n = model.dim
    return 2.0**n * ((1.0 + r2) / (1.0 - r2)) ** (n - 1)


def jacobian_det_fd(f, x: np.ndarray, h: float = 1e-5) -> float:
    """|det Df(x)| by central differences for a map R^n -> R^n."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    cols = []
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        cols.append((f(x + e) - f(x - e)) / (2.0 * h))
    return abs(np.linalg.det(np.stack(cols, axis=-1)))


def midpoint_jacobian_fd(model: Model, x, y, h: float = 1e-5) -> float:
    """Pushforward density of x -> s_x y, since m_{z,y} = x iff z = s_x y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    det = jacobian_det_fd(lambda p: geodesic_symmetry(p, y), x, h)
    z = geodesic_symmetry(x, y)
    return float(invariant_density(model, z) * det / invariant_density(model, x))


def measure_ratio_fd(model: Model, g, x, h: float = 1e-5) -> float:
    """density(gx) |det Dg(x)| / density(x); equals 1 for isometries."""
    x = np.asarray(x, dtype=float)
    det = jacobian_det_fd(g, x, h)
    return float(invariant_density(model, g(x)) * det / invariant_density(model, x))


def diffeo_measure_ratio_fd(model: Model, x, y, h: float = 1e-5) -> float:
    """Measure distortion of (x, y) -> (m_{xy}, phi_x y) by finite differences."""
    n = model.dim
    xy = np.concatenate([np.asarray(x, float), np.asarray(y, float)])

    def f(p):
        a, b = p[..., :n], p[..., n:]
        return np.concatenate([geodesic_midpoint(a, b), mobius(a, b)], axis=-1)

    det = jacobian_det_fd(f, xy, h)
    out = f(xy)
    num = invariant_density(model, out[:n]) * invariant_density(model, out[n:])
    den = invariant_density(model, xy[:n]) * invariant_density(model, xy[n:])
    return float(num * det / den)


def disc_measure_ratio(x, y) -> float:
    """Closed form for the disc distortion of (x, y) -> (m_{xy}, phi_x y)."""
    zx, zy = complex(to_complex(x)), complex(to_complex(y))
    xy = zx.conjugate() * zy
    return float(
        (2.0 - 2.0 * xy.real) / (2.0 * abs(1.0 - xy)) * math.sqrt((1 - abs(zx) ** 2) / (1 - abs(zy) ** 2))
    )


def sphere_surface(n: int) -> float:
    """Surface measure of S^{n-1}; 2 for n = 1."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def points_to_list(x: np.ndarray) -> Sequence[float]:
    return [float(v) for v in np.ravel(x)]
