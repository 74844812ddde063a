"""Built-in smooth test functions on the ball."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Model, mobius, radial_coordinate


@dataclass(frozen=True)
class GaussianBump:
    """exp(-d(x, c)^2 / (2 sigma^2)) with d the geodesic distance, times an
    optional linear tilt (1 + tilt . x) that breaks K-invariance."""

    model: Model
    center: np.ndarray
    sigma: float = 0.5
    amplitude: complex = 1.0
    tilt: np.ndarray | None = None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        u = mobius(self.center, x)
        d = radial_coordinate(self.model, np.sqrt(np.sum(u * u, axis=-1)))
        out = self.amplitude * np.exp(-0.5 * (d / self.sigma) ** 2)
        if self.tilt is not None:
            out = out * (1.0 + x @ np.asarray(self.tilt, dtype=float))
        return out

    def support_radius(self, level: float = 1e-13) -> float:
        """Geodesic distance from the centre beyond which |f| < level."""
        return self.sigma * float(np.sqrt(-2.0 * np.log(level)))


def gaussian_bump(model: Model, center=None, sigma: float = 0.5, amplitude: complex = 1.0) -> GaussianBump:
    c = np.zeros(model.dim) if center is None else np.asarray(center, dtype=float).reshape(model.dim)
    return GaussianBump(model, c, sigma, amplitude)


def radial_bump(model: Model, sigma: float = 0.5, amplitude: complex = 1.0) -> GaussianBump:
    return GaussianBump(model, np.zeros(model.dim), sigma, amplitude)


def angular_bump(model: Model, sigma: float = 0.5, tilt: float = 0.5) -> GaussianBump:
    t = np.zeros(model.dim)
    t[0] = tilt
    return GaussianBump(model, np.zeros(model.dim), sigma, 1.0, t)


def zero_function(model: Model):
    return lambda x: np.zeros(np.asarray(x).shape[:-1])


DEFAULT_SIGMA = 0.6  # transforms fall below 1e-10 by |lam| = 24 on the disc


def builtin(name: str, model: Model, **params):
    """Named test function: gaussian-bump, radial-bump, angular-bump or zero."""
    if name == "gaussian-bump":
        center = params.get("center")
        if center is not None and model.dim == 2 and np.iscomplexobj(np.asarray(center)):
            center = [complex(center).real, complex(center).imag]
        sigma = params.get("sigma", 1.0 / np.sqrt(2.0) if model.dim == 1 else DEFAULT_SIGMA)
        return gaussian_bump(model, center, sigma)
    if name == "radial-bump":
        return radial_bump(model, params.get("sigma", DEFAULT_SIGMA))
    if name == "angular-bump":
        return angular_bump(model, params.get("sigma", DEFAULT_SIGMA), params.get("tilt", 0.5))
    if name == "zero":
        return zero_function(model)
    raise KeyError(f"unknown function {name!r}")


BUILTIN_NAMES = ("gaussian-bump", "radial-bump", "angular-bump", "zero")
