"""How far the kernel of a b-independent symbol reaches.

For a(x; lam) = exp(-lam^2 / s) the kernel depends on d(y, z) through
a_check(t) = int exp(-lam^2/s) Phi_lam(t) drho(lam).  The fraction of
int |a_check|^2 dmu beyond radius t sets the w-grid radius the unitarity
and inversion checks need.
"""
import numpy as np

from hypwigner.config import RunConfig
from hypwigner.quadrature import build_spectral_grid, radial_density
from hypwigner.geometry import sphere_surface
from hypwigner.weyl import SphericalTable

cfg = RunConfig()
for name in ("disc", "ball:3"):
    model = cfg.model_obj(name)
    sg = build_spectral_grid(model, 24.0, 192, 2)
    t = np.linspace(0.0, 14.0, 2801)
    phi = SphericalTable(model, sg.lam, exact=True)(t)
    for s in (1.0, 4.0):
        prof = (sg.lam_weights * np.exp(-sg.lam**2 / s)) @ phi
        dens = np.abs(prof) ** 2 * radial_density(model, t) * sphere_surface(model.dim)
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(t))])
        tail = 1.0 - cum / cum[-1]
        marks = "  ".join(f"t={r:g}: {tail[np.searchsorted(t, r)]:.1e}" for r in (4, 6, 8, 10))
        print(f"{name:7s} exp(-lam^2/{s:g})  L2 tail  {marks}")
