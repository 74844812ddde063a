"""Run configuration: grids, calibration record, tolerances, output and seed."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .geometry import Model
from .harmonic import ball_scale_guess
from .quadrature import T_MAX_LIMIT

CONFIG_DIR = Path(__file__).resolve().parents[2] / "configs"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GridConfig:
    """Omega grid (t_max, radial_order, angular_order) and spectral grid
    (lam_max, lam_order, b_order)."""

    t_max: float = 8.0
    radial_order: int = 96
    angular_order: int = 128
    lam_max: float = 24.0
    lam_order: int = 192
    b_order: int = 128

    def validate(self) -> None:
        if not 0.0 < self.t_max <= T_MAX_LIMIT:
            raise ConfigError(f"t_max must lie in (0, {T_MAX_LIMIT}]")
        for name in ("radial_order", "angular_order", "b_order"):
            if int(getattr(self, name)) < 4:
                raise ConfigError(f"{name} must be >= 4")
        if not 0.0 < self.lam_max <= 200.0:
            raise ConfigError("lam_max must lie in (0, 200]")
        if self.lam_order < 8 or self.lam_order % 2:
            raise ConfigError("lam_order must be even and >= 8")


@dataclass(frozen=True)
class WGridConfig:
    """Centred grid for Wigner integrals (geodesic radius of w up to t_max)."""

    t_max: float = 4.0
    radial_order: int = 48
    angular_order: int = 64

    def validate(self) -> None:
        if not 0.0 < self.t_max <= T_MAX_LIMIT:
            raise ConfigError(f"w-grid t_max must lie in (0, {T_MAX_LIMIT}]")
        if self.radial_order < 4 or self.angular_order < 4:
            raise ConfigError("w-grid orders must be >= 4")


DEFAULT_KAPPA = {
    "interval": 0.1591549430918986,
    "disc": 0.9999999999937256,
    "ball:3": 0.10132118365791082,
    "ball:4": 0.05066059176194806,
    "ball:5": 0.0215010228818114,
}

DEFAULT_TOLERANCES = {
    "jacobian": 1e-7,
    "planewave": 1e-8,
    "hft": 1e-4,
    "wigner-invariance": 1e-5,
    "marginality": 1e-4,
    "inversion": 1e-3,
    "unitarity": 1e-3,
    "covariance": 1e-4,
    "operators": 1e-5,
}


@dataclass(frozen=True)
class RunConfig:
    model: str = "disc"
    grid: GridConfig = field(default_factory=GridConfig)
    kappa: dict = field(default_factory=lambda: dict(DEFAULT_KAPPA))
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    phase_space: GridConfig = field(
        default_factory=lambda: GridConfig(t_max=3.0, radial_order=24, angular_order=24, lam_order=48, b_order=32)
    )
    wigner: WGridConfig = field(default_factory=WGridConfig)
    marginality_w: WGridConfig = field(default_factory=lambda: WGridConfig(3.0, 48, 48))
    weyl: WGridConfig = field(default_factory=lambda: WGridConfig(7.0, 64, 64))
    reconstruction: WGridConfig = field(default_factory=lambda: WGridConfig(4.0, 64, 64))
    unitarity_x: WGridConfig = field(default_factory=lambda: WGridConfig(7.0, 48, 64))
    unitarity_w: WGridConfig = field(default_factory=lambda: WGridConfig(10.0, 64, 128))
    operators_w: WGridConfig = field(default_factory=lambda: WGridConfig(5.0, 96, 64))
    out_dir: str = "out"
    seed: int = 0
    workers: int = 0
    name: str = "default"

    def validate(self) -> "RunConfig":
        try:
            Model.parse(self.model, 1.0)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"bad model {self.model!r}: {exc}") from exc
        self.grid.validate()
        self.phase_space.validate()
        for w in (self.wigner, self.marginality_w, self.weyl, self.reconstruction, self.unitarity_x, self.unitarity_w, self.operators_w):
            w.validate()
        if self.seed < 0:
            raise ConfigError("seed must be >= 0")
        if self.workers < 0:
            raise ConfigError("workers must be >= 0 (0 means all cores)")
        for k, v in self.tolerances.items():
            if not v > 0:
                raise ConfigError(f"tolerance {k} must be positive")
        return self

    @property
    def n_workers(self) -> int:
        return self.workers or os.cpu_count() or 1

    def model_obj(self, name: str | None = None) -> Model:
        """The model with its calibrated spectral scale."""
        name = name or self.model
        kappa = self.kappa.get(name)
        if kappa is None and name.startswith("ball:"):
            kappa = ball_scale_guess(int(name.split(":", 1)[1]))
        return Model.parse(name, kappa)

    def replace(self, **changes) -> "RunConfig":
        d = self.to_dict()
        d.update(changes)
        return RunConfig.from_dict(d)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        d = dict(d)
        try:
            for f in fields(cls):
                typ = {"GridConfig": GridConfig, "WGridConfig": WGridConfig}.get(str(f.type))
                if typ is not None and isinstance(d.get(f.name), dict):
                    d[f.name] = typ(**d[f.name])
            if "tolerances" in d:
                d["tolerances"] = {**DEFAULT_TOLERANCES, **d["tolerances"]}
            if "kappa" in d:
                d["kappa"] = {**DEFAULT_KAPPA, **d["kappa"]}
            return cls(**d).validate()
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def load(cls, path) -> "RunConfig":
        path = Path(path)
        if not path.exists() and not path.suffix:
            path = CONFIG_DIR / f"{path}.json"
        try:
            d = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(d)


def named(name: str) -> RunConfig:
    """A config shipped in configs/ by name ("default", "reduced", ...)."""
    return RunConfig.load(CONFIG_DIR / f"{name}.json")
