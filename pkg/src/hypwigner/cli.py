"""hypwigner transform | verify."""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import export
from .config import CONFIG_DIR, ConfigError, RunConfig
from .functions import BUILTIN_NAMES, builtin
from .hft import GridFunction, NotKInvariant, angular_spread, hft_forward, hft_inverse, spherical_forward
from .quadrature import build_omega_grid, build_spectral_grid
from .verify import SUITES, Check, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def load_config(args) -> RunConfig:
    if args.config:
        cfg = RunConfig.load(args.config)
    elif (CONFIG_DIR / "default.json").exists():
        cfg = RunConfig.load(CONFIG_DIR / "default.json")
    else:
        cfg = RunConfig()
    changes = {}
    if args.model:
        changes["model"] = args.model
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.out:
        changes["out_dir"] = args.out
    return cfg.replace(**changes) if changes else cfg


def cmd_transform(cfg: RunConfig, fn: str, params: dict | None = None) -> list[Path]:
    """Forward, round-trip and (K-invariant input) spherical transforms of a
    built-in function, as CSV plus a JSON manifest."""
    if fn not in BUILTIN_NAMES:
        raise KeyError(f"unknown function {fn!r}; choose from {', '.join(BUILTIN_NAMES)}")
    model = cfg.model_obj()
    g = cfg.grid
    ang = g.angular_order if model.dim > 1 else 4
    og = build_omega_grid(model, g.t_max, g.radial_order, ang)
    sg = build_spectral_grid(model, g.lam_max, g.lam_order, g.b_order if model.dim > 1 else 2)
    f = GridFunction.sample(og, builtin(fn, model, **(params or {})))
    F = hft_forward(f, sg, workers=cfg.n_workers)
    back = hft_inverse(F, og, workers=cfg.n_workers)
    out = Path(cfg.out_dir)
    stem = f"{model.kind}{model.dim if model.dim > 2 else ''}_{fn}"
    files = [
        export.spectral_function_csv(out / f"{stem}_forward.csv", F),
        export.spectral_table_csv(out / f"{stem}_forward_table.csv", F),
        export.grid_function_csv(out / f"{stem}_input.csv", f),
        export.grid_function_csv(out / f"{stem}_inverse.csv", back),
    ]
    scale = float(np.max(np.abs(f.values)))
    checks = {"roundtrip_max_error": float(np.max(np.abs(back.values - f.values))) / scale if scale else 0.0}
    try:
        if angular_spread(f) <= 1e-10:
            lam = sg.lam
            files.append(export.radial_csv(out / f"{stem}_spherical.csv", lam, spherical_forward(f, lam)))
            checks["b_spread"] = float(np.max(np.abs(F.values - F.values[:, :1])))
    except NotKInvariant:
        pass
    if model.dim == 1 and fn == "gaussian-bump" and not params:
        keep = np.abs(sg.lam) <= 10.0
        oracle = math.sqrt(math.pi) * np.exp(-sg.lam[keep] ** 2 / 4.0)
        checks["euclidean_oracle_max_error"] = float(np.max(np.abs(F.values[keep] - oracle[:, None])))
    files.append(
        export.manifest(
            out / f"{stem}_manifest.json",
            files,
            model=cfg.model,
            function=fn,
            params=params or {},
            kappa_spec=model.spectral_scale,
            grid=cfg.to_dict()["grid"],
            config=cfg.name,
            seed=cfg.seed,
            checks=checks,
        )
    )
    return files


def cmd_verify(cfg: RunConfig, suite: str, probe: str | None = None) -> tuple[int, dict]:
    report = run_suite(suite, cfg, probe)
    path = export.write_json(Path(cfg.out_dir) / f"verify_{suite}{'_' + probe if probe else ''}.json", report)
    for c in report["checks"]:
        print(Check(**c).line())
    print(f"report: {path}")
    if report["report_only"]:
        return EXIT_OK, report
    return (EXIT_OK if report["passed"] else EXIT_FAIL), report


def _params(pairs) -> dict:
    out = {}
    for item in pairs or []:
        key, _, val = item.partition("=")
        if not _:
            raise ConfigError(f"parameter {item!r} is not key=value")
        try:
            out[key] = float(val)
        except ValueError:
            out[key] = [float(v) for v in val.split(",")]
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="interval, disc or ball:n")
    common.add_argument("--config", help="JSON config path or a name in configs/")
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", type=int, help="random seed for property suites")

    p = argparse.ArgumentParser(prog="hypwigner", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    t = sub.add_parser("transform", parents=[common], help="transform a built-in function")
    t.add_argument("--fn", required=True, help=f"one of {', '.join(BUILTIN_NAMES)}")
    t.add_argument("--param", action="append", metavar="KEY=VALUE", help="function parameter, e.g. sigma=0.6 or center=0.1,0")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite_name", nargs="?", metavar="SUITE", help=f"one of {', '.join(SUITES)}")
    v.add_argument("--suite", help="same as the positional SUITE")
    v.add_argument("--probe", help="report-only probe (unitarity: b-dependent)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        if args.command == "transform":
            for path in cmd_transform(cfg, args.fn, _params(args.param)):
                print(path)
            return EXIT_OK
        suite = args.suite or args.suite_name
        if not suite:
            raise ConfigError("no suite given")
        code, _ = cmd_verify(cfg, suite, args.probe)
        return code
    except (ConfigError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
