"""Fit the spectral scale of each model and optionally store it in a config.

    python scripts/calibrate.py                      # interval, disc, ball:3..5
    python scripts/calibrate.py ball:6 --write configs/default.json
"""
import argparse
import json
import time

from hypwigner.config import RunConfig
from hypwigner.geometry import Model
from hypwigner.harmonic import ball_scale_guess
from hypwigner.hft import calibrate_normalization


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("models", nargs="*", default=["interval", "disc", "ball:3", "ball:4", "ball:5"])
    p.add_argument("--write", help="config file whose kappa table is updated")
    args = p.parse_args()
    found = {}
    for name in args.models:
        model = Model.parse(name, 1.0)
        t0 = time.perf_counter()
        rec = calibrate_normalization(model)
        found[name] = rec.kappa_spec
        print(
            f"{name:9s} kappa={rec.kappa_spec:.16g}  closed form={ball_scale_guess(model.dim) if model.dim != 2 else 1.0:.16g}"
            f"  round trip={rec.roundtrip_error:.2e}  ({time.perf_counter() - t0:.1f} s, {rec.method})"
        )
    if args.write:
        cfg = RunConfig.load(args.write)
        cfg.replace(kappa={**cfg.kappa, **found}).to_json(args.write)
        print(f"updated {args.write}: {json.dumps(found)}")


if __name__ == "__main__":
    main()
