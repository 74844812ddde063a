"""Transform every built-in function and print the self-checks from each
manifest.  The interval is cheap and uses the default config; the disc uses
the reduced one (its 128-node lam rule is too coarse for the interval out to
xi = 8)."""
import json
import sys
from pathlib import Path

from hypwigner.cli import cmd_transform
from hypwigner.config import named
from hypwigner.functions import BUILTIN_NAMES

out = Path(sys.argv[1] if len(sys.argv) > 1 else "out/demo")
configs = {"interval": named("default"), "disc": named("reduced")}
for model, cfg in configs.items():
    for fn in BUILTIN_NAMES:
        files = cmd_transform(cfg.replace(model=model, out_dir=str(out)), fn)
        checks = json.loads(files[-1].read_text())["checks"]
        print(f"{model:8s} {fn:14s} " + "  ".join(f"{k}={v:.2e}" for k, v in checks.items()))
print(f"files in {out}")
