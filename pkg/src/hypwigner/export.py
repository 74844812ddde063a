"""CSV and JSON output: UTF-8, a header row, %.17g floats, sha256 checksums."""
from __future__ import annotations

import csv
import hashlib
import json
import time
from pathlib import Path

import numpy as np

FMT = "%.17g"


def _fmt(v) -> str:
    return FMT % v


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) if isinstance(v, (float, np.floating, int, np.integer)) else v for v in row])
    return path


def grid_function_csv(path, f) -> Path:
    """x0..x{n-1}, weight, re, im."""
    g = f.grid
    n = g.model.dim
    v = np.asarray(f.values, dtype=complex)
    rows = (list(x) + [wt, z.real, z.imag] for x, wt, z in zip(g.nodes, g.weights, v))
    return write_csv(path, [f"x{j}" for j in range(n)] + ["weight", "re", "im"], rows)


def spectral_function_csv(path, F) -> Path:
    """lam, b0..b{n-1}, weight, re, im; one row per (lam, b) node."""
    sg = F.grid
    n = sg.model.dim
    v = np.asarray(F.values, dtype=complex)
    w = sg.weights

    def rows():
        for k, lam in enumerate(sg.lam):
            for j, b in enumerate(sg.b):
                yield [lam] + list(b) + [w[k, j], v[k, j].real, v[k, j].imag]

    return write_csv(path, ["lam"] + [f"b{j}" for j in range(n)] + ["weight", "re", "im"], rows())


def spectral_table_csv(path, F) -> Path:
    """Wide layout: one row per lam, columns re_j/im_j per boundary node j."""
    sg = F.grid
    v = np.asarray(F.values, dtype=complex)
    header = ["lam"] + [c for j in range(len(sg.b)) for c in (f"re_{j}", f"im_{j}")]
    rows = ([lam] + [c for z in v[k] for c in (z.real, z.imag)] for k, lam in enumerate(sg.lam))
    return write_csv(path, header, rows)


def radial_csv(path, lam, values) -> Path:
    """lam, re, im."""
    v = np.asarray(values, dtype=complex)
    return write_csv(path, ["lam", "re", "im"], ([l, z.real, z.imag] for l, z in zip(lam, v)))


def phase_space_slice_csv(path, W, b_index: int | None = None, lam_index: int | None = None) -> Path:
    """W at fixed b (rows x, lam) or at fixed lam (rows x, b)."""
    og, sg = W.omega, W.spectral
    n = og.model.dim
    xs = [f"x{j}" for j in range(n)]
    if (b_index is None) == (lam_index is None):
        raise ValueError("give exactly one of b_index and lam_index")
    if b_index is not None:
        vals = W.slice_b(b_index)
        rows = (list(x) + [lam, vals[i, k].real, vals[i, k].imag] for i, x in enumerate(og.nodes) for k, lam in enumerate(sg.lam))
        return write_csv(path, xs + ["lam", "re", "im"], rows)
    vals = W.slice_lam(lam_index)
    rows = (list(x) + list(b) + [vals[i, j].real, vals[i, j].imag] for i, x in enumerate(og.nodes) for j, b in enumerate(sg.b))
    return write_csv(path, xs + [f"b{j}" for j in range(n)] + ["re", "im"], rows)


def matrix_csv(path, K, nodes) -> Path:
    """Dense kernel matrix in long form: i, j, y..., z..., re, im."""
    K = np.asarray(K, dtype=complex)
    nodes = np.asarray(nodes, dtype=float)
    n = nodes.shape[1]
    header = ["i", "j"] + [f"y{d}" for d in range(n)] + [f"z{d}" for d in range(n)] + ["re", "im"]
    rows = ([i, j] + list(nodes[i]) + list(nodes[j]) + [K[i, j].real, K[i, j].imag] for i in range(K.shape[0]) for j in range(K.shape[1]))
    return write_csv(path, header, rows)


def sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else str(v)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def write_json(path, payload: dict, timestamp: bool = True) -> Path:
    """Sorted keys; the only run-dependent field is ``timestamp``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = _jsonable(payload)
    if timestamp:
        body["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime())
    path.write_text(json.dumps(body, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def manifest(path, files, **meta) -> Path:
    """JSON manifest listing files with their sha256 checksums."""
    entries = [{"file": Path(f).name, "sha256": sha256(f)} for f in files]
    return write_json(path, {**meta, "files": entries})
