"""CSV / JSON output with reproducible byte-level formatting."""
from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from .fringes import FringePattern


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def write_csv(path: Path, header: list[str], rows) -> None:
    """RFC-4180 CSV with '.' decimals and a header row; floats at full precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def write_pattern(pattern: FringePattern, path: Path) -> Path:
    """Pattern CSV (x_m, density_per_m) plus a JSON metadata sidecar."""
    write_csv(path, ["x_m", "density_per_m"], zip(pattern.x, pattern.density))
    sidecar = path.with_suffix(".meta.json")
    write_json(sidecar, {"fringe_period_m": pattern.fringe_period, **pattern.metadata})
    return sidecar


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()
