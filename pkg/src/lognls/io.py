"""Persistence: field snapshots, atomic writes, JSON schemas, plot scripts.

Snapshot layout (little-endian)::

    b"LOGNLS01" | u32 dim | u32 M | f64 L | f64 t | M**dim complex as (f64 re, f64 im), row-major
"""

from __future__ import annotations

import json
import os
import struct
import tempfile
from importlib import resources
from pathlib import Path

import numpy as np

from .grid import Field, Grid

__all__ = [
    "SNAPSHOT_MAGIC",
    "encode_snapshot",
    "decode_snapshot",
    "write_snapshot",
    "read_snapshot",
    "atomic_write",
    "load_schema",
    "drift_plot_script",
    "distance_plot_script",
]

SNAPSHOT_MAGIC = b"LOGNLS01"
_HEADER = struct.Struct("<8sIIdd")


def encode_snapshot(field: Field, t: float = 0.0) -> bytes:
    grid = field.grid
    head = _HEADER.pack(SNAPSHOT_MAGIC, grid.dim, grid.points, grid.half_width, float(t))
    return head + np.ascontiguousarray(field.values, dtype="<c16").tobytes(order="C")


def decode_snapshot(data: bytes) -> tuple[Field, float]:
    if len(data) < _HEADER.size:
        raise ValueError("truncated snapshot header")
    magic, dim, m, half_width, t = _HEADER.unpack_from(data)
    if magic != SNAPSHOT_MAGIC:
        raise ValueError(f"bad snapshot magic {magic!r}")
    grid = Grid(dim, half_width, m)
    body = data[_HEADER.size :]
    if len(body) != 16 * grid.size:
        raise ValueError(f"snapshot body has {len(body)} bytes, expected {16 * grid.size}")
    values = np.frombuffer(body, dtype="<c16").reshape(grid.shape).astype(complex)
    return Field(grid, values), t


def atomic_write(path, data) -> Path:
    """Write ``data`` (str or bytes) to ``path`` via a temp file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, (bytes, bytearray)) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_snapshot(path, field: Field, t: float = 0.0) -> Path:
    return atomic_write(path, encode_snapshot(field, t))


def read_snapshot(path) -> tuple[Field, float]:
    return decode_snapshot(Path(path).read_bytes())


def write_json(path, obj) -> Path:
    return atomic_write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def load_schema(name: str) -> dict:
    """JSON Schema shipped with the package (``groundstate``, ``stability``, ...)."""
    text = resources.files("lognls").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


_PLOT_HEADER = '''"""Generated plot script; run with ``python {name}``."""
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

csv_path = sys.argv[1] if len(sys.argv) > 1 else {csv!r}
with open(csv_path) as fh:
    rows = list(csv.DictReader(fh))
t = [float(r["t"]) for r in rows]
'''


def drift_plot_script(csv_name: str, png_name: str = "drift.png") -> str:
    return _PLOT_HEADER.format(name="plot_drift.py", csv=csv_name) + f'''
fig, ax = plt.subplots()
for col in ("charge_drift", "energy_drift"):
    ax.semilogy(t, [max(float(r[col]), 1e-300) for r in rows], label=col)
ax.set_xlabel("t")
ax.set_ylabel("relative drift")
ax.legend()
fig.savefig({png_name!r}, dpi=120)
'''


def distance_plot_script(csv_names: list[str], png_name: str = "distance.png") -> str:
    body = _PLOT_HEADER.format(name="plot_distance.py", csv=csv_names[0])
    return body + f'''
paths = sys.argv[1:] or {list(csv_names)!r}
fig, ax = plt.subplots()
for path in paths:
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    ax.plot([float(r["t"]) for r in rows], [float(r["dist_w"]) for r in rows], label=path)
ax.set_xlabel("t")
ax.set_ylabel("W orbit distance")
ax.legend()
fig.savefig({png_name!r}, dpi=120)
'''
