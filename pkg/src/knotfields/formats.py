"""On-disk output formats: legacy structured-points volumes, bare raw
payloads, run manifests and text tables.

Volumes are written twice per run: ``<base>.vti-legacy`` (text header in the
legacy structured-points layout followed by a binary payload, x fastest) and
``<base>.raw`` (bare float64, C order with k fastest, for zero-dependency
ingestion). Both payloads are little-endian float64; the manifest records
the layouts.
"""

import hashlib
import json
from pathlib import Path

import numpy as np

from .fields import VectorField
from .solidangle import ScalarField


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path) -> str:
    return sha256_bytes(Path(path).read_bytes())


def _header_lines(title, grid):
    nx, ny, nz = grid.dims
    ox, oy, oz = (float(v) for v in grid.origin)
    h = float(grid.spacing)
    return [
        "# vtk DataFile Version 3.0",
        title,
        "BINARY",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {nx} {ny} {nz}",
        f"ORIGIN {ox!r} {oy!r} {oz!r}",
        f"SPACING {h!r} {h!r} {h!r}",
        f"POINT_DATA {nx * ny * nz}",
    ]


def _x_fastest(values):
    """Reorder (i,j,k) C-order data to the x-fastest layout of the legacy
    structured-points format."""
    return np.ascontiguousarray(values.transpose(2, 1, 0))


def _payload(values):
    return _x_fastest(values).astype("<f8").tobytes()


def write_scalar_volume(base, field: ScalarField, name: str = "omega") -> dict:
    """Write <base>.vti-legacy and <base>.raw; returns output descriptors."""
    base = Path(base)
    lines = _header_lines(f"knotfields scalar volume: {name}", field.grid)
    lines += [f"SCALARS {name} double", "LOOKUP_TABLE default"]
    header = ("\n".join(lines) + "\n").encode()
    vti = base.with_name(base.name + ".vti-legacy")
    raw = base.with_name(base.name + ".raw")
    vti.write_bytes(header + _payload(field.values))
    raw_bytes = field.values.astype("<f8").tobytes()
    raw.write_bytes(raw_bytes)
    return {
        "vti_legacy": vti.name,
        "raw": raw.name,
        "raw_sha256": sha256_bytes(raw_bytes),
        "dtype": "float64",
        "byte_order": "little",
        "raw_layout": "row-major (i,j,k), k fastest",
        "vti_layout": "x fastest",
        "scalars": [name],
    }


def write_vector_volume(base, field: VectorField,
                        names=("dx", "dy", "dz")) -> dict:
    """Vector volume as three scalar sections; .raw holds the three
    components as consecutive k-fastest blocks."""
    base = Path(base)
    out = bytearray(("\n".join(_header_lines("knotfields vector volume",
                                             field.grid)) + "\n").encode())
    raw_blob = bytearray()
    for ci, name in enumerate(names):
        comp = np.ascontiguousarray(field.values[..., ci])
        out += f"SCALARS {name} double\nLOOKUP_TABLE default\n".encode()
        out += _payload(comp)
        out += b"\n"
        raw_blob += comp.astype("<f8").tobytes()
    vti = base.with_name(base.name + ".vti-legacy")
    raw = base.with_name(base.name + ".raw")
    vti.write_bytes(bytes(out))
    raw.write_bytes(bytes(raw_blob))
    return {
        "vti_legacy": vti.name,
        "raw": raw.name,
        "raw_sha256": sha256_bytes(bytes(raw_blob)),
        "dtype": "float64",
        "byte_order": "little",
        "raw_layout": "component blocks (dx,dy,dz), each row-major k fastest",
        "vti_layout": "x fastest per scalar section",
        "scalars": list(names),
    }


def write_manifest(base, manifest: dict) -> Path:
    path = Path(base).with_name(Path(base).name + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def write_framing_table(path, framing) -> None:
    """Text table: arclength, framing angle, pushoff point."""
    s = framing.base.arclengths
    rows = ["# s alpha pushoff_x pushoff_y pushoff_z"]
    for i in range(framing.base.n_vertices):
        p = framing.pushoff[i]
        rows.append(f"{float(s[i])!r} {float(framing.alpha[i])!r} "
                    f"{float(p[0])!r} {float(p[1])!r} {float(p[2])!r}")
    Path(path).write_text("\n".join(rows) + "\n")


def write_points_table(path, xs, omega) -> None:
    rows = ["# x y z omega"]
    for p, w in zip(xs, omega):
        rows.append(f"{float(p[0])!r} {float(p[1])!r} {float(p[2])!r} {float(w)!r}")
    Path(path).write_text("\n".join(rows) + "\n")


def load_points_file(text: str) -> np.ndarray:
    """Whitespace-separated x y z rows, '#' comments."""
    pts = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 3:
            raise ValueError(f"points file line {lineno}: expected 3 columns")
        pts.append([float(p) for p in parts])
    if not pts:
        raise ValueError("points file contains no points")
    return np.asarray(pts, dtype=np.float64)


def load_modulation_file(text: str) -> np.ndarray:
    """Two-column (s, offset) table, '#' comments."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 2:
            raise ValueError(f"modulation file line {lineno}: expected 2 columns")
        rows.append([float(p) for p in parts])
    if len(rows) < 2:
        raise ValueError("modulation table needs at least 2 rows")
    return np.asarray(rows, dtype=np.float64)
