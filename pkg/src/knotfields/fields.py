"""Application field generators: distance field, scroll-wave phase, and
nematic director fields on volumetric grids."""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .curve import as_link
from .solidangle import OMEGA_SENTINEL, EvalConfig, GridSpec, ScalarField, link_hash, omega_grid

TWO_PI = 2.0 * math.pi

_CHUNK = 8192


@dataclass(frozen=True, eq=False)
class VectorField:
    """Unit-vector samples on a GridSpec; sentinel nodes hold zeros."""

    grid: GridSpec
    values: np.ndarray    # dims + (3,), C order
    meta: dict

    @property
    def sentinel_nodes(self):
        return self.meta.get("sentinel_nodes", [])


def _distance_data(link, grid: GridSpec):
    """(distance, nearest arclength within component, component index) per node."""
    link = as_link(link)
    pts = np.ascontiguousarray(link.concat_points)
    offs = link.offsets
    local_s = np.concatenate([c.arclengths for c in link.components])
    seg_len = np.concatenate([c.seg_lengths for c in link.components])
    n = grid.n_nodes
    dist = np.empty(n)
    s_near = np.empty(n)
    comp = np.empty(n, dtype=np.int64)
    for lo in range(0, n, _CHUNK):
        hi = min(n, lo + _CHUNK)
        kernels.distance_block(pts, offs, local_s, seg_len, grid.node_coords(lo, hi),
                               dist[lo:hi], s_near[lo:hi], comp[lo:hi])
    return dist, s_near, comp


def distance_field(link, grid: GridSpec) -> ScalarField:
    """Exact point-to-segment distance to the link at every node."""
    link = as_link(link)
    dist, _, _ = _distance_data(link, grid)
    meta = {"curve_hash": link_hash(link), "field": "distance"}
    return ScalarField(grid=grid, values=dist.reshape(grid.dims), meta=meta)


def _check_modulation(modulation):
    table = np.asarray(modulation, dtype=np.float64)
    if table.ndim != 2 or table.shape[1] != 2 or table.shape[0] < 2:
        raise ValueError("modulation table must be (m, 2) rows of (s, offset)")
    order = np.argsort(table[:, 0])
    return table[order]


def scroll_phase(link, grid: GridSpec, k: float, cfg: EvalConfig | None = None,
                 modulation=None, workers: int = 1,
                 omega_field: ScalarField | None = None) -> ScalarField:
    """Scroll-wave phase: wavenumber times distance plus half the solid
    angle, mod 2pi.

    ``modulation`` is an optional piecewise-linear (s, offset) table applied
    as an offset to the distance via the arclength of the nearest curve
    point (periodic per component).
    """
    link = as_link(link)
    cfg = cfg or EvalConfig()
    if omega_field is None:
        omega_field = omega_grid(link, grid, cfg, workers=workers)
    elif omega_field.grid != grid:
        raise ValueError("omega field grid does not match the requested grid")
    dist, s_near, comp = _distance_data(link, grid)
    if modulation is not None:
        table = _check_modulation(modulation)
        offsets = np.empty_like(dist)
        for ci, c in enumerate(link.components):
            sel = comp == ci
            if sel.any():
                offsets[sel] = np.interp(s_near[sel], table[:, 0], table[:, 1],
                                         period=c.total_length)
        dist = dist - offsets
    omega = omega_field.values.reshape(-1)
    sent = omega == OMEGA_SENTINEL
    psi = np.mod(k * dist + 0.5 * omega, TWO_PI)
    psi[sent] = OMEGA_SENTINEL
    meta = dict(omega_field.meta)
    meta.update({"field": "scroll_phase", "k": float(k),
                 "modulated": modulation is not None})
    return ScalarField(grid=grid, values=psi.reshape(grid.dims), meta=meta)


def planar_director(omega_field: ScalarField) -> VectorField:
    """Planar nematic director encoding the curve as a disclination line."""
    w = omega_field.values
    sent = w == OMEGA_SENTINEL
    q = 0.25 * w
    d = np.stack([np.sin(q), np.zeros_like(q), np.cos(q)], axis=-1)
    d[sent] = 0.0
    meta = dict(omega_field.meta)
    meta["field"] = "planar_director"
    return VectorField(grid=omega_field.grid, values=d, meta=meta)


def full_director(omega_k: ScalarField, omega_l: ScalarField) -> VectorField:
    """Fully three-dimensional director: the second solid angle winds the
    in-plane orientation over the level sets of the first."""
    if omega_k.grid != omega_l.grid:
        raise ValueError("the two omega fields live on different grids")
    wk = omega_k.values
    wl = omega_l.values
    sent = (wk == OMEGA_SENTINEL) | (wl == OMEGA_SENTINEL)
    qk = 0.25 * wk
    ql = 0.5 * wl
    d = np.stack([np.sin(qk) * np.cos(ql),
                  np.sin(qk) * np.sin(ql),
                  np.cos(qk)], axis=-1)
    d[sent] = 0.0
    meta = {"field": "full_director",
            "omega_k": dict(omega_k.meta), "omega_l": dict(omega_l.meta)}
    return VectorField(grid=omega_k.grid, values=d, meta=meta)
