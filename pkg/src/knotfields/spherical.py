"""Geometry of the projected curve on the observation sphere.

A straight segment of a polyline projects to a great-circle arc, so the
projection of a polyline is a geodesic polygon: geodesic curvature is
concentrated at the vertices as turning angles, crossings are arc-arc
intersections, and the Gauss-Bonnet count 2pi(D+1) - total turning is exact
(no quadrature error).
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .curve import OrientedCurve


class GeneralPositionError(RuntimeError):
    """Projection too close to a degenerate configuration; perturb x."""


def _unit_rows(v):
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


@dataclass(frozen=True, eq=False)
class SphericalPolyline:
    """Closed geodesic polygon on the unit sphere.

    ``poles`` holds t x n per arc (the dual-curve points); ``arc_tangents``
    the tangent at each arc start; ``turning_angles`` the signed exterior
    angle at each vertex (sign toward gamma = n x t).
    """

    verts: np.ndarray           # (m, 3) unit
    arc_tangents: np.ndarray    # (m, 3) unit, at arc start
    turning_angles: np.ndarray  # (m,) radians, at vertex i
    poles: np.ndarray           # (m, 3) unit, t x n per arc
    arc_lengths: np.ndarray     # (m,) radians


def _build(verts) -> SphericalPolyline:
    nxt = np.roll(verts, -1, axis=0)
    dots = (verts * nxt).sum(1)
    if (dots <= -1.0 + 1e-9).any():
        raise GeneralPositionError(
            "consecutive projected vertices are antipodal; x lies on the "
            "line of a segment")
    geo = np.cross(verts, nxt)
    gn = np.linalg.norm(geo, axis=1)
    if (gn < 1e-15).any():
        raise GeneralPositionError("zero-length projected arc")
    geo_hat = geo / gn[:, None]
    t_start = _unit_rows(np.cross(geo_hat, verts))
    t_end = _unit_rows(np.cross(geo_hat, nxt))
    t_in = np.roll(t_end, 1, axis=0)
    s = (np.cross(t_in, t_start) * verts).sum(1)
    c = (t_in * t_start).sum(1)
    turning = np.arctan2(s, c)
    poles = np.cross(t_start, verts)   # t x n, constant along each arc
    arc_len = np.arccos(np.clip(dots, -1.0, 1.0))
    for a in (verts, t_start, turning, poles, arc_len):
        a.flags.writeable = False
    return SphericalPolyline(verts, t_start, turning, poles, arc_len)


def project(curve: OrientedCurve, x) -> SphericalPolyline:
    """Project the curve onto the unit observation sphere at x."""
    x = np.asarray(x, dtype=np.float64)
    if kernels.min_segment_distance(curve.points, x) <= kernels.ON_CURVE_EPS:
        raise ValueError("x lies on the curve")
    return _build(_unit_rows(curve.points - x))


def from_unit_vectors(verts) -> SphericalPolyline:
    """Build a spherical polyline from explicit unit vectors (testing aid)."""
    verts = np.ascontiguousarray(verts, dtype=np.float64)
    verts = _unit_rows(verts)
    return _build(verts)


def crossing_count(proj: SphericalPolyline) -> int:
    """Number of transverse self-intersections of the projected curve."""
    d, status = kernels.arc_crossings(np.ascontiguousarray(proj.verts))
    if status != 0:
        raise GeneralPositionError(
            "projection is not in general position (crossing too close to a "
            "vertex, grazing arcs or triple point); perturb x")
    return int(d)


def total_turning(proj: SphericalPolyline) -> float:
    """Integrated signed geodesic curvature of the geodesic polygon."""
    return float(proj.turning_angles.sum())


def dual_curve(proj: SphericalPolyline) -> SphericalPolyline:
    """Dual spherical curve: per-arc poles t x n joined at each vertex by a
    great arc of length |turning angle|."""
    verts = np.ascontiguousarray(proj.poles)
    turn = np.roll(proj.turning_angles, -1)        # rotation at shared vertex
    arc_len = np.abs(turn)
    # the connecting arc rotates about the shared projected vertex
    axis = np.roll(proj.verts, -1, axis=0) * np.sign(turn)[:, None]
    t_start = np.cross(axis, verts)
    norms = np.linalg.norm(t_start, axis=1, keepdims=True)
    t_start = np.divide(t_start, norms, out=np.zeros_like(t_start),
                        where=norms > 0.0)
    poles = axis
    turning = np.zeros_like(arc_len)
    for a in (verts, t_start, turning, poles, arc_len):
        a.flags.writeable = False
    return SphericalPolyline(verts, t_start, turning, poles, arc_len)


def dual_signed_length(proj: SphericalPolyline) -> float:
    """Signed length of the dual curve: arc lengths |turning| signed by the
    turning direction, computed from the dual vertices themselves."""
    verts = proj.poles
    nxt = np.roll(verts, -1, axis=0)
    ang = np.arccos(np.clip((verts * nxt).sum(1), -1.0, 1.0))
    return float((ang * np.sign(np.roll(proj.turning_angles, -1))).sum())


def omega_gauss_bonnet(curve: OrientedCurve, x) -> float:
    """Solid angle at x from the crossing count and total turning of the
    projection; exact for polylines."""
    x = np.asarray(x, dtype=np.float64)
    w, status = kernels.gauss_bonnet_point(np.ascontiguousarray(curve.points), x)
    if status == 1:
        raise ValueError("x lies on the curve")
    if status != 0:
        raise GeneralPositionError(
            "projection is not in general position; perturb x")
    return float(w)
