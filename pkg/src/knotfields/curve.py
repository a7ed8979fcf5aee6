"""Closed-curve ingestion, resampling, frames and integral invariants.

Curves are closed polylines: an (n, 3) float array with no duplicated
endpoint, segment i joining vertex i to vertex (i+1) % n, orientation given
by listing order. All quantities are immutable after construction; the
functions here are pure and safe to call concurrently on shared curves.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels


class CurveFormatError(ValueError):
    """Malformed curve file; message names the offending line."""


class CurveValidationError(ValueError):
    """Geometrically invalid curve data."""


class ResolutionError(RuntimeError):
    """An integer invariant did not resolve cleanly; refine the curve."""


def _lock(a):
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class OrientedCurve:
    """Closed oriented polyline with per-vertex frames and curvature."""

    points: np.ndarray          # (n, 3)
    tangents: np.ndarray        # (n, 3) unit
    normals: np.ndarray         # (n, 3) unit
    binormals: np.ndarray       # (n, 3) unit
    curvature: np.ndarray       # (n,) 1/length
    seg_lengths: np.ndarray     # (n,)
    total_length: float
    frame_flags: np.ndarray     # (n,) bool, True where N was transported
    _writhe: float | None = field(default=None, repr=False, compare=False)

    @property
    def n_vertices(self) -> int:
        return self.points.shape[0]

    @property
    def arclengths(self) -> np.ndarray:
        """Arclength of each vertex from vertex 0."""
        s = np.concatenate([[0.0], np.cumsum(self.seg_lengths[:-1])])
        s.flags.writeable = False
        return s

    @property
    def rho_min(self) -> float:
        """Smallest radius of curvature."""
        kmax = float(self.curvature.max())
        return np.inf if kmax == 0.0 else 1.0 / kmax

    def min_self_distance(self) -> float:
        """Closest strand-to-strand approach, excluding an arclength window
        of one curvature radius around each vertex."""
        h = self.total_length / self.n_vertices
        window = min(self.rho_min, 0.25 * self.total_length)
        skip = max(1, int(np.ceil(window / h)))
        return float(kernels.min_self_distance(self.points, skip))

    def reversed(self) -> "OrientedCurve":
        return make_curve(self.points[::-1])


@dataclass(frozen=True, eq=False)
class Link:
    """Ordered collection of disjoint oriented closed curves."""

    components: tuple[OrientedCurve, ...]

    def __post_init__(self):
        if not self.components:
            raise CurveValidationError("link needs at least one component")
        for i in range(len(self.components)):
            for j in range(i + 1, len(self.components)):
                d = kernels.min_cross_distance(
                    self.components[i].points, self.components[j].points)
                if d <= kernels.ON_CURVE_EPS:
                    raise CurveValidationError(
                        f"components {i} and {j} intersect "
                        f"(min distance {d:g} <= {kernels.ON_CURVE_EPS:g})")

    @property
    def concat_points(self) -> np.ndarray:
        return np.concatenate([c.points for c in self.components])

    @property
    def concat_tangents(self) -> np.ndarray:
        return np.concatenate([c.tangents for c in self.components])

    @property
    def offsets(self) -> np.ndarray:
        sizes = [c.n_vertices for c in self.components]
        return np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)


def as_link(obj) -> Link:
    if isinstance(obj, Link):
        return obj
    if isinstance(obj, OrientedCurve):
        return Link((obj,))
    raise TypeError(f"expected OrientedCurve or Link, got {type(obj).__name__}")


def make_curve(points) -> OrientedCurve:
    """Validate a closed polyline and attach frames."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise CurveValidationError(f"points must be (n, 3), got {pts.shape}")
    if pts.shape[0] < 3:
        raise CurveValidationError(f"a closed curve needs >= 3 points, got {pts.shape[0]}")
    seg = np.roll(pts, -1, axis=0) - pts
    seg_len = np.linalg.norm(seg, axis=1)
    if (seg_len == 0.0).any():
        i = int(np.argmin(seg_len))
        raise CurveValidationError(f"zero-length segment at vertex {i} (repeated point)")
    tangents, normals, binormals, curvature, flags = _frenet(pts, seg_len)
    return OrientedCurve(
        points=_lock(pts),
        tangents=_lock(tangents),
        normals=_lock(normals),
        binormals=_lock(binormals),
        curvature=_lock(curvature),
        seg_lengths=_lock(seg_len),
        total_length=float(seg_len.sum()),
        frame_flags=flags,
    )


def _frenet(pts, seg_len):
    """Frames by central differences; curvature from the second difference.

    At near-inflection vertices the normal is parallel-transported from the
    previous vertex and flagged.
    """
    fwd = np.roll(pts, -1, axis=0) - pts
    bwd = pts - np.roll(pts, 1, axis=0)
    tangents = fwd + bwd
    tangents /= np.linalg.norm(tangents, axis=1, keepdims=True)

    h = 0.5 * (seg_len + np.roll(seg_len, 1))
    acc = (np.roll(pts, -1, axis=0) - 2.0 * pts + np.roll(pts, 1, axis=0)) / h[:, None] ** 2
    acc_perp = acc - (acc * tangents).sum(1, keepdims=True) * tangents
    curvature = np.linalg.norm(acc_perp, axis=1)

    n = pts.shape[0]
    tol = 1e-9 / h
    flags = curvature < tol
    normals = np.zeros_like(pts)
    ok = ~flags
    normals[ok] = acc_perp[ok] / curvature[ok, None]
    if flags.all():
        raise CurveValidationError("curvature vanishes everywhere; not a closed curve")
    if flags.any():
        start = int(np.nonzero(ok)[0][0])
        for d in range(1, n):
            i = (start + d) % n
            if flags[i]:
                prev = normals[(i - 1) % n]
                v = prev - (prev @ tangents[i]) * tangents[i]
                nv = np.linalg.norm(v)
                if nv == 0.0:
                    v = _any_perp(tangents[i])
                    nv = 1.0
                normals[i] = v / nv
    binormals = np.cross(tangents, normals)
    flags = np.ascontiguousarray(flags)
    flags.flags.writeable = False
    return tangents, normals, binormals, curvature, flags


def _any_perp(t):
    a = np.array([1.0, 0.0, 0.0]) if abs(t[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    v = a - (a @ t) * t
    return v / np.linalg.norm(v)


def frenet_frames(curve: OrientedCurve) -> OrientedCurve:
    """Recompute frames from the points (idempotent on a valid curve)."""
    return make_curve(curve.points)


def resample(curve: OrientedCurve, ds: float) -> OrientedCurve:
    """Uniform arclength resampling of the polyline at spacing ~ds.

    Vertex 0 is preserved, so resampling an already-uniform curve is the
    identity up to round-off.
    """
    total = curve.total_length
    if not ds > 0.0:
        raise ValueError("ds must be positive")
    if ds >= total / 3.0:
        raise ValueError(f"ds={ds:g} too coarse for curve of length {total:g} "
                         "(need ds < length/3)")
    n_new = int(round(total / ds))
    cum = np.concatenate([[0.0], np.cumsum(curve.seg_lengths)])
    targets = total * np.arange(n_new) / n_new
    idx = np.searchsorted(cum, targets, side="right") - 1
    idx = np.clip(idx, 0, curve.n_vertices - 1)
    frac = (targets - cum[idx]) / curve.seg_lengths[idx]
    nxt = np.roll(curve.points, -1, axis=0)
    new_pts = curve.points[idx] + frac[:, None] * (nxt[idx] - curve.points[idx])
    return make_curve(new_pts)


def writhe(curve: OrientedCurve) -> float:
    """Writhe of the polyline: exact Gauss double sum over segment pairs."""
    if curve._writhe is None:
        object.__setattr__(curve, "_writhe", float(kernels.writhe_sum(curve.points)))
    return curve._writhe


def gauss_linking(c1: OrientedCurve, c2: OrientedCurve) -> float:
    """Raw Gauss linking integral (exact for polylines, up to round-off)."""
    return float(kernels.linking_sum(c1.points, c2.points))


def linking_number(c1: OrientedCurve, c2: OrientedCurve) -> int:
    raw = gauss_linking(c1, c2)
    k = round(raw)
    if abs(raw - k) > 0.05:
        raise ResolutionError(
            f"linking integral {raw:.6f} is not close to an integer "
            "(residual > 0.05); refine the curves or check disjointness")
    return int(k)


def projective_twist(curve: OrientedCurve, x) -> float:
    """Twist of the line-of-sight framing from viewpoint x."""
    x = np.asarray(x, dtype=np.float64)
    d = kernels.min_segment_distance(curve.points, x)
    if d <= kernels.ON_CURVE_EPS:
        raise ValueError("viewpoint lies on the curve")
    tw, min_cusp = kernels.twist_integral(curve.points, curve.tangents, x)
    if min_cusp <= 1e-9:
        nt = (curve.points - x)
        nt /= np.linalg.norm(nt, axis=1, keepdims=True)
        align = 1.0 - ((nt * curve.tangents).sum(1)) ** 2
        i = int(np.argmin(align))
        s = curve.arclengths[i]
        raise ValueError(
            f"projection has a cusp near arclength {s:.6g} (vertex {i}); "
            "move the viewpoint")
    return float(tw)


def fuller_writhe_mod2(curve: OrientedCurve, n_inf) -> float:
    """Spherical area swept by the tangent indicatrix, relative to n_inf.

    Evaluated as the exact fan area of the segment-direction polygon, so the
    mod-4pi identity with the polygon writhe holds to round-off. Returns a
    value in [0, 4pi).
    """
    n_inf = np.asarray(n_inf, dtype=np.float64)
    n_inf = n_inf / np.linalg.norm(n_inf)
    dirs = np.roll(curve.points, -1, axis=0) - curve.points
    dirs = np.ascontiguousarray(dirs / np.linalg.norm(dirs, axis=1, keepdims=True))
    worst = min(
        float(kernels.vertex_min_axis_denom(dirs, np.zeros(3), n_inf)),
        float(kernels.vertex_min_axis_denom(
            np.ascontiguousarray(curve.tangents), np.zeros(3), n_inf)),
    )
    if worst <= 1e-9:
        raise ValueError(
            "n_inf is antipodal to a tangent direction; choose a different n_inf")
    return float(kernels.mod4pi(kernels.fan_sweep(dirs, np.zeros(3), n_inf)))


# ---------------------------------------------------------------------------
# curve file format: plain text, '#' comments,
#   components: N
#   points: M          (per component, followed by M lines "x y z")
# orientation is the listing order.

def load_link(source: str) -> Link:
    """Parse curve-file content into a Link with frames computed."""
    lines = source.splitlines()
    pos = 0

    def next_content():
        nonlocal pos
        while pos < len(lines):
            stripped = lines[pos].split("#", 1)[0].strip()
            pos += 1
            if stripped:
                return stripped, pos
        return None, pos

    def expect_field(name):
        text, lineno = next_content()
        if text is None:
            raise CurveFormatError(f"unexpected end of file; expected '{name}:'")
        key, _, val = text.partition(":")
        if key.strip() != name or not _:
            raise CurveFormatError(f"line {lineno}: expected '{name}: <int>', got {text!r}")
        try:
            n = int(val)
        except ValueError:
            raise CurveFormatError(f"line {lineno}: field '{name}' is not an integer: {val!r}")
        if n < 1:
            raise CurveFormatError(f"line {lineno}: field '{name}' must be positive")
        return n

    ncomp = expect_field("components")
    comps = []
    for ci in range(ncomp):
        npts = expect_field("points")
        if npts < 3:
            raise CurveValidationError(
                f"component {ci}: needs >= 3 points, file declares {npts}")
        pts = np.empty((npts, 3))
        for k in range(npts):
            text, lineno = next_content()
            if text is None:
                raise CurveFormatError(
                    f"unexpected end of file in component {ci}: "
                    f"expected {npts} points, got {k}")
            parts = text.split()
            if len(parts) != 3:
                raise CurveFormatError(
                    f"line {lineno}: expected 3 coordinates, got {len(parts)}")
            try:
                pts[k] = [float(p) for p in parts]
            except ValueError:
                raise CurveFormatError(f"line {lineno}: bad coordinate in {text!r}")
        if not np.isfinite(pts).all():
            raise CurveValidationError(f"component {ci}: non-finite coordinate")
        comps.append(make_curve(pts))
    trailing, lineno = next_content()
    if trailing is not None:
        raise CurveFormatError(f"line {lineno}: trailing content {trailing!r}")
    return Link(tuple(comps))


def dump_link(link: Link) -> str:
    """Serialise a Link in the curve file format (round-trips exactly)."""
    out = [f"components: {len(link.components)}"]
    for comp in link.components:
        out.append(f"points: {comp.n_vertices}")
        for p in comp.points:
            out.append(f"{float(p[0])!r} {float(p[1])!r} {float(p[2])!r}")
    return "\n".join(out) + "\n"
