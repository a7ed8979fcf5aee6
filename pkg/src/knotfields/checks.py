"""Self-verification suites: cross-evaluator agreement, circulation,
harmonicity and the self-linking identity. Used by the ``verify`` CLI
command and by the acceptance tests.
"""

import math

import numpy as np

from . import kernels, spherical
from .curve import as_link, linking_number, make_curve, projective_twist, writhe
from .solidangle import EvalConfig, GridSpec, omega_grid, omega_point

FOUR_PI = 4.0 * math.pi
TWO_PI = 2.0 * math.pi


def circ_dist(a, b, period=FOUR_PI):
    d = np.mod(np.asarray(a) - np.asarray(b), period)
    return np.minimum(d, period - d)


def wrap_centered_diff(d, period=FOUR_PI):
    """Map differences to (-period/2, period/2]."""
    half = 0.5 * period
    return half - np.mod(half - np.asarray(d), period)


def link_extent(link):
    pts = link.concat_points
    center = 0.5 * (pts.min(0) + pts.max(0))
    radius = float(np.linalg.norm(pts - center, axis=1).max())
    return center, radius


def sample_generic_points(link, n, seed, ninf=None, shell=(1.1, 2.5),
                          axis_margin=0.06, cusp_margin=2e-3,
                          dist_margin_rel=0.05, require_crossings=True):
    """Seeded sample of evaluation points in general position for every
    evaluator: off the curve, clear of both tangent-developable surfaces,
    clear of the reference-axis Dirac strings, and (optionally) with all
    component projections admitting a clean crossing count."""
    link = as_link(link)
    ninf = np.array([0.0, 0.0, 1.0]) if ninf is None else np.asarray(ninf, float)
    center, radius = link_extent(link)
    rng = np.random.default_rng(seed)
    out = np.empty((n, 3))
    got = 0
    attempts = 0
    max_attempts = 500 * n
    while got < n:
        if attempts >= max_attempts:
            raise RuntimeError(
                f"could not find {n} generic points in {max_attempts} draws")
        attempts += 1
        u = rng.normal(size=3)
        u /= np.linalg.norm(u)
        r = radius * (shell[0] + (shell[1] - shell[0]) * rng.random())
        x = center + r * u
        ok = True
        for comp in link.components:
            pts = comp.points
            if kernels.min_segment_distance(np.ascontiguousarray(pts), x) \
                    < dist_margin_rel * radius:
                ok = False
                break
            nv = pts - x
            nv /= np.linalg.norm(nv, axis=1, keepdims=True)
            nt = (nv * comp.tangents).sum(1)
            if (1.0 - np.abs(nt)).min() < cusp_margin:
                ok = False
                break
            nd = nv @ ninf
            if 1.0 - np.abs(nd).max() < axis_margin:
                ok = False
                break
            if require_crossings:
                _, status = kernels.arc_crossings(np.ascontiguousarray(nv))
                if status != 0:
                    ok = False
                    break
        if ok:
            out[got] = x
            got += 1
    return out


def omega_all_evaluators(link, x, cfg: EvalConfig):
    """Solid angle by every route, as a dict evaluator -> value."""
    link = as_link(link)
    vals = {}
    for ev in ("infinity_triangle", "infinity_quadrature",
               "tangent_dev_plus", "tangent_dev_minus", "gauss_bonnet"):
        vals[ev] = omega_point(link, x, cfg.with_evaluator(ev))
    return vals


def check_cross_evaluator(link, n_points=100, seed=1, tol=1e-3 * FOUR_PI):
    link = as_link(link)
    cfg = EvalConfig()
    xs = sample_generic_points(link, n_points, seed)
    worst = 0.0
    for x in xs:
        vals = list(omega_all_evaluators(link, x, cfg).values())
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                worst = max(worst, float(circ_dist(vals[i], vals[j])))
    return {"name": "cross_evaluator", "passed": bool(worst <= tol),
            "value": worst, "tolerance": tol,
            "detail": f"max pairwise disagreement over {n_points} points"}


def lift_change_along_loop(link, loop_points, cfg=None):
    """Total change of the continuous lift of omega along a closed loop."""
    # loops hugging the curve need the near-curve threshold (see framing)
    cfg = cfg or EvalConfig(switch_threshold=1e-7)
    w = np.array([omega_point(link, x, cfg) for x in loop_points])
    d = wrap_centered_diff(np.roll(w, -1) - w)
    return float(d.sum())


def normal_plane_loop(curve, radius, n_points=1000, vertex=0):
    th = TWO_PI * np.arange(n_points) / n_points
    y = curve.points[vertex]
    return (y + radius * (np.cos(th)[:, None] * curve.normals[vertex]
                          + np.sin(th)[:, None] * curve.binormals[vertex]))


def check_circulation(link, seed=1, n_loop=1000, tol=1e-6):
    link = as_link(link)
    comp = link.components[0]
    clearance = comp.min_self_distance()
    for other in link.components[1:]:
        clearance = min(clearance, float(
            kernels.min_cross_distance(comp.points, other.points)))
    r = min(0.3 * clearance, 0.4 * comp.rho_min)
    loop = normal_plane_loop(comp, r, n_loop)
    lk = sum(linking_number(make_curve(loop), c) for c in link.components)
    change = lift_change_along_loop(link, loop)
    err_linked = abs(change - FOUR_PI * lk)
    center, radius = link_extent(link)
    far_loop = loop + 20.0 * radius * np.array([1.0, 0.0, 0.0])
    err_far = abs(lift_change_along_loop(link, far_loop))
    passed = bool(err_linked <= tol and err_far <= tol and lk != 0)
    return {"name": "circulation", "passed": passed,
            "value": max(err_linked, err_far), "tolerance": tol,
            "detail": f"loop lk={lk}: lift change error {err_linked:.2e}; "
                      f"unlinked loop drift {err_far:.2e}"}


def check_sl_identity(link, n_viewpoints=40, seed=2, tol=2e-2):
    """Twist of the line-of-sight framing plus writhe is an integer whose
    parity matches the crossing count."""
    link = as_link(link)
    worst = 0.0
    parity_ok = True
    for comp in link.components:
        xs = sample_generic_points(comp, n_viewpoints, seed)
        wr = writhe(comp)
        for x in xs:
            sl = projective_twist(comp, x) + wr
            worst = max(worst, abs(sl - round(sl)))
            d = spherical.crossing_count(spherical.project(comp, x))
            if (round(sl) - d) % 2 != 0:
                parity_ok = False
    passed = bool(worst <= tol and parity_ok)
    return {"name": "sl_twist_writhe", "passed": passed, "value": worst,
            "tolerance": tol,
            "detail": f"max deviation from integer {worst:.2e}; "
                      f"parity vs crossing count {'ok' if parity_ok else 'FAILED'}"}


def unwrapped_laplacian(values, spacing):
    """Seven-point Laplacian with neighbour differences unwrapped mod 4pi,
    at interior nodes."""
    c = values[1:-1, 1:-1, 1:-1]
    lap = np.zeros_like(c)
    for axis in range(3):
        up = np.roll(values, -1, axis=axis)[1:-1, 1:-1, 1:-1]
        dn = np.roll(values, 1, axis=axis)[1:-1, 1:-1, 1:-1]
        lap += wrap_centered_diff(up - c) + wrap_centered_diff(dn - c)
    return lap / spacing ** 2


def _ray_surface_distance(xs, curve_points, ninf):
    """Distance to the surface swept by dragging the curve to infinity
    along ninf, approximated over curve samples (chunked to bound memory)."""
    out = np.empty(xs.shape[0])
    chunk = max(1, 2_000_000 // max(1, curve_points.shape[0]))
    for lo in range(0, xs.shape[0], chunk):
        hi = min(xs.shape[0], lo + chunk)
        v = xs[lo:hi, None, :] - curve_points[None, :, :]
        t = np.maximum(v @ ninf, 0.0)
        d = v - t[:, :, None] * ninf[None, None, :]
        out[lo:hi] = np.linalg.norm(d, axis=2).min(1)
    return out


def harmonicity_ratio(link, center, half_extent, n_coarse=25, workers=1,
                      cfg=None):
    """RMS unwrapped-Laplacian residual ratio between spacing h and h/2,
    compared at the coarse interior nodes with a fixed physical mask."""
    link = as_link(link)
    n_fine = 2 * n_coarse - 1
    h = 2.0 * half_extent / (n_coarse - 1)
    origin = np.asarray(center, float) - half_extent
    # grids reach close to the curve: use the near-curve switch threshold
    cfg = cfg or EvalConfig(switch_threshold=1e-6)
    coarse = omega_grid(link, GridSpec(origin, h, (n_coarse,) * 3), cfg, workers)
    fine = omega_grid(link, GridSpec(origin, 0.5 * h, (n_fine,) * 3), cfg, workers)
    lap_c = unwrapped_laplacian(coarse.values, h)
    # coarse interior node (i,j,k) is fine node (2i,2j,2k); the fine interior
    # array is offset by one fine index, so the common nodes sit at 1::2
    lap_f = unwrapped_laplacian(fine.values, 0.5 * h)[1::2, 1::2, 1::2]
    grid_int = GridSpec(origin + h, h, (n_coarse - 2,) * 3)
    xs = grid_int.node_coords(0, grid_int.n_nodes)
    pts = link.concat_points
    dist_curve = np.empty(xs.shape[0])
    s = np.empty(xs.shape[0])
    ci = np.empty(xs.shape[0], dtype=np.int64)
    kernels.distance_block(np.ascontiguousarray(pts), link.offsets,
                           np.concatenate([c.arclengths for c in link.components]),
                           np.concatenate([c.seg_lengths for c in link.components]),
                           xs, dist_curve, s, ci)
    dist_surf = _ray_surface_distance(xs, pts, cfg.n_inf)
    mask = (dist_curve > 3.0 * h) & (dist_surf > 3.0 * h)
    mask = mask.reshape(lap_c.shape)
    if not mask.any():
        raise RuntimeError("harmonicity mask is empty; enlarge the box")
    rms_c = float(np.sqrt(np.mean(lap_c[mask] ** 2)))
    rms_f = float(np.sqrt(np.mean(lap_f[mask] ** 2)))
    return rms_c / rms_f, rms_c, rms_f


def check_harmonicity(link, n_coarse=25, min_ratio=3.0, workers=1):
    link = as_link(link)
    center, radius = link_extent(link)
    ratio, rms_c, rms_f = harmonicity_ratio(link, center, 1.6 * radius,
                                            n_coarse, workers)
    return {"name": "harmonicity", "passed": bool(ratio >= min_ratio),
            "value": ratio, "tolerance": min_ratio,
            "detail": f"RMS Laplacian {rms_c:.3e} -> {rms_f:.3e} under h/2 "
                      f"(ratio {ratio:.2f}, O(h^2) would be 4)"}


def run_verify(link, n_points=100, seed=1):
    link = as_link(link)
    checks = [
        check_cross_evaluator(link, n_points=n_points, seed=seed),
        check_circulation(link, seed=seed),
        check_sl_identity(link, n_viewpoints=max(10, n_points // 4), seed=seed + 1),
        check_harmonicity(link),
    ]
    return {"seed": seed, "n_points": n_points,
            "passed": bool(all(c["passed"] for c in checks)), "checks": checks}
