import numpy as np
import pytest

import knotfields as kf
from knotfields import knots
from knotfields.spherical import GeneralPositionError, from_unit_vectors

from conftest import circ_dist, FOUR_PI, TWO_PI


def planar_crossing_count(pts2d):
    """Independent oracle: transverse segment crossings of a closed 2-D
    polyline, by orientation tests."""

    def ccw(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    n = len(pts2d)
    count = 0
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            a, b = pts2d[i], pts2d[(i + 1) % n]
            c, d = pts2d[j], pts2d[(j + 1) % n]
            if (ccw(a, b, c) > 0) != (ccw(a, b, d) > 0) and \
               (ccw(c, d, a) > 0) != (ccw(c, d, b) > 0):
                count += 1
    return count


def gnomonic(curve, x):
    """Central projection of the view from x onto a plane, for the oracle."""
    n = curve.points - np.asarray(x, float)
    n /= np.linalg.norm(n, axis=1, keepdims=True)
    e3 = n.mean(0)
    e3 /= np.linalg.norm(e3)
    assert (n @ e3 > 0.2).all(), "viewpoint too close for a single chart"
    e1 = np.cross(e3, [0.0, 0.0, 1.0])
    if np.linalg.norm(e1) < 1e-6:
        e1 = np.cross(e3, [0.0, 1.0, 0.0])
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(e3, e1)
    return np.stack([n @ e1 / (n @ e3), n @ e2 / (n @ e3)], axis=1)


# ------------------------------------------------------------------ project

def test_project_circle_from_center_is_great_circle():
    c = kf.make_curve(knots.circle(512))
    sp = kf.project(c, np.zeros(3))
    assert np.abs(np.linalg.norm(sp.verts, axis=1) - 1.0).max() < 1e-12
    assert np.abs(sp.turning_angles).max() < 1e-9
    assert kf.crossing_count(sp) == 0


def test_project_circle_from_axis_total_turning():
    c = kf.make_curve(knots.circle(512))
    sp = kf.project(c, np.array([0.0, 0.0, 1.0]))
    assert abs(abs(kf.total_turning(sp)) - TWO_PI * np.cos(np.pi / 4)) < 1e-4


def test_project_on_curve_rejected():
    c = kf.make_curve(knots.circle(64))
    with pytest.raises(ValueError, match="on the curve"):
        kf.project(c, c.points[3])


def test_project_polyline_invariants(trefoil512):
    sp = kf.project(trefoil512, np.array([4.0, 1.0, 2.0]))
    # poles orthogonal to both arc endpoints
    nxt = np.roll(sp.verts, -1, axis=0)
    assert np.abs((sp.poles * sp.verts).sum(1)).max() < 1e-10
    assert np.abs((sp.poles * nxt).sum(1)).max() < 1e-10
    assert np.abs(np.linalg.norm(sp.poles, axis=1) - 1.0).max() < 1e-10
    # arc tangents unit and tangent (orthogonal to vert)
    assert np.abs(np.linalg.norm(sp.arc_tangents, axis=1) - 1.0).max() < 1e-12
    assert np.abs((sp.arc_tangents * sp.verts).sum(1)).max() < 1e-12


def test_project_crossings_match_planar_oracle(figure_eight512):
    rng = np.random.default_rng(8)
    done = 0
    while done < 5:
        u = rng.normal(size=3)
        x = 25.0 * u / np.linalg.norm(u)
        try:
            d = kf.crossing_count(kf.project(figure_eight512, x))
        except GeneralPositionError:
            continue
        assert d == planar_crossing_count(gnomonic(figure_eight512, x))
        done += 1


# ----------------------------------------------------------- crossing count

def test_crossings_simple_circle_zero():
    c = kf.make_curve(knots.circle(200))
    assert kf.crossing_count(kf.project(c, np.array([3.0, 1.0, 2.0]))) == 0


def test_crossings_trefoil_distant_generic(trefoil512):
    d = kf.crossing_count(kf.project(trefoil512, np.array([1.0, 2.0, 30.0])))
    assert d == 3


def test_crossing_jump_across_tangent_developable(trefoil512):
    # the forward tangent surface near y(s) + t T(s) has normal ~ B(s)
    i = 70
    base = trefoil512.points[i] + 1.5 * trefoil512.tangents[i]
    step = 0.05 * trefoil512.binormals[i]
    d_plus = kf.crossing_count(kf.project(trefoil512, base + step))
    d_minus = kf.crossing_count(kf.project(trefoil512, base - step))
    assert abs(d_plus - d_minus) == 1


def test_crossings_degenerate_raises():
    # two arcs crossing exactly at a shared-vertex direction: view a square
    # from a point aligned with one vertex... construct directly on sphere
    verts = np.array([
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [-1.0, 0.2, 0.2],
        [0.0, -1.0, 1.0],
        [0.3, -1.0, -1.0],
    ])
    verts[3] = verts[0] + np.array([0, 1e-12, 0])  # crossing within 1e-9 of a vertex
    sp = from_unit_vectors(verts)
    with pytest.raises(GeneralPositionError):
        kf.crossing_count(sp)


# ----------------------------------------------------------- total turning

def test_total_turning_great_circle_zero():
    c = kf.make_curve(knots.circle(1024))
    assert abs(kf.total_turning(kf.project(c, np.zeros(3)))) < 1e-9


def test_total_turning_small_circle_matches_cap():
    # inscribed spherical polygon on the small circle at polar angle th0
    th0 = 1.1
    n = 16384
    t = TWO_PI * np.arange(n) / n
    verts = np.stack([np.sin(th0) * np.cos(t), np.sin(th0) * np.sin(t),
                      np.full(n, np.cos(th0))], axis=1)
    sp = from_unit_vectors(verts)
    assert abs(kf.total_turning(sp) - TWO_PI * np.cos(th0)) < 1e-6


def test_total_turning_gauss_bonnet_exact_any_resolution():
    # 2pi - (fan area from the cap pole) == total turning, exactly, even coarse
    th0 = 0.8
    for n in (12, 100):
        t = TWO_PI * np.arange(n) / n
        verts = np.stack([np.sin(th0) * np.cos(t), np.sin(th0) * np.sin(t),
                          np.full(n, np.cos(th0))], axis=1)
        sp = from_unit_vectors(verts)
        from knotfields import kernels
        area = kernels.fan_sweep(np.ascontiguousarray(verts), np.zeros(3),
                                 np.array([0.0, 0.0, 1.0]))
        assert abs((TWO_PI - area) - kf.total_turning(sp)) < 1e-9


def test_total_turning_mirror_negates(trefoil512):
    x = np.array([3.0, -1.0, 2.0])
    sp = kf.project(trefoil512, x)
    mirrored = kf.make_curve((trefoil512.points - x) * [1, 1, -1] + x)
    spm = kf.project(mirrored, x)
    assert abs(kf.total_turning(spm) + kf.total_turning(sp)) < 1e-12


# ------------------------------------------------------------------- dual

def test_dual_great_circle_degenerates_to_point():
    c = kf.make_curve(knots.circle(256))
    sp = kf.project(c, np.zeros(3))
    dual = kf.dual_curve(sp)
    assert np.abs(dual.verts - dual.verts[0]).max() < 1e-9
    assert abs(kf.dual_signed_length(sp)) < 1e-9


def test_dual_small_circle():
    th0 = 0.7
    n = 4096
    t = TWO_PI * np.arange(n) / n
    verts = np.stack([np.sin(th0) * np.cos(t), np.sin(th0) * np.sin(t),
                      np.full(n, np.cos(th0))], axis=1)
    sp = from_unit_vectors(verts)
    dual = kf.dual_curve(sp)
    # dual lives at polar angle pi/2 - th0 (or its supplement, fixed sign)
    pol = np.arccos(np.clip(dual.verts[:, 2], -1, 1))
    assert np.abs(pol - (np.pi / 2 + th0 - np.pi / 2 * 0)).max() < 1e-3 or \
           np.abs(pol - abs(np.pi / 2 - th0)).max() < 1e-3
    assert abs(abs(kf.dual_signed_length(sp)) - TWO_PI * np.cos(th0)) < 1e-6


def test_dual_signed_length_equals_total_turning(trefoil512, figure_eight512):
    for curve, x in ((trefoil512, [3.5, 0.5, 1.0]),
                     (figure_eight512, [0.3, -4.0, 2.0])):
        sp = kf.project(curve, np.array(x))
        assert abs(kf.dual_signed_length(sp) - kf.total_turning(sp)) < 1e-9


def test_dual_cusps_of_one_loop_two_inflection_curve():
    # bent lemniscate seen from above: one crossing, two inflections
    # (viewpoint slightly off the symmetry axis for general position)
    c = kf.make_curve(knots.twisted_unknot(1024))
    sp = kf.project(c, np.array([0.4, 0.3, 18.0]))
    assert kf.crossing_count(sp) == 1
    signs = np.sign(sp.turning_angles)
    flips = int((signs != np.roll(signs, 1)).sum())
    assert flips == 2
    # the two maximal runs between cusps have opposite signed length
    run_sign = set()
    start = int(np.argmax(signs != np.roll(signs, 1)))
    order = np.roll(signs, -start)
    boundaries = np.nonzero(order != np.roll(order, 1))[0]
    run_sign = {order[b] for b in boundaries}
    assert run_sign == {-1.0, 1.0}


# ------------------------------------------------------------ gauss-bonnet

def test_gb_circle_center():
    c = kf.make_curve(knots.circle(512))
    assert circ_dist(kf.omega_gauss_bonnet(c, np.zeros(3)), TWO_PI) < 1e-9


def test_gb_far_field():
    c = kf.make_curve(knots.circle(256))
    w = kf.omega_gauss_bonnet(c, np.array([0.0, 0.2, 100.0]))
    assert circ_dist(w, 0.0) < 1e-3


def test_gb_matches_triangle_sum_random_trefoil(trefoil512):
    from knotfields.checks import sample_generic_points

    cfg = kf.EvalConfig()
    for x in sample_generic_points(trefoil512, 25, seed=17):
        wg = kf.omega_gauss_bonnet(trefoil512, x)
        wt = kf.omega_point_infinity(trefoil512, x, cfg)
        assert circ_dist(wg, wt) < 1e-3 * FOUR_PI


def test_gb_polyline_exactness_coarse_polygon():
    # coarse knotted polygon: the two exact routes agree to round-off
    rng = np.random.default_rng(42)
    pts = knots.trefoil(14) + 0.05 * rng.normal(size=(14, 3))
    c = kf.make_curve(pts)
    for x in ([3.3, 1.2, 2.1], [-2.0, 2.5, -1.7], [0.1, 0.2, 4.0]):
        wg = kf.omega_gauss_bonnet(c, np.array(x))
        wt = kf.omega_point_infinity(c, np.array(x), kf.EvalConfig())
        assert circ_dist(wg, wt) < 1e-9


def test_gb_parity_invariant_within_chamber(trefoil512):
    x = np.array([1.0, 2.0, 30.0])
    d0 = kf.crossing_count(kf.project(trefoil512, x))
    for _ in range(5):
        d = kf.crossing_count(kf.project(trefoil512, x + 0.02 * np.random.default_rng(1).normal(size=3)))
        assert d % 2 == d0 % 2
