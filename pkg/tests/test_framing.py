import math

import numpy as np
import pytest

import knotfields as kf
from knotfields import knots
from knotfields.checks import wrap_centered_diff
from knotfields.framing import NEAR_CURVE_THRESHOLD, FramingError

from conftest import circ_dist, FOUR_PI, TWO_PI


@pytest.fixture(scope="module")
def circle_framing():
    c = kf.make_curve(knots.circle(256))
    return c, kf.solid_angle_framing(c, eps=0.02)


def frenet_twist(curve):
    """Turn rate of the Frenet normal about the tangent, in turns."""
    nj = np.roll(curve.normals, -1, axis=0)
    tm = curve.tangents + np.roll(curve.tangents, -1, axis=0)
    tm /= np.linalg.norm(tm, axis=1, keepdims=True)
    s = (np.cross(curve.normals, nj) * tm).sum(1)
    c = (curve.normals * nj).sum(1)
    return float(np.arctan2(s, c).sum() / TWO_PI)


# ------------------------------------------------------------ construction

def test_circle_framing_planar_concentric(circle_framing):
    c, fr = circle_framing
    assert np.abs(fr.pushoff[:, 2]).max() < 1e-12
    rad = np.linalg.norm(fr.pushoff[:, :2], axis=1)
    assert np.ptp(rad) < 1e-9
    assert kf.framing_self_link(fr) == 0
    assert fr.closure_turns == 0


def test_pushoff_geometry_invariants(trefoil512):
    fr = kf.solid_angle_framing(trefoil512)
    off = fr.pushoff - trefoil512.points
    # in the normal plane to 1e-8 * eps
    along_t = np.abs((off * trefoil512.tangents).sum(1))
    assert along_t.max() < 1e-8 * fr.epsilon
    # at distance eps to 1e-8 relative
    dist = np.linalg.norm(off, axis=1)
    assert np.abs(dist - fr.epsilon).max() < 1e-8 * fr.epsilon


def test_framing_omega_zero_at_pushoff(trefoil512):
    fr = kf.solid_angle_framing(trefoil512)
    cfg = kf.EvalConfig(switch_threshold=NEAR_CURVE_THRESHOLD)
    eps_tilde = fr.epsilon / trefoil512.rho_min
    bound = 2.0 * eps_tilde * math.log(8.0 / eps_tilde)
    for i in range(0, trefoil512.n_vertices, 37):
        w = kf.omega_point(trefoil512, fr.pushoff[i], cfg)
        assert circ_dist(w, 0.0) < bound


def test_framing_self_links(trefoil512, figure_eight512, hopf, whitehead):
    assert kf.framing_self_link(kf.solid_angle_framing(trefoil512)) == 0
    assert kf.framing_self_link(kf.solid_angle_framing(figure_eight512)) == 0
    for ci in range(2):
        assert kf.framing_self_link(
            kf.solid_angle_framing(hopf, component=ci)) == -1
        assert kf.framing_self_link(
            kf.solid_angle_framing(whitehead, component=ci)) == 0


def test_alpha_winding_identity(trefoil512):
    # framing twist = frenet twist + alpha winding; SL = Tw + Wr = 0
    fr = kf.solid_angle_framing(trefoil512)
    winding = fr.closure_turns
    total = winding + frenet_twist(trefoil512) + kf.writhe(trefoil512)
    assert abs(total) < 2e-2


def test_omega_winds_4pi_on_normal_circle(trefoil512):
    cfg = kf.EvalConfig(switch_threshold=NEAR_CURVE_THRESHOLD)
    i = 123
    th = TWO_PI * np.arange(64) / 64
    xs = (trefoil512.points[i]
          + 0.01 * (np.cos(th)[:, None] * trefoil512.normals[i]
                    + np.sin(th)[:, None] * trefoil512.binormals[i]))
    w = np.array([kf.omega_point(trefoil512, x, cfg) for x in xs])
    lift = wrap_centered_diff(np.roll(w, -1) - w).sum()
    assert abs(lift - FOUR_PI) < 1e-9


def test_eps_too_large_rejected(trefoil512):
    with pytest.raises(FramingError, match="too large"):
        kf.solid_angle_framing(trefoil512, eps=0.2 * trefoil512.rho_min)


# ------------------------------------------------------------ local models

def test_local_model_anchor_and_limit():
    assert kf.local_omega_model(1e-6, 0.0, 0.0) < 1e-5
    th = np.linspace(0.1, TWO_PI - 0.1, 17)
    for eps in (1e-4, 1e-6):
        vals = kf.local_omega_model(eps, th, 0.3)
        ref = np.mod(2.0 * (th - 0.3), FOUR_PI)
        assert np.abs(vals - ref).max() < 1.5 * eps * math.log(8.0 / eps)


def test_local_model_matches_circle_field():
    # compare the lifted omega on a small normal circle against the model
    rho = 1.0
    eps_tilde = 0.05
    th = TWO_PI * np.arange(48) / 48
    base = np.array([rho, 0.0, 0.0])
    normal = np.array([-1.0, 0.0, 0.0])    # toward the centre
    binorm = np.array([0.0, 0.0, -1.0])    # T x N for this orientation
    w = np.array([kf.exact_circle_omega(
        rho, base + eps_tilde * rho * (math.cos(t) * normal + math.sin(t) * binorm))
        for t in th])
    # alpha = pi for the circle: levels anchored at the outward direction
    model = kf.local_omega_model(eps_tilde, th, math.pi)
    resid = wrap_centered_diff(w - model)
    # the O(eps) constant offset is not part of the model; remove the mean
    resid -= resid.mean()
    assert np.abs(resid).max() < 2.0 * eps_tilde


def test_local_model_sin_coefficient_scaling():
    rho = 1.0
    th = TWO_PI * np.arange(48) / 48
    base = np.array([rho, 0.0, 0.0])
    normal = np.array([-1.0, 0.0, 0.0])
    binorm = np.array([0.0, 0.0, -1.0])
    design = np.stack([np.ones_like(th), np.sin(th), np.cos(th)], axis=1)
    for eps_tilde in (0.05, 0.02):
        w = np.array([kf.exact_circle_omega(
            rho, base + eps_tilde * rho * (math.cos(t) * normal + math.sin(t) * binorm))
            for t in th])
        lift = np.cumsum(np.concatenate(
            [[w[0]], wrap_centered_diff(np.diff(w))]))
        resid = lift - 2.0 * (th - math.pi) - FOUR_PI * np.round(
            (lift - 2.0 * (th - math.pi)) / FOUR_PI)
        coef, *_ = np.linalg.lstsq(design, resid, rcond=None)
        target = eps_tilde * math.log(8.0 / eps_tilde)
        assert coef[1] > 0.0
        assert abs(coef[1] - target) / target < 0.1


# ------------------------------------------------------- hyperbola model

def test_hyperbola_unit_norm():
    t = np.linspace(-3, 3, 101)
    v = kf.hyperbola_projection(0.03, 1.1, t)
    assert np.abs(np.linalg.norm(v, axis=-1) - 1.0).max() < 1e-12


def test_hyperbola_vertex_sqrt_scaling():
    theta = math.pi / 2
    v1 = kf.hyperbola_projection(0.04, theta, 0.0)
    v2 = kf.hyperbola_projection(0.01, theta, 0.0)
    ang1 = math.acos(min(1.0, v1[2]))
    ang2 = math.acos(min(1.0, v2[2]))
    assert abs(ang1 / ang2 - 2.0) < 0.02


def test_hyperbola_asymptotes():
    eps, theta = 0.02, 0.9
    far = kf.hyperbola_projection(eps, theta, np.array([-14.0, 14.0]))
    az_m = math.atan2(far[0][1], far[0][0])
    az_p = math.atan2(far[1][1], far[1][0])
    # two longitudinal great circles separated by theta (mod pi)
    sep = abs((az_p - az_m + math.pi / 2) % math.pi - math.pi / 2)
    assert abs(sep - theta) < 1e-3 or abs(sep - (math.pi - theta)) < 1e-3
    assert np.hypot(far[0][0], far[0][1]).min() > 0.999


def test_hyperbola_matches_circle_projection():
    # project the round circle from a near-curve point and compare with the
    # model in the rotated frame
    rho, eps_tilde, theta = 1.0, 0.02, 0.8
    eps = eps_tilde * rho
    base = np.array([rho, 0.0, 0.0])
    normal = np.array([-1.0, 0.0, 0.0])
    binorm = np.array([0.0, 0.0, -1.0])
    tangent = np.array([0.0, -1.0, 0.0])
    x = base + eps * (math.cos(theta) * normal + math.sin(theta) * binorm)
    ts = np.linspace(-1.0, 1.0, 41)
    s_prime = np.sqrt(2.0 * eps * rho) * np.exp(ts)   # arclength offsets
    ang = s_prime / rho
    ys = np.stack([rho * np.cos(ang), -rho * np.sin(ang), np.zeros_like(ang)], 1)
    n = ys - x
    n /= np.linalg.norm(n, axis=1, keepdims=True)
    # local frame components, rotated by -theta/2 in the (N, B) plane
    nx = n @ normal
    ny = n @ binorm
    nz = n @ tangent
    ca, sa = math.cos(theta / 2), math.sin(theta / 2)
    rx = ca * nx + sa * ny
    ry = -sa * nx + ca * ny
    direct = np.stack([rx, ry, nz], axis=1)
    model = kf.hyperbola_projection(eps_tilde, theta, ts)
    ang_dev = np.arccos(np.clip((direct * model).sum(1), -1, 1))
    assert ang_dev.max() < 3.0 * eps_tilde


# -------------------------------------------------------- circle oracle

def test_exact_circle_center_and_axis():
    assert abs(kf.exact_circle_omega(1.0, [0.0, 0.0, 0.0]) - TWO_PI) < 1e-12
    z = 1.0
    assert abs(kf.exact_circle_omega(1.0, [0.0, 0.0, z])
               - TWO_PI * (1 - z / math.hypot(z, 1.0))) < 1e-12


def test_exact_circle_off_axis_consistent():
    x = [0.6, -0.3, 0.25]
    w1 = kf.exact_circle_omega(1.0, x)
    # against a direct fine-polygon evaluation
    fine = kf.make_curve(knots.circle(1 << 15))
    w2 = kf.omega_point_infinity(fine, x, kf.EvalConfig(switch_threshold=1e-7))
    assert circ_dist(w1, w2) < 1e-8


def test_exact_circle_on_ring_rejected():
    with pytest.raises(ValueError, match="on the circle"):
        kf.exact_circle_omega(1.0, [1.0, 0.0, 0.0])


def test_exact_circle_scales_with_rho():
    w1 = kf.exact_circle_omega(1.0, [0.5, 0.2, 0.3])
    w2 = kf.exact_circle_omega(2.0, [1.0, 0.4, 0.6])
    assert circ_dist(w1, w2) < 1e-8
