"""The solid-angle framing, the near-curve local models, and the circle
oracle used throughout the tests.

The framing direction at arclength s is the angle alpha(s), measured in the
normal plane from the Frenet normal, at which the solid angle vanishes
mod 4pi. Around a small normal circle the (lifted) solid angle increases by
exactly 4pi, so alpha is found by bracketing the increasing zero crossing
and root-polishing; it is a global quantity, so no local formula applies.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .curve import Link, OrientedCurve, as_link, linking_number, make_curve
from .solidangle import EvalConfig, _eval_block, omega_point

FOUR_PI = 4.0 * math.pi
TWO_PI = 2.0 * math.pi

_N_SCAN = 16

# Points epsilon-close to the curve always see some vertex direction nearly
# antipodal to any fixed axis, so the grid-oriented switch threshold cannot
# be met there. The exact triangle sum stays well-conditioned until the
# string actually hits a vertex, so near-curve work drops the threshold to
# this value.
NEAR_CURVE_THRESHOLD = 1e-7


class FramingError(RuntimeError):
    """Framing construction failed (bad epsilon or unresolved bracket)."""


@dataclass(frozen=True, eq=False)
class Framing:
    """Solid-angle framing of one link component."""

    base: OrientedCurve
    alpha: np.ndarray      # (n,) radians, unwrapped along the curve
    pushoff: np.ndarray    # (n, 3) points at offset epsilon
    epsilon: float

    @property
    def closure_turns(self) -> int:
        """Net turns of alpha relative to the Frenet frame over one pass."""
        ext = np.unwrap(np.append(self.alpha, self.alpha[0]), period=TWO_PI)
        return round((ext[-1] - ext[0]) / TWO_PI)

    def pushoff_curve(self) -> OrientedCurve:
        return make_curve(self.pushoff)


def _wrap_centered(w):
    """Map omega values to the representative in (-2pi, 2pi]."""
    return TWO_PI - np.mod(TWO_PI - np.asarray(w), FOUR_PI)


def solid_angle_framing(obj, eps: float | None = None,
                        cfg: EvalConfig | None = None,
                        component: int = 0) -> Framing:
    """Construct the solid-angle framing of one component of ``obj``.

    For links the zero level set of the total solid angle is used, so the
    framing of each component feels every other component.
    """
    link = as_link(obj)
    curve = link.components[component]
    cfg = cfg or EvalConfig()
    if cfg.switch_threshold > NEAR_CURVE_THRESHOLD:
        cfg = replace(cfg, switch_threshold=NEAR_CURVE_THRESHOLD)

    rho = curve.rho_min
    clearance = curve.min_self_distance()
    for ci, other in enumerate(link.components):
        if ci != component:
            clearance = min(clearance, float(
                kernels.min_cross_distance(curve.points, other.points)))
    if eps is None:
        eps = 0.02 * rho
    if not (eps < 0.05 * rho and eps < 0.2 * clearance):
        raise FramingError(
            f"eps={eps:g} too large: need eps < {0.05 * rho:g} (0.05 rho_min) "
            f"and eps < {0.2 * clearance:g} (0.2 min self-distance)")

    n = curve.n_vertices
    thetas = TWO_PI * np.arange(_N_SCAN) / _N_SCAN
    # scan all normal circles in one block evaluation
    direc = (np.cos(thetas)[None, :, None] * curve.normals[:, None, :]
             + np.sin(thetas)[None, :, None] * curve.binormals[:, None, :])
    xs = (curve.points[:, None, :] + eps * direc).reshape(-1, 3)
    scan = _wrap_centered(_omega_block(link, xs, cfg)).reshape(n, _N_SCAN)

    alphas = np.empty(n)
    prev = None
    for i in range(n):
        alphas[i] = _root_on_circle(link, curve, i, eps, cfg, thetas, scan[i], prev)
        prev = alphas[i]
    alphas = np.unwrap(alphas, period=TWO_PI)
    pushoff = (curve.points
               + eps * (np.cos(alphas)[:, None] * curve.normals
                        + np.sin(alphas)[:, None] * curve.binormals))
    alphas.flags.writeable = False
    pushoff.flags.writeable = False
    return Framing(base=curve, alpha=alphas, pushoff=pushoff, epsilon=float(eps))


def _omega_block(link: Link, xs, cfg: EvalConfig):
    out = np.empty(xs.shape[0])
    status = np.empty(xs.shape[0], dtype=np.int8)
    _eval_block(link, np.ascontiguousarray(xs), cfg, out, status)
    if (status != 0).any():
        k = int(np.nonzero(status != 0)[0][0])
        raise FramingError(
            f"omega evaluation failed on the normal circle (status {status[k]}); "
            "reduce eps or refine the curve")
    return out


def _root_on_circle(link, curve, i, eps, cfg, thetas, phi, prev_alpha):
    """Increasing zero of the wrapped solid angle on the normal circle at
    vertex i; phi holds the scanned wrapped values."""

    def f(theta):
        x = (curve.points[i] + eps * (math.cos(theta) * curve.normals[i]
                                      + math.sin(theta) * curve.binormals[i]))
        return float(_wrap_centered(omega_point(link, x, cfg)))

    step = TWO_PI / _N_SCAN
    roots = []
    for k in range(_N_SCAN):
        k2 = (k + 1) % _N_SCAN
        a, b = phi[k], phi[k2]
        if a < 0.0 <= b and abs(a) < 2.0 and abs(b) < 2.0:
            lo = thetas[k]
            root = brentq(f, lo, lo + step, xtol=1e-10)
            roots.append(root % TWO_PI)
    if not roots:
        raise FramingError(
            f"no increasing zero bracket of omega mod 4pi on the normal circle "
            f"at vertex {i}; the curve is too coarse for eps={eps:g}")
    if prev_alpha is None:
        return roots[0]
    # continuity: nearest root to the previous vertex (circular distance)
    d = [abs((r - prev_alpha + math.pi) % TWO_PI - math.pi) for r in roots]
    return roots[int(np.argmin(d))]


def framing_self_link(framing: Framing) -> int:
    """Self-linking number: linking of the base with its pushoff."""
    return linking_number(framing.base, framing.pushoff_curve())


def local_omega_model(eps_tilde: float, theta, alpha: float):
    """Leading near-curve model: winding plus the logarithmic curvature
    correction that bunches level sets along the local normal. Mod 4pi."""
    if not eps_tilde > 0.0:
        raise ValueError("eps_tilde must be positive")
    theta = np.asarray(theta, dtype=np.float64)
    w = 2.0 * (theta - alpha) + eps_tilde * math.log(8.0 / eps_tilde) * np.sin(theta)
    out = np.mod(w, FOUR_PI)
    return float(out) if out.ndim == 0 else out


def hyperbola_projection(eps_tilde: float, theta: float, t):
    """Near-tangent limit of the projected curve: a hyperbola on the
    observation sphere, in the frame rotated by theta/2 about the tangent.

    ``t`` is the logarithmic arclength coordinate; the vertex sits at t=0 and
    approaches the tangent direction (the pole) as sqrt(eps_tilde).
    """
    if not eps_tilde > 0.0:
        raise ValueError("eps_tilde must be positive")
    t = np.asarray(t, dtype=np.float64)
    scale = 1.0 / np.sqrt(1.0 + eps_tilde * (np.cosh(2.0 * t) - math.cos(theta)))
    root = math.sqrt(2.0 * eps_tilde)
    v = np.stack([
        root * math.cos(0.5 * theta) * np.sinh(t) * scale,
        -root * math.sin(0.5 * theta) * np.cosh(t) * scale,
        scale * np.ones_like(t),
    ], axis=-1)
    return v


def oracle_circle_points(n: int, rho: float = 1.0) -> np.ndarray:
    """Canonical oracle circle: radius rho in the xy-plane, oriented so that
    on the +z axis omega = 2pi(1 - z/sqrt(z^2+rho^2)); vertices at the
    area-matched radius (see ``knots.circle``)."""
    from . import knots

    return knots.circle(n, radius=rho)


def exact_circle_omega(rho: float, x) -> float:
    """Solid angle of the canonical circle of radius rho at x.

    On the axis this is the closed-form spherical cap value; off the axis the
    sampled polygon is refined by doubling until successive fan evaluations
    agree to 1e-9.
    """
    if not rho > 0.0:
        raise ValueError("rho must be positive")
    x = np.asarray(x, dtype=np.float64).reshape(3)
    ring_dist = math.hypot(math.hypot(x[0], x[1]) - rho, x[2])
    if ring_dist <= 1e-9:
        raise ValueError("x lies on the circle")
    if math.hypot(x[0], x[1]) < 1e-12 * rho:
        z = x[2]
        return float(kernels.mod4pi(TWO_PI * (1.0 - z / math.hypot(z, rho))))
    ninf = np.array([0.0, 0.0, 1.0])
    rnd = EvalConfig(fallback_seed=7).fallback_axis
    out = np.empty(1)
    status = np.empty(1, dtype=np.int8)
    offs = np.array([0, 0], dtype=np.int64)
    prev = None
    n = 512
    while n <= 2 ** 20:
        pts = np.ascontiguousarray(oracle_circle_points(n, rho))
        offs[1] = n
        kernels.omega_inf_block(pts, offs, x[None, :], ninf, rnd,
                                NEAR_CURVE_THRESHOLD, False, out, status)
        if status[0] != 0:
            raise RuntimeError(f"oracle evaluation failed with status {status[0]}")
        w = float(out[0])
        if prev is not None:
            d = abs(w - prev)
            if min(d, FOUR_PI - d) < 1e-9:
                return w
        prev = w
        n *= 2
    raise RuntimeError("circle oracle did not converge to 1e-9 by 2^20 points")
