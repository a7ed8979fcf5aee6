"""Parametric sample curves: circles, torus knots, the figure-eight, and the
standard small links. All return (n, 3) point arrays sampled uniformly in
the curve parameter, closed without a duplicated endpoint."""

import numpy as np

TWO_PI = 2.0 * np.pi


def _t(n):
    return TWO_PI * np.arange(n) / n


def circle(n=400, radius=1.0, center=(0.0, 0.0, 0.0)):
    """Canonical oracle circle in the xy-plane: oriented so that on the +z
    axis the solid angle is 2pi(1 - z/sqrt(z^2+radius^2)).

    Vertices sit at the area-matched radius (radius * sqrt(dt/sin dt)), so
    the polygon subtends the same solid angle as the round circle to fourth
    order in the spacing.
    """
    t = _t(n)
    dt = TWO_PI / n
    r_eff = radius * np.sqrt(dt / np.sin(dt))
    c = np.asarray(center, dtype=np.float64)
    return c + np.stack([r_eff * np.cos(t), -r_eff * np.sin(t),
                         np.zeros(n)], axis=1)


def torus_knot(p=2, q=3, n=512, major=2.0, minor=1.0):
    t = _t(n)
    r = major + minor * np.cos(q * t)
    return np.stack([r * np.cos(p * t), r * np.sin(p * t),
                     -minor * np.sin(q * t)], axis=1)


def trefoil(n=512):
    return torus_knot(2, 3, n)


def figure_eight(n=512):
    t = _t(n)
    r = 2.0 + np.cos(2.0 * t)
    return np.stack([r * np.cos(3.0 * t), r * np.sin(3.0 * t),
                     np.sin(4.0 * t)], axis=1)


def twisted_unknot(n=512, lift=0.45):
    """Unknot with a single clasp: a planar lemniscate opened out in z."""
    t = _t(n)
    return np.stack([1.4 * np.sin(2.0 * t), 1.2 * np.cos(t),
                     lift * np.sin(t)], axis=1)


def hopf_link(n=300):
    """Two round circles with linking number +1."""
    t = _t(n)
    c1 = np.stack([np.cos(t), np.sin(t), np.zeros(n)], axis=1)
    c2 = np.stack([1.0 + np.cos(t), np.zeros(n), -np.sin(t)], axis=1)
    return c1, c2


def whitehead_link(n=512):
    """Whitehead link: a round circle threaded twice, with opposite signs,
    by a clasped loop (linking number 0)."""
    t = _t(n)
    u = np.stack([np.cos(t), np.sin(t), np.zeros(n)], axis=1)
    w = np.stack([1.4 * np.sin(2.0 * t), 0.6 * np.cos(t),
                  0.5 * np.sin(t)], axis=1)
    return u, w


def borromean_rings(n=400, a=1.0, b=0.5):
    """Three ellipses in orthogonal planes; pairwise unlinked."""
    t = _t(n)
    z = np.zeros(n)
    r1 = np.stack([a * np.cos(t), b * np.sin(t), z], axis=1)
    r2 = np.stack([z, a * np.cos(t), b * np.sin(t)], axis=1)
    r3 = np.stack([b * np.sin(t), z, a * np.cos(t)], axis=1)
    return r1, r2, r3
