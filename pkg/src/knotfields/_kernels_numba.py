"""Numba-jitted inner loops.

Function-for-function mirror of ``_kernels_numpy``; ``kernels`` re-exports one
of the two sets based on the backend flag. Hot paths use explicit component
arithmetic to avoid small-array temporaries inside the loops.

Closed polylines are arrays of shape (n, 3) with no duplicated endpoint;
segment i joins vertex i to vertex (i+1) % n. Multi-component inputs arrive
concatenated, with ``offs`` holding component start indices (length C+1).

Status codes (shared with the numpy backend):
    0 ok; 1 evaluation point on the curve; 2 all axis choices exhausted;
    3 degenerate geometry (projection not in general position, or too close
    to the discontinuity surface of the chosen evaluator).
"""

import math

import numpy as np
from numba import njit

FOUR_PI = 4.0 * math.pi
TWO_PI = 2.0 * math.pi

ON_CURVE_EPS = 1e-9
SURFACE_EPS = 1e-9
MAX_CROSSINGS = 4096

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def mod4pi(v):
    w = v - FOUR_PI * math.floor(v / FOUR_PI)
    if w >= FOUR_PI:
        w -= FOUR_PI
    if w < 0.0:
        w += FOUR_PI
    return w


@njit(**_JIT)
def min_segment_distance(points, x):
    """Exact minimum distance from x to the closed polyline."""
    n = points.shape[0]
    best = 1e300
    for i in range(n):
        j = i + 1
        if j == n:
            j = 0
        ax = points[i, 0]
        ay = points[i, 1]
        az = points[i, 2]
        bx = points[j, 0] - ax
        by = points[j, 1] - ay
        bz = points[j, 2] - az
        wx = x[0] - ax
        wy = x[1] - ay
        wz = x[2] - az
        bb = bx * bx + by * by + bz * bz
        t = 0.0
        if bb > 0.0:
            t = (wx * bx + wy * by + wz * bz) / bb
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
        dx = wx - t * bx
        dy = wy - t * by
        dz = wz - t * bz
        d2 = dx * dx + dy * dy + dz * dz
        if d2 < best:
            best = d2
    return math.sqrt(best)


@njit(**_JIT)
def vertex_min_axis_denom(points, x, axis):
    """Min over vertices of 1 + n.axis for the projected directions n."""
    n = points.shape[0]
    best = 2.0
    for i in range(n):
        rx = points[i, 0] - x[0]
        ry = points[i, 1] - x[1]
        rz = points[i, 2] - x[2]
        rn = math.sqrt(rx * rx + ry * ry + rz * rz)
        if rn == 0.0:
            return 0.0
        d = 1.0 + (rx * axis[0] + ry * axis[1] + rz * axis[2]) / rn
        if d < best:
            best = d
    return best


@njit(**_JIT)
def fan_sweep(points, x, axis):
    """Signed spherical fan area of the projected polyline with apex ``axis``.

    Per segment this is the Oosterom-Strackee excess of the geodesic triangle
    (axis, n_i, n_{i+1}), which makes the sum exact for polylines (mod 4pi).
    """
    n = points.shape[0]
    ax = axis[0]
    ay = axis[1]
    az = axis[2]
    px = points[0, 0] - x[0]
    py = points[0, 1] - x[1]
    pz = points[0, 2] - x[2]
    pr = 1.0 / math.sqrt(px * px + py * py + pz * pz)
    px *= pr
    py *= pr
    pz *= pr
    fx = px
    fy = py
    fz = pz
    total = 0.0
    for i in range(1, n + 1):
        if i == n:
            cx = fx
            cy = fy
            cz = fz
        else:
            cx = points[i, 0] - x[0]
            cy = points[i, 1] - x[1]
            cz = points[i, 2] - x[2]
            cr = 1.0 / math.sqrt(cx * cx + cy * cy + cz * cz)
            cx *= cr
            cy *= cr
            cz *= cr
        tx = py * cz - pz * cy
        ty = pz * cx - px * cz
        tz = px * cy - py * cx
        num = ax * tx + ay * ty + az * tz
        den = 1.0 + (ax * px + ay * py + az * pz) + (px * cx + py * cy + pz * cz) \
            + (cx * ax + cy * ay + cz * az)
        total += 2.0 * math.atan2(num, den)
        px = cx
        py = cy
        pz = cz
    return total


@njit(**_JIT)
def quad_sweep(points, x, axis):
    """Midpoint-rule sweep of the monopole-potential integrand.

    Kept alongside the exact fan sum to reproduce the near-surface failure
    band of naive quadrature.
    """
    n = points.shape[0]
    ax = axis[0]
    ay = axis[1]
    az = axis[2]
    px = points[0, 0] - x[0]
    py = points[0, 1] - x[1]
    pz = points[0, 2] - x[2]
    pr = 1.0 / math.sqrt(px * px + py * py + pz * pz)
    px *= pr
    py *= pr
    pz *= pr
    fx = px
    fy = py
    fz = pz
    total = 0.0
    for i in range(1, n + 1):
        if i == n:
            cx = fx
            cy = fy
            cz = fz
        else:
            cx = points[i, 0] - x[0]
            cy = points[i, 1] - x[1]
            cz = points[i, 2] - x[2]
            cr = 1.0 / math.sqrt(cx * cx + cy * cy + cz * cz)
            cx *= cr
            cy *= cr
            cz *= cr
        mx = px + cx
        my = py + cy
        mz = pz + cz
        mr = math.sqrt(mx * mx + my * my + mz * mz)
        if mr > 0.0:
            mx /= mr
            my /= mr
            mz /= mr
            crx = ay * mz - az * my
            cry = az * mx - ax * mz
            crz = ax * my - ay * mx
            den = 1.0 + ax * mx + ay * my + az * mz
            if den != 0.0:
                total += (crx * (cx - px) + cry * (cy - py) + crz * (cz - pz)) / den
        px = cx
        py = cy
        pz = cz
    return total


@njit(**_JIT)
def _component_omega_inf(points, x, ninf, neg_ninf, rnd_axis, threshold, quad):
    dmin = min_segment_distance(points, x)
    if dmin <= ON_CURVE_EPS:
        return 0.0, 1
    if vertex_min_axis_denom(points, x, ninf) >= threshold:
        axis = ninf
    elif vertex_min_axis_denom(points, x, neg_ninf) >= threshold:
        axis = neg_ninf
    elif vertex_min_axis_denom(points, x, rnd_axis) >= threshold:
        axis = rnd_axis
    else:
        return 0.0, 2
    if quad:
        raw = quad_sweep(points, x, axis)
    else:
        raw = fan_sweep(points, x, axis)
    return mod4pi(raw), 0


@njit(**_JIT)
def omega_inf_block(pts, offs, xs, ninf, rnd_axis, threshold, quad, out, status):
    """Point-at-infinity solid angle for a block of evaluation points.

    Components are reduced mod 4pi independently, then summed mod 4pi.
    """
    ncomp = offs.shape[0] - 1
    neg_ninf = np.empty(3)
    neg_ninf[0] = -ninf[0]
    neg_ninf[1] = -ninf[1]
    neg_ninf[2] = -ninf[2]
    for k in range(xs.shape[0]):
        x = xs[k]
        total = 0.0
        st = 0
        for c in range(ncomp):
            comp = pts[offs[c]:offs[c + 1]]
            w, cst = _component_omega_inf(comp, x, ninf, neg_ninf, rnd_axis, threshold, quad)
            if cst != 0:
                st = cst
                break
            total += w
        if st == 0:
            out[k] = mod4pi(total)
        else:
            out[k] = 0.0
        status[k] = st


@njit(**_JIT)
def writhe_sum(points):
    """Exact polygon writhe: signed spherical quadrilateral area per segment
    pair, accumulated as two triangle excesses."""
    n = points.shape[0]
    total = 0.0
    for i in range(n):
        i2 = i + 1
        if i2 == n:
            i2 = 0
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            j2 = j + 1
            if j2 == n:
                j2 = 0
            a_x = points[j, 0] - points[i, 0]
            a_y = points[j, 1] - points[i, 1]
            a_z = points[j, 2] - points[i, 2]
            b_x = points[j, 0] - points[i2, 0]
            b_y = points[j, 1] - points[i2, 1]
            b_z = points[j, 2] - points[i2, 2]
            c_x = points[j2, 0] - points[i2, 0]
            c_y = points[j2, 1] - points[i2, 1]
            c_z = points[j2, 2] - points[i2, 2]
            d_x = points[j2, 0] - points[i, 0]
            d_y = points[j2, 1] - points[i, 1]
            d_z = points[j2, 2] - points[i, 2]
            an = math.sqrt(a_x * a_x + a_y * a_y + a_z * a_z)
            bn = math.sqrt(b_x * b_x + b_y * b_y + b_z * b_z)
            cn = math.sqrt(c_x * c_x + c_y * c_y + c_z * c_z)
            dn = math.sqrt(d_x * d_x + d_y * d_y + d_z * d_z)
            cx = b_y * c_z - b_z * c_y
            cy = b_z * c_x - b_x * c_z
            cz = b_x * c_y - b_y * c_x
            p = a_x * cx + a_y * cy + a_z * cz
            ab = a_x * b_x + a_y * b_y + a_z * b_z
            bc = b_x * c_x + b_y * c_y + b_z * c_z
            ca = c_x * a_x + c_y * a_y + c_z * a_z
            ad = a_x * d_x + a_y * d_y + a_z * d_z
            dc = d_x * c_x + d_y * c_y + d_z * c_z
            d1 = an * bn * cn + ab * cn + bc * an + ca * bn
            d2 = an * dn * cn + ad * cn + dc * an + ca * dn
            total += math.atan2(p, d1) + math.atan2(p, d2)
    return total / math.pi


@njit(**_JIT)
def linking_sum(pa, pb):
    """Gauss linking integral of two closed polylines (exact per pair)."""
    na = pa.shape[0]
    nb = pb.shape[0]
    total = 0.0
    for i in range(na):
        i2 = i + 1
        if i2 == na:
            i2 = 0
        for j in range(nb):
            j2 = j + 1
            if j2 == nb:
                j2 = 0
            a_x = pb[j, 0] - pa[i, 0]
            a_y = pb[j, 1] - pa[i, 1]
            a_z = pb[j, 2] - pa[i, 2]
            b_x = pb[j, 0] - pa[i2, 0]
            b_y = pb[j, 1] - pa[i2, 1]
            b_z = pb[j, 2] - pa[i2, 2]
            c_x = pb[j2, 0] - pa[i2, 0]
            c_y = pb[j2, 1] - pa[i2, 1]
            c_z = pb[j2, 2] - pa[i2, 2]
            d_x = pb[j2, 0] - pa[i, 0]
            d_y = pb[j2, 1] - pa[i, 1]
            d_z = pb[j2, 2] - pa[i, 2]
            an = math.sqrt(a_x * a_x + a_y * a_y + a_z * a_z)
            bn = math.sqrt(b_x * b_x + b_y * b_y + b_z * b_z)
            cn = math.sqrt(c_x * c_x + c_y * c_y + c_z * c_z)
            dn = math.sqrt(d_x * d_x + d_y * d_y + d_z * d_z)
            cx = b_y * c_z - b_z * c_y
            cy = b_z * c_x - b_x * c_z
            cz = b_x * c_y - b_y * c_x
            p = a_x * cx + a_y * cy + a_z * cz
            ab = a_x * b_x + a_y * b_y + a_z * b_z
            bc = b_x * c_x + b_y * c_y + b_z * c_z
            ca = c_x * a_x + c_y * a_y + c_z * a_z
            ad = a_x * d_x + a_y * d_y + a_z * d_z
            dc = d_x * c_x + d_y * c_y + d_z * c_z
            d1 = an * bn * cn + ab * cn + bc * an + ca * bn
            d2 = an * dn * cn + ad * cn + dc * an + ca * dn
            total += math.atan2(p, d1) + math.atan2(p, d2)
    return total / TWO_PI


@njit(**_JIT)
def twist_integral(points, tangents, x):
    """Projective-framing twist: midpoint quadrature over indicatrix edges.

    Returns (twist, min over vertices of 1 - (n.T)^2).
    """
    n = points.shape[0]
    min_cusp = 2.0
    for i in range(n):
        rx = points[i, 0] - x[0]
        ry = points[i, 1] - x[1]
        rz = points[i, 2] - x[2]
        rn = math.sqrt(rx * rx + ry * ry + rz * rz)
        nt = (rx * tangents[i, 0] + ry * tangents[i, 1] + rz * tangents[i, 2]) / rn
        c = 1.0 - nt * nt
        if c < min_cusp:
            min_cusp = c
    total = 0.0
    for i in range(n):
        j = i + 1
        if j == n:
            j = 0
        mx = 0.5 * (points[i, 0] + points[j, 0]) - x[0]
        my = 0.5 * (points[i, 1] + points[j, 1]) - x[1]
        mz = 0.5 * (points[i, 2] + points[j, 2]) - x[2]
        mr = math.sqrt(mx * mx + my * my + mz * mz)
        mx /= mr
        my /= mr
        mz /= mr
        tx = tangents[i, 0] + tangents[j, 0]
        ty = tangents[i, 1] + tangents[j, 1]
        tz = tangents[i, 2] + tangents[j, 2]
        tr = math.sqrt(tx * tx + ty * ty + tz * tz)
        tx /= tr
        ty /= tr
        tz /= tr
        cx = tangents[i, 1] * tangents[j, 2] - tangents[i, 2] * tangents[j, 1]
        cy = tangents[i, 2] * tangents[j, 0] - tangents[i, 0] * tangents[j, 2]
        cz = tangents[i, 0] * tangents[j, 1] - tangents[i, 1] * tangents[j, 0]
        nt = mx * tx + my * ty + mz * tz
        den = 1.0 - nt * nt
        if den != 0.0:
            total += nt * (mx * cx + my * cy + mz * cz) / den
    return total / TWO_PI, min_cusp


@njit(**_JIT)
def tangent_dev_integral(points, tangents, x, sign):
    """Sweep term of the tangent-developable formula.

    Returns (integral, min over vertices and edge midpoints of 1 + sign*n.T).
    """
    n = points.shape[0]
    min_den = 2.0
    for i in range(n):
        rx = points[i, 0] - x[0]
        ry = points[i, 1] - x[1]
        rz = points[i, 2] - x[2]
        rn = math.sqrt(rx * rx + ry * ry + rz * rz)
        nt = (rx * tangents[i, 0] + ry * tangents[i, 1] + rz * tangents[i, 2]) / rn
        d = 1.0 + sign * nt
        if d < min_den:
            min_den = d
    total = 0.0
    for i in range(n):
        j = i + 1
        if j == n:
            j = 0
        mx = 0.5 * (points[i, 0] + points[j, 0]) - x[0]
        my = 0.5 * (points[i, 1] + points[j, 1]) - x[1]
        mz = 0.5 * (points[i, 2] + points[j, 2]) - x[2]
        mr = math.sqrt(mx * mx + my * my + mz * mz)
        mx /= mr
        my /= mr
        mz /= mr
        tx = tangents[i, 0] + tangents[j, 0]
        ty = tangents[i, 1] + tangents[j, 1]
        tz = tangents[i, 2] + tangents[j, 2]
        tr = math.sqrt(tx * tx + ty * ty + tz * tz)
        tx /= tr
        ty /= tr
        tz /= tr
        cx = tangents[i, 1] * tangents[j, 2] - tangents[i, 2] * tangents[j, 1]
        cy = tangents[i, 2] * tangents[j, 0] - tangents[i, 0] * tangents[j, 2]
        cz = tangents[i, 0] * tangents[j, 1] - tangents[i, 1] * tangents[j, 0]
        den = 1.0 + sign * (mx * tx + my * ty + mz * tz)
        if den < min_den:
            min_den = den
        if den != 0.0:
            total += (mx * cx + my * cy + mz * cz) / den
    return total, min_den


@njit(**_JIT)
def tangent_dev_block(pts, offs, tans, writhes, xs, sign, out, status):
    """Tangent-developable evaluator over a block of points; components
    reduced mod 4pi independently, then summed."""
    ncomp = offs.shape[0] - 1
    for k in range(xs.shape[0]):
        x = xs[k]
        total = 0.0
        st = 0
        for c in range(ncomp):
            comp = pts[offs[c]:offs[c + 1]]
            tcomp = tans[offs[c]:offs[c + 1]]
            if min_segment_distance(comp, x) <= ON_CURVE_EPS:
                st = 1
                break
            integ, mden = tangent_dev_integral(comp, tcomp, x, sign)
            if mden <= SURFACE_EPS:
                st = 3
                break
            total += mod4pi(TWO_PI * (1.0 + sign * writhes[c]) - integ)
        if st == 0:
            out[k] = mod4pi(total)
        else:
            out[k] = 0.0
        status[k] = st


@njit(**_JIT)
def arc_crossings(verts):
    """Count transverse intersections of the minor arcs of a closed spherical
    polyline. Returns (count, status); status 3 flags a configuration too
    close to degenerate to resolve (near-vertex, grazing, triple point)."""
    n = verts.shape[0]
    poles = np.empty((n, 3))
    mids = np.empty((n, 3))
    radii = np.empty(n)
    for i in range(n):
        j = i + 1
        if j == n:
            j = 0
        gx = verts[i, 1] * verts[j, 2] - verts[i, 2] * verts[j, 1]
        gy = verts[i, 2] * verts[j, 0] - verts[i, 0] * verts[j, 2]
        gz = verts[i, 0] * verts[j, 1] - verts[i, 1] * verts[j, 0]
        gn = math.sqrt(gx * gx + gy * gy + gz * gz)
        if gn < 1e-12:
            return 0, 3
        poles[i, 0] = gx / gn
        poles[i, 1] = gy / gn
        poles[i, 2] = gz / gn
        mids[i, 0] = 0.5 * (verts[i, 0] + verts[j, 0])
        mids[i, 1] = 0.5 * (verts[i, 1] + verts[j, 1])
        mids[i, 2] = 0.5 * (verts[i, 2] + verts[j, 2])
        dx = verts[j, 0] - verts[i, 0]
        dy = verts[j, 1] - verts[i, 1]
        dz = verts[j, 2] - verts[i, 2]
        radii[i] = 0.5 * math.sqrt(dx * dx + dy * dy + dz * dz)
    found = np.empty((MAX_CROSSINGS, 3))
    count = 0
    band = 1e-12
    for i in range(n):
        i2 = i + 1
        if i2 == n:
            i2 = 0
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            # every point of a minor arc lies within half a chord of the
            # chord midpoint (equality at the endpoints), so arcs whose
            # midpoint spheres do not touch cannot meet
            dx = mids[i, 0] - mids[j, 0]
            dy = mids[i, 1] - mids[j, 1]
            dz = mids[i, 2] - mids[j, 2]
            pad = radii[i] + radii[j] + 1e-12
            if dx * dx + dy * dy + dz * dz > pad * pad:
                continue
            j2 = j + 1
            if j2 == n:
                j2 = 0
            cx = poles[i, 1] * poles[j, 2] - poles[i, 2] * poles[j, 1]
            cy = poles[i, 2] * poles[j, 0] - poles[i, 0] * poles[j, 2]
            cz = poles[i, 0] * poles[j, 1] - poles[i, 1] * poles[j, 0]
            cn = math.sqrt(cx * cx + cy * cy + cz * cz)
            if cn < 1e-12:
                # coplanar arcs: degenerate only if they actually overlap
                s1 = _arc_coord(verts, poles, i, i2, verts[j, 0], verts[j, 1], verts[j, 2])
                s2 = _arc_coord(verts, poles, i, i2, verts[j2, 0], verts[j2, 1], verts[j2, 2])
                s3 = _arc_coord(verts, poles, j, j2, verts[i, 0], verts[i, 1], verts[i, 2])
                s4 = _arc_coord(verts, poles, j, j2, verts[i2, 0], verts[i2, 1], verts[i2, 2])
                if s1 > band or s2 > band or s3 > band or s4 > band:
                    return count, 3
                continue
            cx /= cn
            cy /= cn
            cz /= cn
            for sgn in range(2):
                if sgn == 1:
                    qx = -cx
                    qy = -cy
                    qz = -cz
                else:
                    qx = cx
                    qy = cy
                    qz = cz
                sa1 = _side(verts[i], qx, qy, qz, poles[i])
                sa2 = _side_rev(verts[i2], qx, qy, qz, poles[i])
                sb1 = _side(verts[j], qx, qy, qz, poles[j])
                sb2 = _side_rev(verts[j2], qx, qy, qz, poles[j])
                inside = sa1 > band and sa2 > band and sb1 > band and sb2 > band
                outside = sa1 < -band or sa2 < -band or sb1 < -band or sb2 < -band
                if inside:
                    if (_chord(verts[i], qx, qy, qz) < 1e-9
                            or _chord(verts[i2], qx, qy, qz) < 1e-9
                            or _chord(verts[j], qx, qy, qz) < 1e-9
                            or _chord(verts[j2], qx, qy, qz) < 1e-9):
                        return count, 3
                    if count >= MAX_CROSSINGS:
                        return count, 3
                    found[count, 0] = qx
                    found[count, 1] = qy
                    found[count, 2] = qz
                    count += 1
                elif not outside:
                    return count, 3
    for a in range(count):
        for b in range(a + 1, count):
            dx = found[a, 0] - found[b, 0]
            dy = found[a, 1] - found[b, 1]
            dz = found[a, 2] - found[b, 2]
            if math.sqrt(dx * dx + dy * dy + dz * dz) < 1e-9:
                return count, 3
    return count, 0


@njit(**_JIT)
def _side(u, qx, qy, qz, pole):
    cx = u[1] * qz - u[2] * qy
    cy = u[2] * qx - u[0] * qz
    cz = u[0] * qy - u[1] * qx
    return cx * pole[0] + cy * pole[1] + cz * pole[2]


@njit(**_JIT)
def _side_rev(v, qx, qy, qz, pole):
    cx = qy * v[2] - qz * v[1]
    cy = qz * v[0] - qx * v[2]
    cz = qx * v[1] - qy * v[0]
    return cx * pole[0] + cy * pole[1] + cz * pole[2]


@njit(**_JIT)
def _chord(u, qx, qy, qz):
    dx = u[0] - qx
    dy = u[1] - qy
    dz = u[2] - qz
    return math.sqrt(dx * dx + dy * dy + dz * dz)


@njit(**_JIT)
def _arc_coord(verts, poles, i, i2, px, py, pz):
    """min(side from start, side to end) of point p w.r.t. arc i; positive
    when strictly inside."""
    s1 = _side(verts[i], px, py, pz, poles[i])
    s2 = _side_rev(verts[i2], px, py, pz, poles[i])
    if s1 < s2:
        return s1
    return s2


@njit(**_JIT)
def turning_sum(verts):
    """Total signed turning of a closed geodesic polygon (sum of exterior
    angles, sign positive toward gamma = n x t)."""
    n = verts.shape[0]
    total = 0.0
    for i in range(n):
        ip = i - 1
        if ip < 0:
            ip = n - 1
        j = i + 1
        if j == n:
            j = 0
        # incoming tangent at vertex i: pole(ip) x v_i
        gx = verts[ip, 1] * verts[i, 2] - verts[ip, 2] * verts[i, 1]
        gy = verts[ip, 2] * verts[i, 0] - verts[ip, 0] * verts[i, 2]
        gz = verts[ip, 0] * verts[i, 1] - verts[ip, 1] * verts[i, 0]
        ax = gy * verts[i, 2] - gz * verts[i, 1]
        ay = gz * verts[i, 0] - gx * verts[i, 2]
        az = gx * verts[i, 1] - gy * verts[i, 0]
        an = math.sqrt(ax * ax + ay * ay + az * az)
        ax /= an
        ay /= an
        az /= an
        # outgoing tangent at vertex i: pole(i) x v_i
        hx = verts[i, 1] * verts[j, 2] - verts[i, 2] * verts[j, 1]
        hy = verts[i, 2] * verts[j, 0] - verts[i, 0] * verts[j, 2]
        hz = verts[i, 0] * verts[j, 1] - verts[i, 1] * verts[j, 0]
        bx = hy * verts[i, 2] - hz * verts[i, 1]
        by = hz * verts[i, 0] - hx * verts[i, 2]
        bz = hx * verts[i, 1] - hy * verts[i, 0]
        bn = math.sqrt(bx * bx + by * by + bz * bz)
        bx /= bn
        by /= bn
        bz /= bn
        sx = ay * bz - az * by
        sy = az * bx - ax * bz
        sz = ax * by - ay * bx
        s = sx * verts[i, 0] + sy * verts[i, 1] + sz * verts[i, 2]
        c = ax * bx + ay * by + az * bz
        total += math.atan2(s, c)
    return total


@njit(**_JIT)
def _project(points, x, verts):
    n = points.shape[0]
    for i in range(n):
        rx = points[i, 0] - x[0]
        ry = points[i, 1] - x[1]
        rz = points[i, 2] - x[2]
        rn = math.sqrt(rx * rx + ry * ry + rz * rz)
        verts[i, 0] = rx / rn
        verts[i, 1] = ry / rn
        verts[i, 2] = rz / rn


@njit(**_JIT)
def gauss_bonnet_point(points, x):
    """Gauss-Bonnet evaluator for one component: 2pi(D+1) - total turning."""
    if min_segment_distance(points, x) <= ON_CURVE_EPS:
        return 0.0, 1
    n = points.shape[0]
    verts = np.empty((n, 3))
    _project(points, x, verts)
    d, st = arc_crossings(verts)
    if st != 0:
        return 0.0, st
    return mod4pi(TWO_PI * (d + 1) - turning_sum(verts)), 0


@njit(**_JIT)
def gauss_bonnet_block(pts, offs, xs, out, status):
    ncomp = offs.shape[0] - 1
    for k in range(xs.shape[0]):
        x = xs[k]
        total = 0.0
        st = 0
        for c in range(ncomp):
            comp = pts[offs[c]:offs[c + 1]]
            w, cst = gauss_bonnet_point(comp, x)
            if cst != 0:
                st = cst
                break
            total += w
        if st == 0:
            out[k] = mod4pi(total)
        else:
            out[k] = 0.0
        status[k] = st


@njit(**_JIT)
def homotopy_sum(p0, p1, x):
    """Midpoint quadrature of the homotopy integrand between corresponding
    vertices of two equal-count polylines.

    Returns (raw sweep, min over vertices/edges of 1 + n0.n1).
    """
    n = p0.shape[0]
    n0 = np.empty((n, 3))
    n1 = np.empty((n, 3))
    _project(p0, x, n0)
    _project(p1, x, n1)
    min_den = 2.0
    for i in range(n):
        d = 1.0 + (n0[i, 0] * n1[i, 0] + n0[i, 1] * n1[i, 1] + n0[i, 2] * n1[i, 2])
        if d < min_den:
            min_den = d
    total = 0.0
    for i in range(n):
        j = i + 1
        if j == n:
            j = 0
        m0x = n0[i, 0] + n0[j, 0]
        m0y = n0[i, 1] + n0[j, 1]
        m0z = n0[i, 2] + n0[j, 2]
        r0 = math.sqrt(m0x * m0x + m0y * m0y + m0z * m0z)
        m1x = n1[i, 0] + n1[j, 0]
        m1y = n1[i, 1] + n1[j, 1]
        m1z = n1[i, 2] + n1[j, 2]
        r1 = math.sqrt(m1x * m1x + m1y * m1y + m1z * m1z)
        if r0 == 0.0 or r1 == 0.0:
            min_den = 0.0
            continue
        m0x /= r0
        m0y /= r0
        m0z /= r0
        m1x /= r1
        m1y /= r1
        m1z /= r1
        den = 1.0 + m0x * m1x + m0y * m1y + m0z * m1z
        if den < min_den:
            min_den = den
        if den == 0.0:
            continue
        cx = m0y * m1z - m0z * m1y
        cy = m0z * m1x - m0x * m1z
        cz = m0x * m1y - m0y * m1x
        dx = (n0[j, 0] - n0[i, 0]) + (n1[j, 0] - n1[i, 0])
        dy = (n0[j, 1] - n0[i, 1]) + (n1[j, 1] - n1[i, 1])
        dz = (n0[j, 2] - n0[i, 2]) + (n1[j, 2] - n1[i, 2])
        total += (cx * dx + cy * dy + cz * dz) / den
    return total, min_den


@njit(**_JIT)
def distance_block(pts, offs, local_s, seg_len, xs, out_d, out_s, out_c):
    """Exact distance to the link, with arclength of the nearest point within
    its component. local_s holds per-vertex arclength from the component
    start; seg_len the per-segment lengths (both concatenated)."""
    ncomp = offs.shape[0] - 1
    for k in range(xs.shape[0]):
        x = xs[k]
        best = 1e300
        bs = 0.0
        bc = 0
        for c in range(ncomp):
            lo = offs[c]
            hi = offs[c + 1]
            n = hi - lo
            for ii in range(n):
                i = lo + ii
                jj = ii + 1
                if jj == n:
                    jj = 0
                j = lo + jj
                ax = pts[i, 0]
                ay = pts[i, 1]
                az = pts[i, 2]
                bx = pts[j, 0] - ax
                by = pts[j, 1] - ay
                bz = pts[j, 2] - az
                wx = x[0] - ax
                wy = x[1] - ay
                wz = x[2] - az
                bb = bx * bx + by * by + bz * bz
                t = 0.0
                if bb > 0.0:
                    t = (wx * bx + wy * by + wz * bz) / bb
                    if t < 0.0:
                        t = 0.0
                    elif t > 1.0:
                        t = 1.0
                dx = wx - t * bx
                dy = wy - t * by
                dz = wz - t * bz
                d2 = dx * dx + dy * dy + dz * dz
                if d2 < best:
                    best = d2
                    bs = local_s[i] + t * seg_len[i]
                    bc = c
        out_d[k] = math.sqrt(best)
        out_s[k] = bs
        out_c[k] = bc


@njit(**_JIT)
def min_self_distance(points, skip):
    """Min distance from each vertex to segments more than ``skip`` index
    steps away along the curve (cyclically). Excluding an arclength window
    makes this measure strand-to-strand approaches, not the sampling step."""
    n = points.shape[0]
    best = 1e300
    for v in range(n):
        for i in range(n):
            di = i - v
            if di < 0:
                di += n
            if di > n - di:
                di = n - di
            dj = i + 1 - v
            if dj < 0:
                dj += n
            if dj >= n:
                dj -= n
            if dj > n - dj:
                dj = n - dj
            if di <= skip or dj <= skip:
                continue
            j = i + 1
            if j == n:
                j = 0
            ax = points[i, 0]
            ay = points[i, 1]
            az = points[i, 2]
            bx = points[j, 0] - ax
            by = points[j, 1] - ay
            bz = points[j, 2] - az
            wx = points[v, 0] - ax
            wy = points[v, 1] - ay
            wz = points[v, 2] - az
            bb = bx * bx + by * by + bz * bz
            t = (wx * bx + wy * by + wz * bz) / bb
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            dx = wx - t * bx
            dy = wy - t * by
            dz = wz - t * bz
            d2 = dx * dx + dy * dy + dz * dz
            if d2 < best:
                best = d2
    return math.sqrt(best)


@njit(**_JIT)
def min_cross_distance(pa, pb):
    """Min vertex-to-segment distance between two polylines (both ways)."""
    best = 1e300
    for k in range(pa.shape[0]):
        d = min_segment_distance(pb, pa[k])
        if d < best:
            best = d
    for k in range(pb.shape[0]):
        d = min_segment_distance(pa, pb[k])
        if d < best:
            best = d
    return best
