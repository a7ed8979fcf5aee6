"""Pure-numpy fallback for the jitted kernels in ``_kernels_numba``.

Same function names, signatures, semantics and status codes; vectorised over
segments (and chunked over evaluation points to bound memory) instead of
explicit loops. Selected by ``KNOTFIELDS_DISABLE_NUMBA=1``.
"""

import math

import numpy as np

FOUR_PI = 4.0 * math.pi
TWO_PI = 2.0 * math.pi

ON_CURVE_EPS = 1e-9
SURFACE_EPS = 1e-9
MAX_CROSSINGS = 4096

# cap on elements of (points-chunk x segments) temporaries
_CHUNK_ELEMS = 2_000_000


def mod4pi(v):
    w = v - FOUR_PI * np.floor(v / FOUR_PI)
    return np.where(w >= FOUR_PI, w - FOUR_PI, np.where(w < 0.0, w + FOUR_PI, w))


def _unit_rows(v):
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def min_segment_distance(points, x):
    return float(_seg_dist_many(points, np.asarray(x, float)[None, :])[0][0])


def _seg_dist_many(points, xs):
    """Distance from each x to the polyline; returns (dist, s_frac, seg_idx)
    with s_frac the clamp parameter along the nearest segment."""
    a = points
    b = np.roll(points, -1, axis=0)
    ab = b - a
    bb = (ab * ab).sum(1)
    bb = np.where(bb > 0.0, bb, 1.0)
    w = xs[:, None, :] - a[None, :, :]
    t = np.clip((w * ab[None, :, :]).sum(2) / bb[None, :], 0.0, 1.0)
    d = w - t[:, :, None] * ab[None, :, :]
    d2 = (d * d).sum(2)
    idx = d2.argmin(1)
    rows = np.arange(xs.shape[0])
    return np.sqrt(d2[rows, idx]), t[rows, idx], idx


def vertex_min_axis_denom(points, x, axis):
    n = _unit_rows(points - np.asarray(x, float))
    return float(1.0 + (n @ axis).min())


def fan_sweep(points, x, axis):
    n = _unit_rows(points - np.asarray(x, float))
    nj = np.roll(n, -1, axis=0)
    num = np.cross(n, nj) @ axis
    den = 1.0 + n @ axis + (n * nj).sum(1) + nj @ axis
    return float(2.0 * np.arctan2(num, den).sum())


def quad_sweep(points, x, axis):
    n = _unit_rows(points - np.asarray(x, float))
    nj = np.roll(n, -1, axis=0)
    m = _unit_rows(n + nj)
    den = 1.0 + m @ axis
    term = (np.cross(axis, m) * (nj - n)).sum(1) / den
    return float(term.sum())


def _fan_block(nhat, axis):
    """Fan sweep for a block of projected direction sets, shape (B, N, 3)."""
    nj = np.roll(nhat, -1, axis=1)
    num = np.einsum("bnk,k->bn", np.cross(nhat, nj), axis)
    den = (1.0 + np.einsum("bnk,k->bn", nhat, axis)
           + np.einsum("bnk,bnk->bn", nhat, nj)
           + np.einsum("bnk,k->bn", nj, axis))
    return 2.0 * np.arctan2(num, den).sum(1)


def _quad_block(nhat, axis):
    nj = np.roll(nhat, -1, axis=1)
    m = _unit_rows(nhat + nj)
    den = 1.0 + np.einsum("bnk,k->bn", m, axis)
    num = np.einsum("bnk,bnk->bn", np.cross(np.broadcast_to(axis, m.shape), m), nj - nhat)
    return (num / den).sum(1)


def omega_inf_block(pts, offs, xs, ninf, rnd_axis, threshold, quad, out, status):
    npts = xs.shape[0]
    out[:] = 0.0
    status[:] = 0
    ncomp = offs.shape[0] - 1
    total = np.zeros(npts)
    for c in range(ncomp):
        comp = pts[offs[c]:offs[c + 1]]
        nseg = comp.shape[0]
        chunk = max(1, _CHUNK_ELEMS // max(1, nseg))
        for lo in range(0, npts, chunk):
            hi = min(npts, lo + chunk)
            sel = xs[lo:hi]
            dist, _, _ = _seg_dist_many(comp, sel)
            on = dist <= ON_CURVE_EPS
            r = comp[None, :, :] - sel[:, None, :]
            nhat = r / np.linalg.norm(r, axis=2, keepdims=True)
            d_p = 1.0 + np.einsum("bnk,k->bn", nhat, ninf).min(1)
            d_m = 1.0 + np.einsum("bnk,k->bn", nhat, -ninf).min(1)
            d_r = 1.0 + np.einsum("bnk,k->bn", nhat, rnd_axis).min(1)
            use_p = d_p >= threshold
            use_m = (~use_p) & (d_m >= threshold)
            use_r = (~use_p) & (~use_m) & (d_r >= threshold)
            bad = ~(use_p | use_m | use_r)
            raw = np.zeros(hi - lo)
            sweep = _quad_block if quad else _fan_block
            if use_p.any():
                raw[use_p] = sweep(nhat[use_p], ninf)
            if use_m.any():
                raw[use_m] = sweep(nhat[use_m], -ninf)
            if use_r.any():
                raw[use_r] = sweep(nhat[use_r], rnd_axis)
            st = status[lo:hi]
            st[bad & (st == 0)] = 2
            st[on] = 1
            total[lo:hi] += np.where(st == 0, mod4pi(raw), 0.0)
    ok = status == 0
    out[ok] = mod4pi(total[ok])


def _quad_area_pairs(a, b, c, d):
    """Spherical quadrilateral half-areas for stacked difference vectors."""
    an = np.linalg.norm(a, axis=-1)
    bn = np.linalg.norm(b, axis=-1)
    cn = np.linalg.norm(c, axis=-1)
    dn = np.linalg.norm(d, axis=-1)
    p = (a * np.cross(b, c)).sum(-1)
    ab = (a * b).sum(-1)
    bc = (b * c).sum(-1)
    ca = (c * a).sum(-1)
    ad = (a * d).sum(-1)
    dc = (d * c).sum(-1)
    d1 = an * bn * cn + ab * cn + bc * an + ca * bn
    d2 = an * dn * cn + ad * cn + dc * an + ca * dn
    return np.arctan2(p, d1) + np.arctan2(p, d2)


def writhe_sum(points):
    n = points.shape[0]
    nxt = np.roll(points, -1, axis=0)
    total = 0.0
    for i in range(n - 2):
        j0 = i + 2
        j1 = n if i > 0 else n - 1
        if j0 >= j1:
            continue
        pj = points[j0:j1]
        pj2 = nxt[j0:j1]
        a = pj - points[i]
        b = pj - points[i + 1]
        c = pj2 - points[i + 1]
        d = pj2 - points[i]
        total += _quad_area_pairs(a, b, c, d).sum()
    return float(total / math.pi)


def linking_sum(pa, pb):
    na = pa.shape[0]
    nb2 = np.roll(pb, -1, axis=0)
    total = 0.0
    for i in range(na):
        i2 = (i + 1) % na
        a = pb - pa[i]
        b = pb - pa[i2]
        c = nb2 - pa[i2]
        d = nb2 - pa[i]
        total += _quad_area_pairs(a, b, c, d).sum()
    return float(total / TWO_PI)


def twist_integral(points, tangents, x):
    x = np.asarray(x, float)
    nv = _unit_rows(points - x)
    nt_v = (nv * tangents).sum(1)
    min_cusp = float((1.0 - nt_v * nt_v).min())
    tj = np.roll(tangents, -1, axis=0)
    m = _unit_rows(0.5 * (points + np.roll(points, -1, axis=0)) - x)
    tm = _unit_rows(tangents + tj)
    nt = (m * tm).sum(1)
    den = 1.0 - nt * nt
    num = nt * (m * np.cross(tangents, tj)).sum(1)
    term = np.divide(num, den, out=np.zeros_like(num), where=den != 0.0)
    return float(term.sum() / TWO_PI), min_cusp


def tangent_dev_integral(points, tangents, x, sign):
    x = np.asarray(x, float)
    nv = _unit_rows(points - x)
    min_den = float((1.0 + sign * (nv * tangents).sum(1)).min())
    tj = np.roll(tangents, -1, axis=0)
    m = _unit_rows(0.5 * (points + np.roll(points, -1, axis=0)) - x)
    tm = _unit_rows(tangents + tj)
    den = 1.0 + sign * (m * tm).sum(1)
    min_den = min(min_den, float(den.min()))
    num = (m * np.cross(tangents, tj)).sum(1)
    term = np.divide(num, den, out=np.zeros_like(num), where=den != 0.0)
    return float(term.sum()), min_den


def tangent_dev_block(pts, offs, tans, writhes, xs, sign, out, status):
    npts = xs.shape[0]
    out[:] = 0.0
    status[:] = 0
    total = np.zeros(npts)
    for c in range(offs.shape[0] - 1):
        comp = pts[offs[c]:offs[c + 1]]
        tcomp = tans[offs[c]:offs[c + 1]]
        for k in range(npts):
            if status[k] != 0:
                continue
            if min_segment_distance(comp, xs[k]) <= ON_CURVE_EPS:
                status[k] = 1
                continue
            integ, mden = tangent_dev_integral(comp, tcomp, xs[k], sign)
            if mden <= SURFACE_EPS:
                status[k] = 3
                continue
            total[k] += mod4pi(TWO_PI * (1.0 + sign * writhes[c]) - integ)
    ok = status == 0
    out[ok] = mod4pi(total[ok])


def arc_crossings(verts):
    n = verts.shape[0]
    nxt = np.roll(verts, -1, axis=0)
    g = np.cross(verts, nxt)
    gn = np.linalg.norm(g, axis=1)
    if (gn < 1e-12).any():
        return 0, 3
    poles = g / gn[:, None]
    mids = 0.5 * (verts + nxt)
    radii = 0.5 * np.linalg.norm(nxt - verts, axis=1)
    band = 1e-12
    found = []
    count = 0
    for i in range(n - 2):
        j0 = i + 2
        j1 = n if i > 0 else n - 1
        if j0 >= j1:
            continue
        js = np.arange(j0, j1)
        # arcs live inside the half-chord sphere around their chord midpoint
        sep = np.linalg.norm(mids[js] - mids[i], axis=1)
        js = js[sep <= radii[i] + radii[js] + 1e-12]
        if js.size == 0:
            continue
        c = np.cross(poles[i], poles[js])
        cn = np.linalg.norm(c, axis=1)
        copl = cn < 1e-12
        if copl.any():
            for j in js[copl]:
                s = max(
                    _inside_coord(verts, poles, i, verts[j]),
                    _inside_coord(verts, poles, i, verts[(j + 1) % n]),
                    _inside_coord(verts, poles, int(j), verts[i]),
                    _inside_coord(verts, poles, int(j), verts[(i + 1) % n]),
                )
                if s > band:
                    return count, 3
        good = ~copl
        if not good.any():
            continue
        q = c[good] / cn[good, None]
        jg = js[good]
        for sgn in (1.0, -1.0):
            qq = sgn * q
            sa1 = (np.cross(verts[i], qq) * poles[i]).sum(1)
            sa2 = (np.cross(qq, verts[(i + 1) % n]) * poles[i]).sum(1)
            sb1 = (np.cross(verts[jg], qq) * poles[jg]).sum(1)
            sb2 = (np.cross(qq, nxt[jg]) * poles[jg]).sum(1)
            smin = np.minimum(np.minimum(sa1, sa2), np.minimum(sb1, sb2))
            inside = smin > band
            grazing = (~inside) & (smin > -band)
            if grazing.any():
                return count, 3
            for qi, j in zip(qq[inside], jg[inside]):
                ends = np.stack([verts[i], verts[(i + 1) % n], verts[j], nxt[j]])
                if (np.linalg.norm(ends - qi, axis=1) < 1e-9).any():
                    return count, 3
                found.append(qi)
                count += 1
                if count > MAX_CROSSINGS:
                    return count, 3
    if count > 1:
        f = np.stack(found)
        d = np.linalg.norm(f[:, None, :] - f[None, :, :], axis=2)
        np.fill_diagonal(d, 1.0)
        if (d < 1e-9).any():
            return count, 3
    return count, 0


def _inside_coord(verts, poles, i, p):
    s1 = float((np.cross(verts[i], p) * poles[i]).sum())
    s2 = float((np.cross(p, verts[(i + 1) % len(verts)]) * poles[i]).sum())
    return min(s1, s2)


def turning_sum(verts):
    nxt = np.roll(verts, -1, axis=0)
    t_out = _unit_rows(np.cross(np.cross(verts, nxt), verts))
    t_in = np.roll(_unit_rows(np.cross(np.cross(verts, nxt), nxt)), 1, axis=0)
    s = (np.cross(t_in, t_out) * verts).sum(1)
    c = (t_in * t_out).sum(1)
    return float(np.arctan2(s, c).sum())


def gauss_bonnet_point(points, x):
    if min_segment_distance(points, x) <= ON_CURVE_EPS:
        return 0.0, 1
    verts = _unit_rows(points - np.asarray(x, float))
    d, st = arc_crossings(verts)
    if st != 0:
        return 0.0, st
    return float(mod4pi(TWO_PI * (d + 1) - turning_sum(verts))), 0


def gauss_bonnet_block(pts, offs, xs, out, status):
    npts = xs.shape[0]
    out[:] = 0.0
    status[:] = 0
    total = np.zeros(npts)
    for c in range(offs.shape[0] - 1):
        comp = pts[offs[c]:offs[c + 1]]
        for k in range(npts):
            if status[k] != 0:
                continue
            w, st = gauss_bonnet_point(comp, xs[k])
            if st != 0:
                status[k] = st
                continue
            total[k] += w
    ok = status == 0
    out[ok] = mod4pi(total[ok])


def homotopy_sum(p0, p1, x):
    x = np.asarray(x, float)
    n0 = _unit_rows(p0 - x)
    n1 = _unit_rows(p1 - x)
    min_den = float((1.0 + (n0 * n1).sum(1)).min())
    m0 = n0 + np.roll(n0, -1, axis=0)
    m1 = n1 + np.roll(n1, -1, axis=0)
    r0 = np.linalg.norm(m0, axis=1)
    r1 = np.linalg.norm(m1, axis=1)
    if (r0 == 0.0).any() or (r1 == 0.0).any():
        return 0.0, 0.0
    m0 /= r0[:, None]
    m1 /= r1[:, None]
    den = 1.0 + (m0 * m1).sum(1)
    min_den = min(min_den, float(den.min()))
    dn = (np.roll(n0, -1, axis=0) - n0) + (np.roll(n1, -1, axis=0) - n1)
    num = (np.cross(m0, m1) * dn).sum(1)
    term = np.divide(num, den, out=np.zeros_like(num), where=den != 0.0)
    return float(term.sum()), min_den


def distance_block(pts, offs, local_s, seg_len, xs, out_d, out_s, out_c):
    npts = xs.shape[0]
    best = np.full(npts, np.inf)
    out_s[:] = 0.0
    out_c[:] = 0
    for c in range(offs.shape[0] - 1):
        lo, hi = offs[c], offs[c + 1]
        comp = pts[lo:hi]
        nseg = hi - lo
        chunk = max(1, _CHUNK_ELEMS // max(1, nseg))
        for a in range(0, npts, chunk):
            b = min(npts, a + chunk)
            dist, t, idx = _seg_dist_many(comp, xs[a:b])
            closer = dist < best[a:b]
            if closer.any():
                rows = np.nonzero(closer)[0]
                best[a + rows] = dist[rows]
                out_s[a + rows] = local_s[lo + idx[rows]] + t[rows] * seg_len[lo + idx[rows]]
                out_c[a + rows] = c
    out_d[:] = best


def min_self_distance(points, skip):
    n = points.shape[0]
    best = np.inf
    for v in range(n):
        di = np.minimum((np.arange(n) - v) % n, (v - np.arange(n)) % n)
        dj = np.minimum((np.arange(n) + 1 - v) % n, (v - np.arange(n) - 1) % n)
        mask = (di > skip) & (dj > skip)
        if not mask.any():
            continue
        d, _, _ = _seg_dist_many_masked(points, points[v], mask)
        best = min(best, d)
    return float(best)


def _seg_dist_many_masked(points, x, mask):
    a = points[mask]
    b = np.roll(points, -1, axis=0)[mask]
    ab = b - a
    bb = (ab * ab).sum(1)
    bb = np.where(bb > 0.0, bb, 1.0)
    w = x[None, :] - a
    t = np.clip((w * ab).sum(1) / bb, 0.0, 1.0)
    d = w - t[:, None] * ab
    d2 = (d * d).sum(1)
    i = d2.argmin()
    return math.sqrt(d2[i]), t[i], i


def min_cross_distance(pa, pb):
    da, _, _ = _seg_dist_many(pb, pa)
    db, _, _ = _seg_dist_many(pa, pb)
    return float(min(da.min(), db.min()))
