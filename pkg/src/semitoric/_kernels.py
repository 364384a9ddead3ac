"""Hot numerical kernels with a numba path and a vectorised numpy path.

Setting ``SEMITORIC_NO_NUMBA=1`` (or running without numba installed) selects
the numpy implementations.  ``SEMITORIC_THREADS`` caps the numba thread pool.
Both paths are always importable as ``numba_impl`` / ``numpy_impl`` so the
benchmark and the tests can compare them directly.
"""
from __future__ import annotations

import math
import os
from types import SimpleNamespace

import numpy as np

_FLAG = os.environ.get("SEMITORIC_NO_NUMBA", "").strip().lower()
DISABLE_NUMBA = _FLAG not in ("", "0", "false", "no")

try:
    import numba as _nb

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _nb = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not DISABLE_NUMBA

if HAVE_NUMBA:
    # the default probe tries TBB first and warns when it is too old
    if "NUMBA_THREADING_LAYER" not in os.environ:
        _nb.config.THREADING_LAYER = "omp"
    _threads = os.environ.get("SEMITORIC_THREADS")
    if _threads:
        try:
            _nb.set_num_threads(max(1, min(int(_threads), _nb.config.NUMBA_NUM_THREADS)))
        except ValueError:
            pass

# Gauss-Legendre rule mapped to theta in [0, pi]; used by the action quadrature.
N_GL = 24
_gl_x, _gl_w = np.polynomial.legendre.leggauss(N_GL)
GL_THETA = 0.5 * np.pi * (_gl_x + 1.0)
GL_WEIGHT = 0.5 * np.pi * _gl_w

_ERRTOL_F = 1e-3
_ERRTOL_DJ = 5e-4
# NaN input never meets the tolerance; bound the duplication loops
_MAX_IT = 200


# ---------------------------------------------------------------- scalar code
# Written once in plain Python; compiled by numba when enabled.

def _rc(x, y):
    xt, yt, w = x, y, 1.0
    if y < 0.0:
        xt, yt = x - y, -y
        w = math.sqrt(x) / math.sqrt(xt)
    for _ in range(_MAX_IT):
        alamb = 2.0 * math.sqrt(xt) * math.sqrt(yt) + yt
        xt = 0.25 * (xt + alamb)
        yt = 0.25 * (yt + alamb)
        ave = (xt + yt + yt) / 3.0
        s = (yt - ave) / ave
        if abs(s) <= _ERRTOL_DJ:
            break
    return w * (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / math.sqrt(ave)


def _rf(x, y, z):
    xt, yt, zt = x, y, z
    for _ in range(_MAX_IT):
        sx, sy, sz = math.sqrt(xt), math.sqrt(yt), math.sqrt(zt)
        alamb = sx * (sy + sz) + sy * sz
        xt = 0.25 * (xt + alamb)
        yt = 0.25 * (yt + alamb)
        zt = 0.25 * (zt + alamb)
        ave = (xt + yt + zt) / 3.0
        dx, dy, dz = (ave - xt) / ave, (ave - yt) / ave, (ave - zt) / ave
        if max(abs(dx), abs(dy), abs(dz)) <= _ERRTOL_F:
            break
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 / 44.0 * e3) * e2 + e3 / 14.0) / math.sqrt(ave)


def _rd(x, y, z):
    xt, yt, zt = x, y, z
    acc, fac = 0.0, 1.0
    for _ in range(_MAX_IT):
        sx, sy, sz = math.sqrt(xt), math.sqrt(yt), math.sqrt(zt)
        alamb = sx * (sy + sz) + sy * sz
        acc += fac / (sz * (zt + alamb))
        fac *= 0.25
        xt = 0.25 * (xt + alamb)
        yt = 0.25 * (yt + alamb)
        zt = 0.25 * (zt + alamb)
        ave = 0.2 * (xt + yt + 3.0 * zt)
        dx, dy, dz = (ave - xt) / ave, (ave - yt) / ave, (ave - zt) / ave
        if max(abs(dx), abs(dy), abs(dz)) <= _ERRTOL_DJ:
            break
    c1, c2, c3, c4 = 3.0 / 14.0, 1.0 / 6.0, 9.0 / 22.0, 3.0 / 26.0
    c5, c6 = 0.25 * c3, 1.5 * c4
    ea = dx * dy
    eb = dz * dz
    ec = ea - eb
    ed = ea - 6.0 * eb
    ee = ed + ec + ec
    return 3.0 * acc + fac * (
        1.0 + ed * (-c1 + c5 * ed - c6 * dz * ee) + dz * (c2 * ee + dz * (-c3 * ec + dz * c4 * ea))
    ) / (ave * math.sqrt(ave))


def _rj(x, y, z, p):
    # p > 0 only; the circular regimes never need the Cauchy value
    if not p > 0.0:
        return math.nan
    xt, yt, zt, pt = x, y, z, p
    acc, fac = 0.0, 1.0
    for _ in range(_MAX_IT):
        sx, sy, sz = math.sqrt(xt), math.sqrt(yt), math.sqrt(zt)
        alamb = sx * (sy + sz) + sy * sz
        alpha = (pt * (sx + sy + sz) + sx * sy * sz) ** 2
        beta = pt * (pt + alamb) ** 2
        acc += fac * _rc(alpha, beta)
        fac *= 0.25
        xt = 0.25 * (xt + alamb)
        yt = 0.25 * (yt + alamb)
        zt = 0.25 * (zt + alamb)
        pt = 0.25 * (pt + alamb)
        ave = 0.2 * (xt + yt + zt + pt + pt)
        dx, dy, dz, dp = (ave - xt) / ave, (ave - yt) / ave, (ave - zt) / ave, (ave - pt) / ave
        if max(abs(dx), abs(dy), abs(dz), abs(dp)) <= _ERRTOL_DJ:
            break
    c1, c2, c3, c4 = 3.0 / 14.0, 1.0 / 3.0, 3.0 / 22.0, 3.0 / 26.0
    c5, c6, c7, c8 = 0.75 * c3, 1.5 * c4, 0.5 * c2, c3 + c3
    ea = dx * (dy + dz) + dy * dz
    eb = dx * dy * dz
    ec = dp * dp
    ed = ea - 3.0 * ec
    ee = eb + 2.0 * dp * (ea - ec)
    return 3.0 * acc + fac * (
        1.0 + ed * (-c1 + c5 * ed - c6 * ee) + eb * (c7 + dp * (-c8 + dp * c4))
        + dp * ea * (c2 - dp * c3) - c2 * dp * ec
    ) / (ave * math.sqrt(ave))


def _agm_KE(kp2):
    """Complete K, E from the complementary parameter kp2 = 1 - k^2 by the AGM."""
    a, b = 1.0, math.sqrt(kp2)
    c2sum = 0.5 * (1.0 - kp2)  # 2^{-1} c_0^2 with c_0 = k
    pw = 0.5
    for _ in range(60):
        an = 0.5 * (a + b)
        cn = 0.5 * (a - b)
        b = math.sqrt(a * b)
        a = an
        pw *= 2.0
        c2sum += pw * cn * cn
        if abs(cn) <= 1e-16 * a:
            break
    K = 0.5 * math.pi / a
    return K, K * (1.0 - c2sum)


def _newton3(x, c3, c2, c1, c0, scale):
    f = ((c3 * x + c2) * x + c1) * x + c0
    df = (3.0 * c3 * x + 2.0 * c2) * x + c1
    if df != 0.0:
        step = f / df
        if abs(step) < 1e-6 * scale:
            return x - step
    return x


def _cubic_roots_sorted(c3, c2, c1, c0):
    """Real parts of the roots of a cubic in closed form, real roots Newton-polished.

    Returns (r1, r2, r3, n_real) with r1 <= r2 <= r3.
    """
    b, c, d = c2 / c3, c1 / c3, c0 / c3
    sh = -b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d
    scale = 1.0 + abs(b) + math.sqrt(abs(c)) + abs(d) ** (1.0 / 3.0)
    disc = 0.25 * q * q + p * p * p / 27.0
    if disc <= 0.0:
        # three real roots (trigonometric form)
        m = 2.0 * math.sqrt(max(-p / 3.0, 0.0))
        if m == 0.0:
            r1 = r2 = r3 = sh
        else:
            arg = min(1.0, max(-1.0, 3.0 * q / (p * m)))
            phi = math.acos(arg) / 3.0
            r1 = sh + m * math.cos(phi)
            r2 = sh + m * math.cos(phi - 2.0 * math.pi / 3.0)
            r3 = sh + m * math.cos(phi - 4.0 * math.pi / 3.0)
        nreal = 3
    else:
        sq = math.sqrt(disc)
        u = math.copysign(abs(-0.5 * q + sq) ** (1.0 / 3.0), -0.5 * q + sq)
        v = math.copysign(abs(-0.5 * q - sq) ** (1.0 / 3.0), -0.5 * q - sq)
        r1 = sh + u + v
        r2 = r3 = sh - 0.5 * (u + v)
        # a nearly double root counts as real
        nreal = 3 if 0.5 * math.sqrt(3.0) * abs(u - v) <= 1e-10 * scale else 1
    r1 = _newton3(r1, c3, c2, c1, c0, scale)
    if nreal == 3:
        r2 = _newton3(r2, c3, c2, c1, c0, scale)
        r3 = _newton3(r3, c3, c2, c1, c0, scale)
    # three-element sort without allocating
    if r1 > r2:
        r1, r2 = r2, r1
    if r2 > r3:
        r2, r3 = r3, r2
    if r1 > r2:
        r1, r2 = r2, r1
    return r1, r2, r3, nreal


def _poly_AB(p, l, h, R, t):
    a = (R * l * (1.0 - 2.0 * t) + (t - R + 2.0 * R * t + l * t) * p - t * p * p) / R
    b = (t * t / (R * R)) * p * (p - l) * (p - 2.0 * R) * (p - l - 2.0)
    return a, b


def _area_action_one(l, h, R, t, one_m_cos, w_sin):
    """-(1/pi) int_{pmin}^{pmax} arccos(clip((h-A)/sqrt(B))) dp, split at cubic roots.

    Nodes p = a + (b - a)(1 - cos theta)/2 on each piece; the tables hold
    1 - cos(theta_i) and weight_i sin(theta_i).
    """
    pmin = max(0.0, l)
    pmax = min(l + 2.0, 2.0 * R)
    if pmax <= pmin:
        return 0.0
    # P = B - (h - A)^2 coefficients (degree 3)
    a2 = -t / R
    a1 = (t - R + 2.0 * R * t + l * t) / R
    a0 = l * (1.0 - 2.0 * t)
    s = t * t / (R * R)
    # B = s * p (p - l)(p - 2R)(p - l - 2) expanded
    e1 = l + 2.0 * R + l + 2.0
    e2 = l * 2.0 * R + l * (l + 2.0) + 2.0 * R * (l + 2.0)
    e3 = l * 2.0 * R * (l + 2.0)
    b3, b2, b1 = -s * e1, s * e2, -s * e3
    d0 = h - a0
    # (h - A)^2 = (d0 - a1 p - a2 p^2)^2
    q3 = 2.0 * a1 * a2
    q2 = a1 * a1 - 2.0 * d0 * a2
    q1 = -2.0 * d0 * a1
    q0 = d0 * d0
    c3, c2, c1, c0 = b3 - q3, b2 - q2, b1 - q1, -q0
    bp = np.empty(5)
    bp[0] = pmin
    bp[4] = pmax
    if c3 != 0.0:
        r1, r2, r3, _ = _cubic_roots_sorted(c3, c2, c1, c0)
        bp[1] = min(max(r1, pmin), pmax)
        bp[2] = min(max(r2, pmin), pmax)
        bp[3] = min(max(r3, pmin), pmax)
    else:
        bp[1] = pmin
        bp[2] = pmin
        bp[3] = pmin
    bp.sort()
    total = 0.0
    n = one_m_cos.shape[0]
    for k in range(4):
        a = bp[k]
        b = bp[k + 1]
        if b - a <= 0.0:
            continue
        half = 0.5 * (b - a)
        acc = 0.0
        for i in range(n):
            p = a + half * one_m_cos[i]
            av, bv = _poly_AB(p, l, h, R, t)
            num = h - av
            if bv <= 0.0:
                c = 1.0 if num >= 0.0 else -1.0
            else:
                c = num / math.sqrt(bv)
                if c > 1.0:
                    c = 1.0
                elif c < -1.0:
                    c = -1.0
            acc += w_sin[i] * math.acos(c)
        total += half * acc
    return -total / math.pi


# ------------------------------------------------------------- numpy vectors

def _np_rc(x, y):
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    neg = y < 0.0
    xt, yt = np.where(neg, x - y, x), np.abs(y)
    with np.errstate(invalid="ignore"):
        w = np.where(neg, np.sqrt(x) / np.sqrt(xt), 1.0)
    for _ in range(_MAX_IT):
        alamb = 2.0 * np.sqrt(xt) * np.sqrt(yt) + yt
        xt = 0.25 * (xt + alamb)
        yt = 0.25 * (yt + alamb)
        ave = (xt + yt + yt) / 3.0
        s = (yt - ave) / ave
        if np.all(np.abs(s) <= _ERRTOL_DJ):
            break
    return w * (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / np.sqrt(ave)


def _np_rf(x, y, z):
    xt, yt, zt = (np.array(v, float) for v in np.broadcast_arrays(x, y, z))
    for _ in range(_MAX_IT):
        sx, sy, sz = np.sqrt(xt), np.sqrt(yt), np.sqrt(zt)
        alamb = sx * (sy + sz) + sy * sz
        xt, yt, zt = 0.25 * (xt + alamb), 0.25 * (yt + alamb), 0.25 * (zt + alamb)
        ave = (xt + yt + zt) / 3.0
        dx, dy, dz = (ave - xt) / ave, (ave - yt) / ave, (ave - zt) / ave
        if np.all(np.maximum(np.maximum(np.abs(dx), np.abs(dy)), np.abs(dz)) <= _ERRTOL_F):
            break
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 / 44.0 * e3) * e2 + e3 / 14.0) / np.sqrt(ave)


def _np_rd(x, y, z):
    xt, yt, zt = (np.array(v, float) for v in np.broadcast_arrays(x, y, z))
    acc = np.zeros_like(xt)
    fac = 1.0
    for _ in range(_MAX_IT):
        sx, sy, sz = np.sqrt(xt), np.sqrt(yt), np.sqrt(zt)
        alamb = sx * (sy + sz) + sy * sz
        acc = acc + fac / (sz * (zt + alamb))
        fac *= 0.25
        xt, yt, zt = 0.25 * (xt + alamb), 0.25 * (yt + alamb), 0.25 * (zt + alamb)
        ave = 0.2 * (xt + yt + 3.0 * zt)
        dx, dy, dz = (ave - xt) / ave, (ave - yt) / ave, (ave - zt) / ave
        if np.all(np.maximum(np.maximum(np.abs(dx), np.abs(dy)), np.abs(dz)) <= _ERRTOL_DJ):
            break
    c1, c2, c3, c4 = 3.0 / 14.0, 1.0 / 6.0, 9.0 / 22.0, 3.0 / 26.0
    c5, c6 = 0.25 * c3, 1.5 * c4
    ea = dx * dy
    eb = dz * dz
    ec = ea - eb
    ed = ea - 6.0 * eb
    ee = ed + ec + ec
    return 3.0 * acc + fac * (
        1.0 + ed * (-c1 + c5 * ed - c6 * dz * ee) + dz * (c2 * ee + dz * (-c3 * ec + dz * c4 * ea))
    ) / (ave * np.sqrt(ave))


def _np_rj(x, y, z, p):
    xt, yt, zt, pt = (np.array(v, float) for v in np.broadcast_arrays(x, y, z, p))
    bad = ~(pt > 0.0)
    pt = np.where(bad, 1.0, pt)
    acc = np.zeros_like(xt)
    fac = 1.0
    for _ in range(_MAX_IT):
        sx, sy, sz = np.sqrt(xt), np.sqrt(yt), np.sqrt(zt)
        alamb = sx * (sy + sz) + sy * sz
        alpha = (pt * (sx + sy + sz) + sx * sy * sz) ** 2
        beta = pt * (pt + alamb) ** 2
        acc = acc + fac * _np_rc(alpha, beta)
        fac *= 0.25
        xt, yt, zt, pt = (0.25 * (v + alamb) for v in (xt, yt, zt, pt))
        ave = 0.2 * (xt + yt + zt + pt + pt)
        d = [(ave - v) / ave for v in (xt, yt, zt, pt)]
        if np.all(np.max(np.abs(np.stack(d)), axis=0) <= _ERRTOL_DJ):
            break
    dx, dy, dz, dp = d
    c1, c2, c3, c4 = 3.0 / 14.0, 1.0 / 3.0, 3.0 / 22.0, 3.0 / 26.0
    c5, c6, c7, c8 = 0.75 * c3, 1.5 * c4, 0.5 * c2, c3 + c3
    ea = dx * (dy + dz) + dy * dz
    eb = dx * dy * dz
    ec = dp * dp
    ed = ea - 3.0 * ec
    ee = eb + 2.0 * dp * (ea - ec)
    out = 3.0 * acc + fac * (
        1.0 + ed * (-c1 + c5 * ed - c6 * ee) + eb * (c7 + dp * (-c8 + dp * c4))
        + dp * ea * (c2 - dp * c3) - c2 * dp * ec
    ) / (ave * np.sqrt(ave))
    return np.where(bad, np.nan, out)


def _np_agm_KE(kp2):
    kp2 = np.asarray(kp2, float)
    a = np.ones_like(kp2)
    b = np.sqrt(kp2)
    c2sum = 0.5 * (1.0 - kp2)
    pw = 0.5
    for _ in range(60):
        an = 0.5 * (a + b)
        cn = 0.5 * (a - b)
        b = np.sqrt(a * b)
        a = an
        pw *= 2.0
        c2sum = c2sum + pw * cn * cn
        if np.all(np.abs(cn) <= 1e-16 * a):
            break
    K = 0.5 * np.pi / a
    return K, K * (1.0 - c2sum)


def _np_cubic_roots_sorted(c3, c2, c1, c0):
    c3, c2, c1, c0 = (np.atleast_1d(np.asarray(v, float)) for v in np.broadcast_arrays(c3, c2, c1, c0))
    b, c, d = c2 / c3, c1 / c3, c0 / c3
    sh = -b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d
    scale = 1.0 + np.abs(b) + np.sqrt(np.abs(c)) + np.cbrt(np.abs(d))
    disc = 0.25 * q * q + p * p * p / 27.0
    three = disc <= 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        m = 2.0 * np.sqrt(np.maximum(-p / 3.0, 0.0))
        phi = np.arccos(np.clip(np.where(m == 0.0, 0.0, 3.0 * q / (p * m)), -1.0, 1.0)) / 3.0
        m = np.where(three, m, 0.0)
        phi = np.where(m == 0.0, 0.0, phi)
        sq = np.sqrt(np.maximum(disc, 0.0))
        u = np.cbrt(-0.5 * q + sq)
        v = np.cbrt(-0.5 * q - sq)
    k = 2.0 * np.pi / 3.0
    trig = np.stack([sh + m * np.cos(phi), sh + m * np.cos(phi - k), sh + m * np.cos(phi - 2 * k)], axis=1)
    card = np.stack([sh + u + v, sh - 0.5 * (u + v), sh - 0.5 * (u + v)], axis=1)
    re = np.where(three[:, None], trig, card)
    nreal = np.where(three | (0.5 * np.sqrt(3.0) * np.abs(u - v) <= 1e-10 * scale), 3, 1)
    polish = np.where(three[:, None] | (nreal[:, None] == 3), True, np.arange(3)[None, :] == 0)
    f = ((c3[:, None] * re + c2[:, None]) * re + c1[:, None]) * re + c0[:, None]
    df = (3.0 * c3[:, None] * re + 2.0 * c2[:, None]) * re + c1[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        step = np.where(df != 0.0, f / df, 0.0)
    ok = polish & (np.abs(step) < 1e-6 * scale[:, None])
    re = np.sort(np.where(ok, re - step, re), axis=1)
    return re[:, 0], re[:, 1], re[:, 2], nreal


def _np_area_action_batch(l, h, R, t, theta=GL_THETA, weight=GL_WEIGHT):
    l = np.asarray(l, float)
    h = np.asarray(h, float)
    pmin = np.maximum(0.0, l)
    pmax = np.minimum(l + 2.0, 2.0 * R)
    a2 = -t / R
    a1 = (t - R + 2.0 * R * t + l * t) / R
    a0 = l * (1.0 - 2.0 * t)
    s = t * t / (R * R)
    e1 = 2.0 * l + 2.0 * R + 2.0
    e2 = l * 2.0 * R + l * (l + 2.0) + 2.0 * R * (l + 2.0)
    e3 = l * 2.0 * R * (l + 2.0)
    d0 = h - a0
    c3 = -s * e1 - 2.0 * a1 * a2
    c2 = s * e2 - (a1 * a1 - 2.0 * d0 * a2)
    c1 = -s * e3 + 2.0 * d0 * a1
    c0 = -d0 * d0
    r1, r2, r3, _ = _np_cubic_roots_sorted(c3, c2, c1, c0)
    bp = np.stack([pmin, r1, r2, r3, pmax], axis=1)
    bp = np.clip(bp, pmin[:, None], np.maximum(pmax, pmin)[:, None])
    bp.sort(axis=1)
    a = bp[:, :-1, None]
    half = 0.5 * (bp[:, 1:, None] - a)
    p = a + half * (1.0 - np.cos(theta))[None, None, :]
    L = l[:, None, None]
    av = (R * L * (1.0 - 2.0 * t) + (t - R + 2.0 * R * t + L * t) * p - t * p * p) / R
    bv = s * p * (p - L) * (p - 2.0 * R) * (p - L - 2.0)
    num = h[:, None, None] - av
    with np.errstate(divide="ignore", invalid="ignore"):
        c = np.where(bv > 0.0, num / np.sqrt(np.where(bv > 0.0, bv, 1.0)), np.where(num >= 0.0, 1.0, -1.0))
    f = np.arccos(np.clip(c, -1.0, 1.0)) * np.sin(theta)[None, None, :]
    total = (half[..., 0] * (f @ weight)).sum(axis=1)
    return np.where(pmax > pmin, -total / np.pi, 0.0)


# ------------------------------------------------------------------ dispatch

numpy_impl = SimpleNamespace(
    rf=_np_rf, rd=_np_rd, rj=_np_rj, rc=_np_rc, agm_KE=_np_agm_KE,
    cubic_roots=_np_cubic_roots_sorted, area_action=_np_area_action_batch, name="numpy",
)


def _build_numba():
    njit = _nb.njit(cache=True, fastmath=False)
    rc = njit(_rc)
    # rebind globals so compiled functions call each other's compiled forms
    rf = njit(_rf)
    rd = njit(_rd)
    rj_py = type(_rj)(_rj.__code__, {**_rj.__globals__, "_rc": rc})
    rj = njit(rj_py)
    agm = njit(_agm_KE)
    newton = njit(_newton3)
    cubic = njit(type(_cubic_roots_sorted)(_cubic_roots_sorted.__code__,
                                           {**_cubic_roots_sorted.__globals__, "_newton3": newton}))
    poly = njit(_poly_AB)
    one_py = type(_area_action_one)(
        _area_action_one.__code__,
        {**_area_action_one.__globals__, "_cubic_roots_sorted": cubic, "_poly_AB": poly},
    )
    one = njit(one_py)

    @_nb.njit(parallel=True, cache=False)
    def _par(l, h, R, t, one_m_cos, w_sin, out):
        for i in _nb.prange(l.shape[0]):
            out[i] = one(l[i], h[i], R, t, one_m_cos, w_sin)
        return out

    @_nb.njit(cache=True)
    def _loop3(kind, x, y, z, out):
        for i in range(out.shape[0]):
            out[i] = rf(x[i], y[i], z[i]) if kind == 0 else rd(x[i], y[i], z[i])
        return out

    @_nb.njit(cache=True)
    def _loop_rj(x, y, z, p, out):
        for i in range(out.shape[0]):
            out[i] = rj(x[i], y[i], z[i], p[i])
        return out

    @_nb.njit(cache=True)
    def _loop_rc(x, y, out):
        for i in range(out.shape[0]):
            out[i] = rc(x[i], y[i])
        return out

    @_nb.njit(cache=True)
    def _loop_agm(m, K, E):
        for i in range(m.shape[0]):
            K[i], E[i] = agm(m[i])
        return K, E

    @_nb.njit(cache=True)
    def _loop_cubic(c3, c2, c1, c0, r, nr):
        for i in range(c3.shape[0]):
            a, b, c, d = cubic(c3[i], c2[i], c1[i], c0[i])
            r[i, 0], r[i, 1], r[i, 2] = a, b, c
            nr[i] = d
        return r, nr

    def _flat(*args):
        arrs = np.broadcast_arrays(*(np.asarray(a, float) for a in args))
        return arrs[0].shape, [np.ascontiguousarray(a).ravel() for a in arrs]

    def rf_v(x, y, z):
        shape, a = _flat(x, y, z)
        if not shape:
            return rf(*(float(v[0]) for v in a))
        return _loop3(0, *a, np.empty(a[0].size)).reshape(shape)

    def rd_v(x, y, z):
        shape, a = _flat(x, y, z)
        if not shape:
            return rd(*(float(v[0]) for v in a))
        return _loop3(1, *a, np.empty(a[0].size)).reshape(shape)

    def rj_v(x, y, z, p):
        shape, a = _flat(x, y, z, p)
        if not shape:
            return rj(*(float(v[0]) for v in a))
        return _loop_rj(*a, np.empty(a[0].size)).reshape(shape)

    def rc_v(x, y):
        shape, a = _flat(x, y)
        if not shape:
            return rc(*(float(v[0]) for v in a))
        return _loop_rc(*a, np.empty(a[0].size)).reshape(shape)

    def agm_v(m):
        shape, (a,) = _flat(m)
        if not shape:
            return agm(float(a[0]))
        K, E = _loop_agm(a, np.empty(a.size), np.empty(a.size))
        return K.reshape(shape), E.reshape(shape)

    def cubic_v(c3, c2, c1, c0):
        _, a = _flat(np.atleast_1d(c3), c2, c1, c0)
        n = a[0].size
        r, nr = _loop_cubic(*a, np.empty((n, 3)), np.empty(n, dtype=np.int64))
        return r[:, 0], r[:, 1], r[:, 2], nr

    def area_v(l, h, R, t, theta=GL_THETA, weight=GL_WEIGHT):
        l = np.ascontiguousarray(np.atleast_1d(np.asarray(l, float)))
        h = np.ascontiguousarray(np.broadcast_to(np.asarray(h, float), l.shape))
        out = np.empty(l.shape[0])
        return _par(l, h, float(R), float(t), 1.0 - np.cos(theta), weight * np.sin(theta), out)

    return SimpleNamespace(
        rf=rf_v, rd=rd_v, rj=rj_v, rc=rc_v, agm_KE=agm_v, cubic_roots=cubic_v,
        area_action=area_v, name="numba", scalar=SimpleNamespace(rf=rf, rd=rd, rj=rj, agm=agm, one=one),
    )


numba_impl = _build_numba() if HAVE_NUMBA else None
active = numba_impl if USE_NUMBA else numpy_impl


def backend_name() -> str:
    return active.name
