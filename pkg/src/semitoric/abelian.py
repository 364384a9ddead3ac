"""Abelian integrals on the curve s^2 = P(p2): actions, periods and rotation numbers.

Real-cycle integrals run over [zeta2, zeta3] where P >= 0; imaginary-cycle
integrals over [zeta1, zeta2] where P <= 0.  Each quantity has a primary
evaluation (Legendre forms or a spectral rule) and an independent quadrature
used as an oracle in the tests.

Everything is in scaled units; see :mod:`semitoric.reduced`.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import _kernels
from .elliptic import (Characteristic, EllipticModulus, complete_K, complete_Pi,
                       complete_Pi_carlson)
from .errors import DegenerateCycle, QuadratureFailure, SingularFibre
from .params import ModelParams
from .reduced import ReducedLevel, edge_values, model_for, solve_roots

CYCLE_TOL = 1e-14
QUAD_TOL = 1e-10
N_GLAUERT = 64


@dataclass(frozen=True)
class PeriodData:
    T: float
    W: float
    T_alpha: float
    W_alpha: float


@dataclass(frozen=True)
class ActionValue:
    I: float
    branch: bool

    def __float__(self):
        return self.I


@dataclass(frozen=True)
class _Curve:
    """Roots and edge data of one level, shared by all integrals."""

    l: float
    h: float
    R: float
    t: float
    z1: float
    z2: float
    z3: float
    a3: float  # |leading coefficient|
    A_l: float
    A_2R: float
    A_l2: float
    gap_l: float  # zeta2 - l, resolved without cancellation


def _level(level) -> ReducedLevel:
    return level if isinstance(level, ReducedLevel) else ReducedLevel(*level)


def _curve(level, p: ModelParams) -> _Curve:
    lv = _level(level)
    if lv.l == 0.0 and lv.h == 0.0:
        raise SingularFibre("(l, h) = (0, 0) is the focus-focus value")
    model = model_for(lv, p)
    z = solve_roots(lv, p, strict=True)
    l, R, t = lv.l, p.R, p.t
    A0, A_l, A_2R, A_l2 = edge_values(l, R=R, t=t)
    return _Curve(l, lv.h, R, t, z.zeta1, z.zeta2, z.zeta3, abs(model.a3), A_l, A_2R, A_l2,
                  _gap_to_l(l, lv.h, R, t, z.zeta2))


def _gap_to_l(l, h, R, t, z2, steps: int = 6) -> float:
    """zeta2 - l from P expanded about p = l.

    On the line hR = lt the root zeta2 meets the pole at l, and the plain
    difference of two nearby numbers would lose every significant digit the
    third-kind integral needs.
    """
    x = z2 - l
    if l <= 0.0:
        return x
    s = t * t / (R * R)
    # P(l + u) = s u g(u) - D(u)^2, D = h - A(l + u)
    g = np.polymul(np.polymul([1.0, l], [1.0, l - 2 * R]), [1.0, -2.0])
    a2, a1 = -t / R, (t - R + 2 * R * t + l * t) / R
    D = np.array([-a2, -(2 * a2 * l + a1), h - t * l / R])
    P = np.polysub(s * np.polymul(g, [1.0, 0.0]), np.polymul(D, D))
    dP = np.polyder(P)
    for _ in range(steps):
        f, df = np.polyval(P, x), np.polyval(dP, x)
        if df == 0.0:
            break
        step = f / df
        x -= step
        if abs(step) <= 1e-17 * max(abs(x), 1e-300):
            break
    return x


def _need_beta(c: _Curve):
    if c.z3 - c.z2 < CYCLE_TOL:
        raise DegenerateCycle(f"real cycle collapsed: zeta3 - zeta2 = {c.z3 - c.z2:.3e}")


def _need_alpha(c: _Curve):
    if c.z2 - c.z1 < CYCLE_TOL:
        raise DegenerateCycle(f"imaginary cycle collapsed: zeta2 - zeta1 = {c.z2 - c.z1:.3e}")


def branch_flag(l: float, h: float, R: float, t: float) -> bool:
    """True where the +l correction is added to the abelian integral."""
    return l > 0 and h * R < l * t


def _rI_parts(c: _Curve):
    """R_I as (smooth linear part, list of (residue, pole))."""
    l, h, R, t = c.l, c.h, c.R, c.t
    c0 = 1 - 3 * t + R + t / R - l * (1 - t) + 2 * h
    poles = [(0.5 * (h - c.A_l) * l, l), (0.5 * (h - c.A_2R) * 2 * R, 2 * R),
             (0.5 * (h - c.A_l2) * (l + 2), l + 2)]
    return (c0, 1 - t), poles


def _rW_poles(c: _Curve):
    return [(-0.5 * (c.h - c.A_l), c.l), (-0.5 * (c.h - c.A_l2), c.l + 2)]


def R_I(p2, level, p: ModelParams):
    c = _curve(level, p)
    (a, b), poles = _rI_parts(c)
    return a + b * p2 + sum(r / (p2 - g) for r, g in poles)


# ------------------------------------------------------------ real cycle

def _beta_quad(c: _Curve, f) -> float:
    """int_{z2}^{z3} f(p) dp / sqrt(P) after p = z2 + d (1 - cos th) / 2.

    The map absorbs both inverse square roots, leaving a smooth integrand.
    """
    d = c.z3 - c.z2

    def g(th):
        p = c.z2 + 0.5 * d * (1 - math.cos(th))
        return f(p) / math.sqrt(c.a3 * (p - c.z1))

    val, err = integrate.quad(g, 0.0, math.pi, epsabs=1e-13, epsrel=1e-13, limit=200)
    if err > QUAD_TOL * max(1.0, abs(val)):
        raise QuadratureFailure(f"real-cycle quadrature error estimate {err:.2e}")
    return val


def _beta_tanhsinh(c: _Curve, f) -> float:
    """Same integral with the double-exponential rule.

    With p = z3 - d (1 - s)^2 the singularity at z3 disappears and the one at
    z2 sits at s = 0, where floating point resolves it; tanh-sinh handles the
    remaining inverse square root.
    """
    d = c.z3 - c.z2

    def g(s):
        s = np.asarray(s, float)
        p = c.z3 - d * (1.0 - s) ** 2
        return 2.0 * f(p) / np.sqrt(c.a3 * (p - c.z1) * s * (2.0 - s))

    res = integrate.tanhsinh(g, 0.0, 1.0, atol=1e-14, rtol=1e-13)
    if not np.all(res.success):
        raise QuadratureFailure("tanh-sinh did not converge on the real cycle")
    return float(res.integral)


def _legendre_scale(c: _Curve):
    k2 = (c.z3 - c.z2) / (c.z3 - c.z1)
    return EllipticModulus.from_m(k2), 2.0 / math.sqrt(c.a3 * (c.z3 - c.z1))


def period(level, p: ModelParams) -> float:
    """Reduced period T = 2 int dp / sqrt(P) in Legendre form."""
    c = _curve(level, p)
    _need_beta(c)
    mod, N = _legendre_scale(c)
    return 2.0 * N * complete_K(mod)


def period_quadrature(level, p: ModelParams, method: str = "cosine") -> float:
    c = _curve(level, p)
    _need_beta(c)
    one = lambda x: np.ones_like(x) if isinstance(x, np.ndarray) else 1.0
    q = _beta_tanhsinh if method == "tanhsinh" else _beta_quad
    return 2.0 * q(c, one)


def characteristics(level, p: ModelParams) -> tuple[Characteristic, Characteristic]:
    """Characteristics of the two third-kind integrals of W (poles l and l+2)."""
    c = _curve(level, p)
    mod, _ = _legendre_scale(c)
    n = [(c.z3 - c.z2) / (c.z3 - g) for g in (c.l, c.l + 2)]
    return Characteristic.classify(n[0], mod), Characteristic.classify(n[1], mod)


def _pole_integral(c: _Curve, gamma: float, carlson: bool = False) -> float:
    """int_{z2}^{z3} dp / ((p - gamma) sqrt(P)) for gamma outside the cycle."""
    mod, N = _legendre_scale(c)
    n = (c.z3 - c.z2) / (c.z3 - gamma)
    if gamma == c.l and c.l > 0.0:
        # 1 - n is tiny near hR = lt; the Carlson form takes it directly
        one_m_n = c.gap_l / (c.z3 - gamma)
        Pi = complete_K(mod) + n / 3.0 * float(_kernels.active.rj(0.0, mod.k_prime_sq, 1.0, one_m_n))
        return N * Pi / (c.z3 - gamma)
    Pi = complete_Pi_carlson(n, mod) if carlson else complete_Pi(n, mod)
    return N * Pi / (c.z3 - gamma)


def _chi(l: float, h: float, R: float, t: float) -> float:
    return float(branch_flag(l, h, R, t)) + float(l < 0)


def rotation_number(level, p: ModelParams, *, privileged: bool = True, carlson: bool = False) -> float:
    """Rotation number W = -dI/dl.

    With ``privileged`` (default) the action is the one that vanishes
    continuously with l on both sides of the cut, i.e. the abelian integral
    plus the branch term plus min(l, 0).
    """
    c = _curve(level, p)
    _need_beta(c)
    w = sum(r * _pole_integral(c, g, carlson) for r, g in _rW_poles(c)) / math.pi
    if privileged:
        w -= _chi(c.l, c.h, c.R, c.t)
    else:
        w -= float(branch_flag(c.l, c.h, c.R, c.t))
    return w


def rotation_number_quadrature(level, p: ModelParams, *, privileged: bool = True) -> float:
    c = _curve(level, p)
    _need_beta(c)
    poles = _rW_poles(c)
    w = _beta_quad(c, lambda x: sum(r / (x - g) for r, g in poles)) / math.pi
    return w - (_chi(c.l, c.h, c.R, c.t) if privileged else float(branch_flag(c.l, c.h, c.R, c.t)))


def abelian_integral(level, p: ModelParams) -> float:
    """(1/pi) int_{z2}^{z3} R_I dp / sqrt(P), without branch correction.

    Pole terms use the third-kind integral: near hR = lt the pole at l runs
    into z2 and plain quadrature loses the resulting finite jump.
    """
    c = _curve(level, p)
    _need_beta(c)
    (a, b), poles = _rI_parts(c)
    val = _beta_quad(c, lambda x: a + b * x)
    val += sum(r * _pole_integral(c, g) for r, g in poles if r != 0.0)
    return val / math.pi


def abelian_integral_quadrature(level, p: ModelParams) -> float:
    c = _curve(level, p)
    _need_beta(c)
    (a, b), poles = _rI_parts(c)
    return _beta_quad(c, lambda x: a + b * x + sum(r / (x - g) for r, g in poles)) / math.pi


def action(level, p: ModelParams) -> ActionValue:
    """Action on the real cycle, continuous across hR = lt."""
    lv = _level(level)
    br = branch_flag(lv.l, lv.h, p.R, p.t)
    val = abelian_integral(lv, p)
    return ActionValue(val + (lv.l if br else 0.0), br)


def privileged_action(level, p: ModelParams) -> float:
    """Action normalised to be continuous across l = 0 as well (adds min(l, 0))."""
    lv = _level(level)
    return action(lv, p).I + min(lv.l, 0.0)


def area_action(l: float, h: float, p: ModelParams) -> float:
    """Action as minus the reduced area above the level curve; valid on the whole image."""
    out = _kernels.active.area_action(np.array([float(l)]), np.array([float(h)]), p.R, p.t)
    return float(out[0])


def area_action_batch(l, h, p: ModelParams) -> np.ndarray:
    l = np.ascontiguousarray(l, dtype=float)
    h = np.ascontiguousarray(h, dtype=float)
    return np.asarray(_kernels.active.area_action(l, h, p.R, p.t))


def area_action_quadrature(l: float, h: float, p: ModelParams) -> float:
    """Adaptive-quadrature oracle for :func:`area_action`."""
    R, t = p.R, p.t
    lv = ReducedLevel(l, h)
    model = model_for(lv, p)
    lo, hi = model.p_range

    def f(x):
        b = model.eval_B(x)
        if b <= 0:
            return 0.0 if h <= model.eval_A(x) else math.pi
        return math.acos(min(1.0, max(-1.0, (h - model.eval_A(x)) / math.sqrt(b))))

    pts = [r for r in np.roots(model.P).real if lo < r < hi]
    val = integrate.quad(f, lo, hi, points=pts or None, limit=400, epsabs=1e-13, epsrel=1e-13)[0]
    return -val / math.pi


def origin_action(p: ModelParams) -> float:
    """I(0, 0) in scaled units, the value subtracted by the privileged map."""
    return area_action_quadrature(0.0, 0.0, p)


# ------------------------------------------------------- imaginary cycle

def _glauert(c: _Curve, smooth, poles, n: int = N_GLAUERT) -> float:
    """int_{z1}^{z2} [smooth(p) + sum r/(p-g)] dp / sqrt(-P), principal value.

    After p = z1 + d (1 - cos th) / 2 the weight becomes 1/sqrt(a3 (z3 - p)),
    which is smooth on the cycle.  Poles inside the cycle are handled with the
    Glauert identity PV int_0^pi cos(k th) / (cos th - cos phi) dth
    = pi sin(k phi) / sin(phi) on a cosine expansion of the numerator.
    """
    d = c.z2 - c.z1
    th = math.pi * (np.arange(n) + 0.5) / n
    x = c.z1 + 0.5 * d * (1 - np.cos(th))
    w = 1.0 / np.sqrt(c.a3 * (c.z3 - x))
    tot = math.pi * float(np.mean(smooth(x) * w))
    kk = np.arange(n)
    cosmat = np.cos(np.outer(kk, th))
    for r, g in poles:
        if c.z1 < g < c.z2:
            phi = math.acos(1 - 2 * (g - c.z1) / d)
            a = 2.0 / n * cosmat @ (r * w)
            a[0] *= 0.5
            s = math.pi * float(np.sum(a * np.sin(kk * phi))) / math.sin(phi)
            # p - g = (d/2)(cos phi - cos th)
            tot -= s / (0.5 * d)
        else:
            tot += math.pi * float(np.mean(r * w / (x - g)))
    return tot


def _alpha_cauchy(c: _Curve, smooth, poles) -> float:
    """Oracle for :func:`_glauert` using QUADPACK's Cauchy weight in th."""
    with warnings.catch_warnings():
        # QAWC flags round-off at the requested tolerance; agreement is checked by the caller
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return _alpha_cauchy_impl(c, smooth, poles)


def _alpha_cauchy_impl(c: _Curve, smooth, poles) -> float:
    d = c.z2 - c.z1
    px = lambda th: c.z1 + 0.5 * d * (1 - math.cos(th))
    wt = lambda th: 1.0 / math.sqrt(c.a3 * (c.z3 - px(th)))
    tot = integrate.quad(lambda th: smooth(px(th)) * wt(th), 0, math.pi, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
    for r, g in poles:
        if c.z1 < g < c.z2:
            phi = math.acos(1 - 2 * (g - c.z1) / d)

            def ratio(th, phi=phi):
                # (th - phi) / (p(th) - g) via p - g = d sin((th+phi)/2) sin((th-phi)/2)
                x = 0.5 * (th - phi)
                sinc = x / math.sin(x) if x != 0.0 else 1.0
                return 2.0 * sinc / (d * math.sin(0.5 * (th + phi)))

            val = integrate.quad(lambda th: r * wt(th) * ratio(th), 0, math.pi, weight="cauchy", wvar=phi,
                                 epsabs=1e-14, epsrel=1e-13, limit=400)[0]
        else:
            val = integrate.quad(lambda th: r * wt(th) / (px(th) - g), 0, math.pi, epsabs=1e-13, epsrel=1e-13,
                                 limit=200)[0]
        tot += val
    return tot


def _imag_parts(c: _Curve):
    (a, b), poles = _rI_parts(c)
    return (lambda x: a + b * x), poles


def imaginary_action(level, p: ModelParams, *, oracle: bool = False) -> float:
    """J = (2/pi) PV int_{z1}^{z2} R_I dp / sqrt(-P); linear part (-(R+t-2Rt) l + 2R h)/rA."""
    lv = _level(level)
    if lv.l == 0.0 and lv.h == 0.0:
        return 0.0
    c = _curve(lv, p)
    _need_alpha(c)
    sm, poles = _imag_parts(c)
    q = _alpha_cauchy if oracle else _glauert
    return 2.0 / math.pi * q(c, sm, poles)


def imaginary_period(level, p: ModelParams) -> float:
    """T^alpha = 2 pi dJ/dh, in Legendre form with the complementary modulus."""
    c = _curve(level, p)
    _need_alpha(c)
    kp2 = (c.z2 - c.z1) / (c.z3 - c.z1)
    return 8.0 * complete_K(EllipticModulus.from_m(kp2)) / math.sqrt(c.a3 * (c.z3 - c.z1))


def imaginary_period_quadrature(level, p: ModelParams) -> float:
    c = _curve(level, p)
    _need_alpha(c)
    return 4.0 * _glauert(c, lambda x: np.ones_like(x), [])


def imaginary_rotation(level, p: ModelParams, *, oracle: bool = False) -> float:
    """W^alpha = -dJ/dl = (2/pi) PV int R_W dp / sqrt(-P)."""
    c = _curve(level, p)
    _need_alpha(c)
    q = _alpha_cauchy if oracle else _glauert
    return 2.0 / math.pi * q(c, lambda x: 0.0 * x, _rW_poles(c))


# ----------------------------------------------------------------- bundle

def period_data(level, p: ModelParams) -> PeriodData:
    return PeriodData(period(level, p), rotation_number(level, p), imaginary_period(level, p),
                      imaginary_rotation(level, p))


def alpha_limits(p: ModelParams, eps: float = 4e-3, direction=(1.0, 1.0)) -> tuple[float, float]:
    """(T^alpha, W^alpha) at the focus-focus value, by two Richardson levels.

    Both are sampled along (l, h) = s * direction at s = eps, eps/2, eps/4 in
    scaled units; the error is taken to be a power series in s.
    """
    dl, dh = direction

    def at(s):
        lv = ReducedLevel(s * dl, s * dh)
        return np.array([imaginary_period(lv, p), imaginary_rotation(lv, p)])

    v0, v1, v2 = (at(eps / 2 ** i) for i in range(3))
    r1a, r1b = 2 * v1 - v0, 2 * v2 - v1
    T, W = (4 * r1b - r1a) / 3
    return float(T), float(W)
