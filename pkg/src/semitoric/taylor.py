"""Second-order Taylor series invariant of the focus-focus point.

Coefficients are reported in unscaled units.  The scaled series satisfies
S(l, j) = R1 * s(l / R1, j / R1) + j ln R1, so c_j shifts by ln R1 and the
quadratic coefficients are divided by R1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import abelian, series
from .errors import IllConditionedFit, OutOfFocusFocusRange
from .params import ModelParams, ParamChart, from_chart, require_focus_focus, reverse_map
from .reduced import ReducedLevel

COND_LIMIT = 1e8


@dataclass(frozen=True)
class TaylorInvariant:
    c_l: float
    c_j: float
    c_ll: float
    c_lj: float
    c_jj: float

    def __post_init__(self):
        # linear l coefficient is only defined mod pi
        object.__setattr__(self, "c_l", float(self.c_l) % math.pi)

    def as_array(self) -> np.ndarray:
        return np.array([self.c_l, self.c_j, self.c_ll, self.c_lj, self.c_jj])

    def as_dict(self) -> dict:
        return {"c_l": self.c_l, "c_j": self.c_j, "c_ll": self.c_ll, "c_lj": self.c_lj, "c_jj": self.c_jj}

    def differences(self, other: "TaylorInvariant") -> np.ndarray:
        """Componentwise difference; c_l compared mod pi."""
        d = self.as_array() - other.as_array()
        d[0] = (d[0] + 0.5 * math.pi) % math.pi - 0.5 * math.pi
        return d

    def evaluate(self, l, j):
        return (self.c_l * l + self.c_j * j + self.c_ll * l * l + self.c_lj * l * j + self.c_jj * j * j)


def closed_form(p: ModelParams) -> TaylorInvariant:
    require_focus_focus(p)
    R1, R2, t = p.R1, p.R2, p.t
    rA = p.rA
    cl = math.atan2(R2 ** 2 * (2 * t - 1) - R1 * R2 * (1 + t) + R1 ** 2 * t, (R1 - R2) * R1 * rA)
    cj = math.log(4 * R1 ** 2.5 * rA ** 3 / (R2 ** 1.5 * (1 - t) * t * t))
    cll = (-R2 ** 4 * (2 * t - 1) ** 3 + R1 * R2 ** 3 * (1 - 17 * t + 46 * t * t - 32 * t ** 3)
           - 3 * R1 ** 2 * R2 ** 2 * t * (1 - 7 * t + 4 * t * t) + R1 ** 3 * R2 * (3 - 5 * t) * t * t
           - R1 ** 4 * t ** 3) / (16 * R1 ** 4 * R2 * rA ** 3)
    clj = (R2 - R1) * (R2 ** 2 * (1 - 2 * t) ** 2 + 2 * R1 * R2 * t * (6 * t - 1) + R1 ** 2 * t * t) / (
        8 * R1 ** 3 * R2 * rA ** 2)
    cjj = (R2 ** 4 * (2 * t - 1) ** 3 - R1 * R2 ** 3 * (1 + 15 * t - 42 * t * t + 16 * t ** 3)
           + R1 ** 2 * R2 ** 2 * t * (3 + 3 * t - 28 * t * t) + R1 ** 3 * R2 * t * t * (13 * t - 3)
           + R1 ** 4 * t ** 3) / (16 * R1 ** 4 * R2 * rA ** 3)
    return TaylorInvariant(cl, cj, cll, clj, cjj)


def scaled_log_constant(p: ModelParams) -> float:
    """Constant term of dS/dj in scaled units."""
    return series.log_constant(p.R, p.t)


# ------------------------------------------------------------ numerics

def energy_from_imaginary_action(l: float, j: float, p: ModelParams, tol: float = 1e-15,
                                 max_iter: int = 40) -> float:
    """Solve J(l, h) = j for h by Newton, starting from the Birkhoff series."""
    h = float(series.birkhoff(l, j, p.R, p.t))
    for _ in range(max_iter):
        lv = ReducedLevel(l, h)
        f = abelian.imaginary_action(lv, p) - j
        dh = f / (abelian.imaginary_period(lv, p) / (2 * math.pi))
        h -= dh
        if abs(dh) <= tol * max(1.0, abs(h)):
            break
    return h


def partials_numeric(l: float, j: float, p: ModelParams) -> tuple[float, float]:
    """(dS/dl, dS/dj) of the scaled series at the scaled point w = l + i j."""
    require_focus_focus(p)
    h = energy_from_imaginary_action(l, j, p)
    lv = ReducedLevel(l, h)
    T = abelian.period(lv, p)
    W = abelian.rotation_number(lv, p)
    Ta = abelian.imaginary_period(lv, p)
    Wa = abelian.imaginary_rotation(lv, p)
    dSj = 2 * math.pi * T / Ta + math.log(math.hypot(l, j))
    dSl = 2 * math.pi * (Wa * T / Ta - W) + series.arg_w(l, j)
    return dSl, dSj


def sample_disc(radius: float, n: int, seed: int = 0) -> np.ndarray:
    """Antipodal pairs, area-uniform on the annulus radius/4 < |w| < radius."""
    rng = np.random.default_rng(seed)
    half = n // 2
    r = radius * np.sqrt(rng.uniform(1 / 16, 1, half))
    th = rng.uniform(0, 2 * math.pi, half)
    pts = np.column_stack([r * np.cos(th), r * np.sin(th)])
    return np.vstack([pts, -pts])


@dataclass
class FitResult:
    scaled: np.ndarray
    condition: float
    residual_rms: float
    points: np.ndarray = field(repr=False)


def fit_partials(points: np.ndarray, dSl: np.ndarray, dSj: np.ndarray) -> FitResult:
    """Joint least squares for (c_l, c_j, c_ll, c_lj, c_jj) from both partials."""
    L, J = points[:, 0], points[:, 1]
    n = len(L)
    Z, O = np.zeros(n), np.ones(n)
    M = np.vstack([np.column_stack([Z, O, Z, L, 2 * J]), np.column_stack([O, Z, 2 * L, J, Z])])
    # column scaling keeps the condition number meaningful
    scale = np.linalg.norm(M, axis=0)
    if np.any(scale == 0):
        raise IllConditionedFit("a design column vanishes on the sample")
    cond = float(np.linalg.cond(M / scale))
    if not cond <= COND_LIMIT:
        raise IllConditionedFit(f"design matrix condition {cond:.3e}")
    y = np.concatenate([dSj, dSl])
    coef, *_ = np.linalg.lstsq(M, y, rcond=None)
    res = y - M @ coef
    return FitResult(coef, cond, float(np.sqrt(np.mean(res ** 2))), points)


def unscale(scaled: np.ndarray, R1: float) -> TaylorInvariant:
    cl, cj, cll, clj, cjj = scaled
    return TaylorInvariant(cl, cj + math.log(R1), cll / R1, clj / R1, cjj / R1)


def default_radius(p: ModelParams) -> float:
    """Sample radius (scaled units) for the regression.

    The cubic remainder blows up as rA -> 0, so the disc shrinks like rA**2
    near the Hopf boundary.
    """
    return 1e-2 * min(1.0, p.rA ** 2)


def recover_coefficients(p: ModelParams, sample_radius: float | None = None, n_samples: int = 64,
                         seed: int = 0, return_fit: bool = False):
    """Fit the quadratic series to numerically integrated partials on a disc.

    The radius is in scaled units (default :func:`default_radius`).  Returns
    unscaled coefficients.
    """
    require_focus_focus(p)
    if sample_radius is None:
        sample_radius = default_radius(p)
    pts = sample_disc(sample_radius, n_samples, seed)
    d = np.array([partials_numeric(l, j, p) for l, j in pts])
    fit = fit_partials(pts, d[:, 0], d[:, 1])
    inv = unscale(fit.scaled, p.R1)
    return (inv, fit) if return_fit else inv


# --------------------------------------------------------- special cases

@dataclass(frozen=True)
class ReverseReport:
    original: TaylorInvariant
    reversed: TaylorInvariant
    residuals: np.ndarray

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residuals)))


def mirror_l(s: TaylorInvariant) -> TaylorInvariant:
    """Series of S(-l, j)."""
    return TaylorInvariant(math.pi - s.c_l, s.c_j, s.c_ll, -s.c_lj, s.c_jj)


def reverse_symmetry_check(p: ModelParams) -> ReverseReport:
    a = mirror_l(closed_form(p))
    b = closed_form(reverse_map(p))
    return ReverseReport(a, b, a.differences(b))


def kepler_form(n: float, t: float) -> TaylorInvariant:
    """Equal-radius specialisation written in c = (1 - t) / (2 t)."""
    if not (0.2 < t < 1.0) or not n > 0:
        raise OutOfFocusFocusRange(f"Kepler case needs 1/5 < t < 1, got t={t}")
    c = (1 - t) / (2 * t)
    D = 16 * n * math.sqrt(c) * (2 - c) ** 1.5
    return TaylorInvariant(0.5 * math.pi, math.log(D), -(-9 + 10 * c - 2 * c * c) / D, 0.0,
                           -(-3 + 6 * c + 2 * c * c) / D)


# ------------------------------------------------------------ (u, v, kappa)

@dataclass(frozen=True)
class AsymptoticReport:
    chart: ParamChart
    c_ll_ratio: float
    c_jj_ratio: float
    c_lj_ratio: float
    c_j_offset: float
    c_j_offset_limit: float
    c_l_display: float
    display: TaylorInvariant
    display_residuals: np.ndarray


def uv_display(c: ParamChart) -> TaylorInvariant:
    """The series written directly in the chart coordinates (as displayed in the literature)."""
    u, v, k = c.u, c.v, c.kappa
    e2u = math.exp(2 * u)
    if e2u == 1.0:
        cl = 0.5 * math.pi
    else:
        cl = math.atan((2 * math.exp(u) * math.cosh(v) + math.sinh(v) + e2u * math.sinh(v)) / (1 - e2u))
    cj = math.log(16 * k / (math.cosh(v) ** 3 * (math.cosh(u) + math.tanh(v))))
    cll = -(-7 * math.cosh(v) + 3 * math.cosh(3 * v) + math.cosh(u)) * (11 * math.sinh(v) + 3 * math.sinh(3 * v)) / (
        64 * k)
    clj = -(1 + 3 * math.cosh(2 * v)) * math.sinh(u) / (8 * k)
    cjj = -(3 * math.cosh(v) + 17 * math.cosh(3 * v) + math.cosh(u)) * (9 * math.sinh(v) + 17 * math.sinh(3 * v)) / (
        64 * k)
    return TaylorInvariant(cl, cj, cll, clj, cjj)


def asymptotics_uv(c: ParamChart) -> tuple[TaylorInvariant, AsymptoticReport]:
    """Closed form at a chart point plus ratios against the large-|v| laws.

    Each ratio is (coefficient) / (law); a ratio near 1 means the law holds.
    """
    s = closed_form(from_chart(c))
    u, v, k = c.u, c.v, c.kappa
    sv = math.copysign(1.0, v)
    av = abs(v)
    ll = s.c_ll / (-sv * 9 / (256 * k) * math.exp(6 * av))
    jj = s.c_jj / (-sv * 289 / (256 * k) * math.exp(6 * av))
    lj_law = -(3 / (16 * k)) * math.sinh(u) * math.exp(2 * av)
    lj = s.c_lj / lj_law if lj_law != 0 else float("nan")
    if v >= 0:
        off, lim = s.c_j + 3 * v, math.log(64 * k / math.cosh(u / 2) ** 2)
    elif u != 0:
        off, lim = s.c_j - 3 * v, math.log(64 * k / math.sinh(u / 2) ** 2)
    else:
        off, lim = s.c_j - v, math.log(64 * k)
    cl_disp = (-0.5 * math.pi + 2 * math.atan(math.exp(-v) * math.tanh(u / 2))) % math.pi
    disp = uv_display(c)
    return s, AsymptoticReport(c, ll, jj, lj, off, lim, cl_disp, disp, disp.differences(s))
