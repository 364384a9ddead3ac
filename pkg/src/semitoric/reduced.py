"""The reduced system on a level of the scaled angular momentum.

Everything here is in scaled units: ``l = L / R1``, ``p2 = p~2 / R1`` while the
energy ``h`` is not rescaled.  Only the ratio ``R = R2 / R1`` and ``t`` enter.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ComplexRootsError, OnSeparatrix, OutsidePhysicalRegion
from .params import ModelParams, require_focus_focus


@dataclass(frozen=True)
class ReducedLevel:
    l: float
    h: float

    def physical(self, R: float) -> bool:
        return -2.0 <= self.l <= 2.0 * R


class OrbitType(enum.Enum):
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    TYPE_III = "TypeIII"


@dataclass(frozen=True)
class ReducedModel:
    """Coefficient arrays, highest degree first (``numpy.polyval`` order)."""

    level: ReducedLevel
    R: float
    t: float
    A: np.ndarray
    B: np.ndarray
    P: np.ndarray
    leading_residue: float

    def eval_A(self, p):
        return np.polyval(self.A, p)

    def eval_B(self, p):
        return np.polyval(self.B, p)

    def eval_P(self, p):
        return np.polyval(self.P, p)

    @property
    def a3(self) -> float:
        return float(self.P[0])

    @property
    def poles(self) -> tuple[float, float, float, float]:
        l = self.level.l
        return 0.0, l, 2.0 * self.R, l + 2.0

    @property
    def p_range(self) -> tuple[float, float]:
        l = self.level.l
        return max(0.0, l), min(l + 2.0, 2.0 * self.R)


@dataclass(frozen=True)
class CubicRoots:
    zeta1: float
    zeta2: float
    zeta3: float
    complex_pair: bool = False

    def as_tuple(self):
        return self.zeta1, self.zeta2, self.zeta3


def A_coeffs(l: float, R: float, t: float) -> np.ndarray:
    return np.array([-t / R, (t - R + 2 * R * t + l * t) / R, l * (1 - 2 * t)])


def B_coeffs(l: float, R: float, t: float) -> np.ndarray:
    b = np.poly([0.0, l, 2 * R, l + 2.0])
    return (t * t / (R * R)) * b


def reduced_model(level: ReducedLevel, R: float, t: float) -> ReducedModel:
    a = A_coeffs(level.l, R, t)
    b = B_coeffs(level.l, R, t)
    hma = np.polysub([level.h], a)
    full = np.polysub(b, np.polymul(hma, hma))
    scale = max(1.0, float(np.max(np.abs(full))))
    residue = float(full[0]) / scale
    return ReducedModel(level, R, t, a, b, np.array(full[1:], dtype=float), residue)


def model_for(level: ReducedLevel, p: ModelParams) -> ReducedModel:
    return reduced_model(level, p.R, p.t)


def edge_values(l: float, p: ModelParams | None = None, *, R: float | None = None, t: float | None = None):
    """A at the four edges p2 in {0, l, 2R, l+2} in closed form."""
    if p is not None:
        R, t = p.R, p.t
    return ((1 - 2 * t) * l, t * l / R, l - 2 * R + 2 * t, -2 + 4 * t - (t / R) * (2 + l))


def reduced_hamiltonian(l: float, q2: float, p2: float, p: ModelParams) -> float:
    R, t = p.R, p.t
    a = float(np.polyval(A_coeffs(l, R, t), p2))
    b = float(np.polyval(B_coeffs(l, R, t), p2))
    if b < -1e-12:
        raise OutsidePhysicalRegion(f"B({p2}) = {b} < 0 at l = {l}")
    return a + math.sqrt(max(b, 0.0)) * math.cos(q2)


def _polish(coef: np.ndarray, x: float) -> float:
    d = np.polyder(coef)
    f, df = np.polyval(coef, x), np.polyval(d, x)
    if df != 0.0:
        step = f / df
        if abs(step) < 1e-6 * (1.0 + abs(x)):
            return x - step
    return x


def solve_cubic(coef: np.ndarray) -> CubicRoots:
    """Companion-matrix roots of a cubic (highest first), Newton polished, sorted."""
    ev = np.roots(coef)
    scale = 1.0 + float(np.sum(np.abs(ev)))
    cplx = bool(np.any(np.abs(ev.imag) > 1e-10 * scale))
    r = np.sort(ev.real)
    r = np.sort([_polish(coef, float(x)) for x in r]) if not cplx else r
    return CubicRoots(float(r[0]), float(r[1]), float(r[2]), cplx)


def solve_roots(level: ReducedLevel, p: ModelParams, *, strict: bool = False) -> CubicRoots:
    """Ordered roots of P at a level.

    With ``strict`` a complex pair raises :class:`ComplexRootsError`; otherwise
    the returned object is flagged via ``complex_pair``.
    """
    model = model_for(level, p)
    roots = solve_cubic(model.P)
    if roots.complex_pair and strict:
        raise ComplexRootsError(f"P has a complex pair at {level}")
    return roots


def ordering_ok(roots: CubicRoots, l: float, R: float) -> bool:
    z1, z2, z3 = roots.as_tuple()
    return (not roots.complex_pair and z1 < min(0.0, l) and max(0.0, l) < z2 <= z3 < min(l + 2.0, 2 * R))


def orbit_type(level: ReducedLevel, p: ModelParams, tol: float = 1e-12) -> OrbitType:
    a0, al, a2r, al2 = edge_values(level.l, p)
    upper = a0 if level.l <= 0 else al
    lower = al2 if level.l + 2.0 <= 2 * p.R else a2r
    if abs(level.h - upper) < tol or abs(level.h - lower) < tol:
        raise OnSeparatrix(f"{level} lies on a separatrix")
    if level.h > upper:
        return OrbitType.TYPE_I
    if level.h < lower:
        return OrbitType.TYPE_III
    return OrbitType.TYPE_II


def orbit_sign(level: ReducedLevel, p: ModelParams) -> float:
    """(h - A(zeta2)) / sqrt(B(zeta2)); +1 on type I orbits."""
    model = model_for(level, p)
    z2 = solve_roots(level, p, strict=True).zeta2
    return float((level.h - model.eval_A(z2)) / math.sqrt(model.eval_B(z2)))


def roots_series(level: ReducedLevel, p: ModelParams, order: int = 3) -> CubicRoots:
    """Truncated expansions of the three roots about the focus-focus value."""
    from . import series

    require_focus_focus(p)
    z = series.roots_lh(level.l, level.h, p.R, p.t, order=order)
    return CubicRoots(*z)
