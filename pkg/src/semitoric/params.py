"""Model parameters (R1, R2, t), the critical coupling interval and the (u, v, kappa) chart."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, OutOfFocusFocusRange

T_SLACK = 1e-12
DEGENERATE_TOL = 1e-12


class FixedPointClass(enum.Enum):
    FOCUS_FOCUS = "FocusFocus"
    ELLIPTIC_ELLIPTIC = "EllipticElliptic"
    DEGENERATE = "Degenerate"

    @property
    def n_ff(self) -> int:
        return 1 if self is FixedPointClass.FOCUS_FOCUS else 0


@dataclass(frozen=True)
class ModelParams:
    R1: float
    R2: float
    t: float

    def __post_init__(self):
        if not (self.R1 > 0 and self.R2 > 0) or not all(map(math.isfinite, (self.R1, self.R2, self.t))):
            raise DomainError(f"radii must be positive and finite, got R1={self.R1}, R2={self.R2}")
        if not (-T_SLACK <= self.t <= 1 + T_SLACK):
            raise DomainError(f"coupling t={self.t} outside [0, 1]")
        # absorb round-off from the chart inverse
        object.__setattr__(self, "t", min(max(float(self.t), 0.0), 1.0))
        object.__setattr__(self, "R1", float(self.R1))
        object.__setattr__(self, "R2", float(self.R2))

    @property
    def R(self) -> float:
        return self.R2 / self.R1

    @property
    def rA_squared(self) -> float:
        return rA_squared(self.R, self.t)

    @property
    def rA(self) -> float:
        return discriminant_root(self).rA

    @property
    def interval(self) -> "CriticalInterval":
        return critical_interval(self)

    @property
    def chart(self) -> "ParamChart":
        return to_chart(self)


@dataclass(frozen=True)
class CriticalInterval:
    t_minus: float
    t_plus: float

    def contains(self, t: float) -> bool:
        return self.t_minus < t < self.t_plus


@dataclass(frozen=True)
class DiscriminantRoot:
    rA_squared: float
    rA: float


@dataclass(frozen=True)
class ParamChart:
    u: float
    v: float
    kappa: float


def rA_squared(R: float, t: float) -> float:
    return -R * R * (1 - 2 * t) ** 2 + 2 * R * t - t * t


def critical_interval(p: ModelParams) -> CriticalInterval:
    s = 2 * math.sqrt(p.R1 * p.R2)
    tm = p.R2 / (2 * p.R2 + p.R1 + s)
    denom = 2 * p.R2 + p.R1 - s
    tp = p.R2 / denom
    if p.R1 == p.R2:
        tp = 1.0
    return CriticalInterval(tm, tp)


def rA_squared_factored(p: ModelParams) -> float:
    """Second algebraic form (1 + 4R^2)(t - t^-)(t^+ - t), scaled units."""
    ci = critical_interval(p)
    R = p.R
    return (1 + 4 * R * R) * (p.t - ci.t_minus) * (ci.t_plus - p.t)


def discriminant_root(p: ModelParams) -> DiscriminantRoot:
    ci = critical_interval(p)
    if p.t < ci.t_minus - DEGENERATE_TOL or p.t > ci.t_plus + DEGENERATE_TOL:
        raise OutOfFocusFocusRange(f"t={p.t} outside [{ci.t_minus}, {ci.t_plus}]")
    r2 = rA_squared(p.R, p.t)
    return DiscriminantRoot(r2, math.sqrt(max(r2, 0.0)))


def classify_fixed_point(p: ModelParams) -> FixedPointClass:
    ci = critical_interval(p)
    if abs(p.t - ci.t_minus) < DEGENERATE_TOL or abs(p.t - ci.t_plus) < DEGENERATE_TOL:
        return FixedPointClass.DEGENERATE
    if ci.t_minus < p.t < ci.t_plus:
        return FixedPointClass.FOCUS_FOCUS
    return FixedPointClass.ELLIPTIC_ELLIPTIC


def require_focus_focus(p: ModelParams) -> None:
    kind = classify_fixed_point(p)
    if kind is not FixedPointClass.FOCUS_FOCUS:
        raise OutOfFocusFocusRange(f"{p} is {kind.value}, not focus-focus")


def to_chart(p: ModelParams) -> ParamChart:
    R, t = p.R, p.t
    if t <= 0:
        raise OutOfFocusFocusRange("chart undefined at t = 0")
    arg = (R - t - 2 * R * t) / (2 * math.sqrt(R) * t)
    if abs(arg) >= 1:
        raise OutOfFocusFocusRange(f"artanh argument {arg} has modulus >= 1")
    return ParamChart(u=-0.5 * math.log(R), v=math.atanh(arg), kappa=math.sqrt(p.R1 * p.R2))


def from_chart(c: ParamChart) -> ModelParams:
    if not c.kappa > 0:
        raise DomainError("kappa must be positive")
    R = math.exp(-2 * c.u)
    t = R / (1 + 2 * R + 2 * math.sqrt(R) * math.tanh(c.v))
    return ModelParams(c.kappa * math.exp(c.u), c.kappa * math.exp(-c.u), t)


def reverse_map(p: ModelParams) -> ModelParams:
    t2 = p.R1 * p.t / (p.R2 + p.R1 * p.t - p.R2 * p.t)
    return ModelParams(p.R2, p.R1, t2)
