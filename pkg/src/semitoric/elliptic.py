"""Complete elliptic integrals, Heuman's lambda and the k -> 1 expansions.

Moduli are passed as :class:`EllipticModulus`, which keeps ``1 - k^2`` separately
so that nearly degenerate curves do not lose digits.  Internally everything is
expressed through the parameter ``m = k^2``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import _kernels
from .errors import ModulusOutOfRange, RegimeViolation

# below this complementary parameter the log expansions take over
NEAR_ONE_SWITCH = 1e-6


@dataclass(frozen=True)
class EllipticModulus:
    k: float
    k_prime_sq: float

    def __post_init__(self):
        if not (0.0 <= self.k) or not (self.k_prime_sq >= 0.0):
            raise ModulusOutOfRange(f"invalid modulus k={self.k}, k'^2={self.k_prime_sq}")

    @classmethod
    def from_k(cls, k: float) -> "EllipticModulus":
        return cls(float(k), 1.0 - float(k) * float(k))

    @classmethod
    def from_m(cls, m: float) -> "EllipticModulus":
        return cls(math.sqrt(m), 1.0 - m)

    @classmethod
    def from_complement(cls, kp2: float) -> "EllipticModulus":
        return cls(math.sqrt(1.0 - kp2), float(kp2))

    @property
    def m(self) -> float:
        return 1.0 - self.k_prime_sq if self.k_prime_sq > 0.5 else self.k * self.k

    @property
    def complementary(self) -> "EllipticModulus":
        return EllipticModulus(math.sqrt(self.k_prime_sq), self.m)


class CircularRegime(enum.Enum):
    POSITIVE = "PositiveCircular"
    NEGATIVE = "NegativeCircular"


@dataclass(frozen=True)
class Characteristic:
    n: float
    regime: CircularRegime

    @classmethod
    def classify(cls, n: float, mod: EllipticModulus) -> "Characteristic":
        if n < 0.0:
            return cls(n, CircularRegime.NEGATIVE)
        if mod.m < n < 1.0:
            return cls(n, CircularRegime.POSITIVE)
        raise RegimeViolation(f"characteristic n={n} is not circular for k^2={mod.m}")


def _mod(m) -> EllipticModulus:
    if isinstance(m, EllipticModulus):
        return m
    return EllipticModulus.from_k(m)


def complete_K(mod: EllipticModulus | float) -> float:
    mod = _mod(mod)
    if mod.k_prime_sq <= 0.0:
        raise ModulusOutOfRange("K diverges at k = 1")
    if mod.k_prime_sq < NEAR_ONE_SWITCH:
        return K_near_one(mod.k_prime_sq)
    # K(m) = RF(0, 1-m, 1); the AGM is the primary path
    return float(_kernels.active.agm_KE(mod.k_prime_sq)[0])


def complete_E(mod: EllipticModulus | float) -> float:
    mod = _mod(mod)
    if mod.k_prime_sq == 0.0:
        return 1.0
    if mod.k_prime_sq < NEAR_ONE_SWITCH:
        return E_near_one(mod.k_prime_sq)
    return float(_kernels.active.agm_KE(mod.k_prime_sq)[1])


def complete_KE(mod: EllipticModulus | float) -> tuple[float, float]:
    mod = _mod(mod)
    if mod.k_prime_sq < NEAR_ONE_SWITCH:
        return complete_K(mod), complete_E(mod)
    K, E = _kernels.active.agm_KE(mod.k_prime_sq)
    return float(K), float(E)


def K_near_one(kp2: float) -> float:
    """Logarithmic expansion of K in powers of k^2 - 1 (three terms each)."""
    d = -kp2
    lg = math.log(kp2 / 16.0)
    return (0.25 * d - 21.0 / 128.0 * d ** 2 + 185.0 / 1536.0 * d ** 3
            + lg * (-0.5 + d / 8.0 - 9.0 / 128.0 * d ** 2 - 25.0 / 512.0 * d ** 3))


def E_near_one(kp2: float) -> float:
    # standard companion expansion of E about k' = 0
    lg = math.log(kp2 / 16.0)
    return (1.0 + kp2 * (-0.25 * lg - 0.25)
            + kp2 ** 2 * (-3.0 / 32.0 * lg - 13.0 / 64.0)
            + kp2 ** 3 * (-15.0 / 256.0 * lg - 9.0 / 64.0))


def incomplete_F(phi: float, mod: EllipticModulus | float) -> float:
    mod = _mod(mod)
    s, c = math.sin(phi), math.cos(phi)
    return s * float(_kernels.active.rf(c * c, 1.0 - mod.m * s * s, 1.0))


def incomplete_E(phi: float, mod: EllipticModulus | float) -> float:
    mod = _mod(mod)
    s, c = math.sin(phi), math.cos(phi)
    x, y = c * c, 1.0 - mod.m * s * s
    rf = float(_kernels.active.rf(x, y, 1.0))
    rd = float(_kernels.active.rd(x, y, 1.0))
    return s * rf - mod.m * s ** 3 * rd / 3.0


def heuman_lambda(theta: float, mod: EllipticModulus | float) -> float:
    """Heuman's lambda function; uses the log expansion when k' is tiny."""
    mod = _mod(mod)
    if mod.k_prime_sq < NEAR_ONE_SWITCH:
        return heuman_lambda_near_one(theta, mod.k_prime_sq)
    return heuman_lambda_exact(theta, mod)


def heuman_lambda_exact(theta: float, mod: EllipticModulus) -> float:
    K, E = complete_KE(mod)
    comp = mod.complementary
    F_ = incomplete_F(theta, comp)
    E_ = incomplete_E(theta, comp)
    return 2.0 / math.pi * (E * F_ + K * E_ - K * F_)


def heuman_lambda_near_one(theta: float, kp2: float) -> float:
    d = -kp2
    sc = math.sin(theta) * math.cos(theta)
    s2 = math.sin(theta) ** 2
    lg = math.log(kp2 / 16.0)
    return (2.0 / math.pi * theta
            + sc * (d / (2 * math.pi) - (13.0 / (32 * math.pi) + 3 * s2 / (16 * math.pi)) * d * d)
            + sc * lg * (d / (2 * math.pi) - (3.0 / (16 * math.pi) + s2 / (8 * math.pi)) * d * d))


def complete_Pi(n: Characteristic | float, mod: EllipticModulus | float) -> float:
    """Complete third kind integral in a circular regime, reduced to Heuman's lambda."""
    mod = _mod(mod)
    ch = n if isinstance(n, Characteristic) else Characteristic.classify(float(n), mod)
    nv = ch.n
    m = mod.m
    if mod.k_prime_sq <= 0.0:
        raise ModulusOutOfRange("k must be < 1")
    K = complete_K(mod)
    if ch.regime is CircularRegime.POSITIVE:
        if not (m < nv < 1.0):
            raise RegimeViolation(f"n={nv} not in ({m}, 1)")
        theta = math.asin(math.sqrt((1.0 - nv) / mod.k_prime_sq))
        delta = math.sqrt(nv / ((1.0 - nv) * (nv - m)))
        return K + 0.5 * math.pi * delta * (1.0 - heuman_lambda(theta, mod))
    if not nv < 0.0:
        raise RegimeViolation(f"n={nv} is not negative")
    theta = math.asin(1.0 / math.sqrt(1.0 - nv))
    delta = math.sqrt(-nv / ((1.0 - nv) * (m - nv)))
    return K / (1.0 - nv) + 0.5 * math.pi * delta * (1.0 - heuman_lambda(theta, mod))


def complete_Pi_carlson(n: float, mod: EllipticModulus | float) -> float:
    """Carlson form K + (n/3) RJ(0, k'^2, 1, 1-n); valid for any n < 1."""
    mod = _mod(mod)
    if n >= 1.0:
        raise RegimeViolation("n must be < 1")
    return complete_K(mod) + n / 3.0 * float(_kernels.active.rj(0.0, mod.k_prime_sq, 1.0, 1.0 - n))


def complete_Pi_quadrature(n: float, mod: EllipticModulus | float) -> float:
    """Direct quadrature of the defining integral after t = sin(phi)."""
    from scipy.integrate import quad

    m = _mod(mod).m
    f = lambda ph: 1.0 / ((1.0 - n * math.sin(ph) ** 2) * math.sqrt(1.0 - m * math.sin(ph) ** 2))
    return quad(f, 0.0, 0.5 * math.pi, epsabs=1e-14, epsrel=1e-12, limit=200)[0]


def complete_K_quadrature(mod: EllipticModulus | float) -> float:
    return complete_Pi_quadrature(0.0, mod)
