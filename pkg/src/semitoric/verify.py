"""Self-check suites run by ``semitoric verify``.

Each check returns a :class:`Check`; a suite is a list of checks.  Random
draws come from a seeded generator so reports are reproducible.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import abelian, elliptic, series, taylor
from . import global_invariants as glob
from .params import ModelParams
from .reduced import ReducedLevel, model_for, ordering_ok, solve_roots

DEFAULT = ModelParams(1.0, 2.0, 0.5)


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    value: float
    tolerance: float
    seconds: float = 0.0

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.suite:<9} {self.name:<44} {self.value:.3e} (tol {self.tolerance:.1e})"


def _timed(suite: str, name: str, tol: float, fn: Callable[[], float], upper: bool = True) -> Check:
    t0 = time.perf_counter()
    try:
        v = float(fn())
        ok = (v <= tol) if upper else (v >= tol)
    except Exception as exc:  # a crash is a failure of the check, reported as such
        v, ok = float("nan"), False
        name = f"{name} [{type(exc).__name__}]"
    return Check(suite, name, bool(ok and math.isfinite(v)), v, tol, time.perf_counter() - t0)


def sample_ff(rng, n: int) -> list[ModelParams]:
    """Random parameters well inside the focus-focus interval."""
    out = []
    while len(out) < n:
        R1, R2 = rng.uniform(0.5, 3.0, 2)
        ci = ModelParams(R1, R2, 0.5).interval
        t = rng.uniform(ci.t_minus, ci.t_plus)
        t = ci.t_minus + (ci.t_plus - ci.t_minus) * (0.1 + 0.8 * (t - ci.t_minus) / (ci.t_plus - ci.t_minus))
        out.append(ModelParams(R1, R2, t))
    return out


def sample_levels(rng, p: ModelParams, n: int, radius: float = 0.05, sign: int = 0) -> list[ReducedLevel]:
    """Regular levels with ordered real roots near the focus-focus value."""
    out = []
    while len(out) < n:
        l, h = rng.uniform(-radius, radius, 2)
        if sign:
            l = sign * abs(l)
        lv = ReducedLevel(l, h)
        try:
            if ordering_ok(solve_roots(lv, p), l, p.R):
                out.append(lv)
        except Exception:
            continue
    return out


# ------------------------------------------------------------- suites

def suite_elliptic(rng) -> list[Check]:
    def legendre():
        worst = 0.0
        for m in rng.uniform(1e-6, 1 - 1e-6, 100):
            a, b = elliptic.EllipticModulus.from_m(m), elliptic.EllipticModulus.from_complement(m)
            K, E = elliptic.complete_KE(a)
            Kp, Ep = elliptic.complete_KE(b)
            worst = max(worst, abs(E * Kp + Ep * K - K * Kp - 0.5 * math.pi))
        return worst

    def pi_heuman():
        worst = 0.0
        for _ in range(50):
            m = rng.uniform(0.01, 0.95)
            n = rng.uniform(m, 1) if rng.uniform() < 0.5 else -rng.uniform(0.01, 5)
            mod = elliptic.EllipticModulus.from_m(m)
            a = elliptic.complete_Pi(n, mod)
            worst = max(worst, abs(a - elliptic.complete_Pi_quadrature(n, mod)) / abs(a))
        return worst

    def near_one():
        from scipy.special import ellipkm1
        return max(abs(elliptic.K_near_one(kp2) - ellipkm1(kp2)) / ellipkm1(kp2) for kp2 in (1e-7, 1e-8, 1e-10))

    return [_timed("elliptic", "Legendre relation, 100 moduli", 1e-12, legendre),
            _timed("elliptic", "Pi via Heuman lambda vs quadrature", 1e-9, pi_heuman),
            _timed("elliptic", "K near k=1 expansion vs scipy ellipkm1", 1e-12, near_one)]


def suite_roots(rng) -> list[Check]:
    p = DEFAULT

    def cancel():
        return max(abs(model_for(ReducedLevel(*rng.uniform(-1, 1, 2)), p).leading_residue) for _ in range(1000))

    def order(sign):
        def f():
            lv = sample_levels(rng, p, 1000, sign=sign)
            return float(len(lv) != 1000)
        return f

    def ratio(order):
        def f():
            l0, h0 = 0.6, -0.3
            errs = []
            for eps in (1e-2, 5e-3):
                z = solve_roots(ReducedLevel(eps * l0, eps * h0), p).as_tuple()
                s = series.roots_lh(eps * l0, eps * h0, p.R, p.t, order=order)
                errs.append(abs(z[0] - s[0]))
            return abs(errs[0] / errs[1] - 2 ** (order + 1))
        return f

    return [_timed("roots", "degree-4 term of P cancels", 1e-14, cancel),
            _timed("roots", "root ordering, 1000 levels with l<0", 0.5, order(-1)),
            _timed("roots", "root ordering, 1000 levels with l>0", 0.5, order(1)),
            _timed("roots", "series order 1 ratio 4 (abs dev)", 0.5, ratio(1)),
            _timed("roots", "series order 2 ratio 8 (abs dev)", 1.0, ratio(2))]


def suite_abelian(rng) -> list[Check]:
    p = DEFAULT
    levels = sample_levels(rng, p, 20)

    def dual():
        worst = 0.0
        for lv in levels:
            for a, b in ((abelian.period(lv, p), abelian.period_quadrature(lv, p)),
                         (abelian.rotation_number(lv, p), abelian.rotation_number_quadrature(lv, p)),
                         (abelian.imaginary_period(lv, p), abelian.imaginary_period_quadrature(lv, p)),
                         (abelian.imaginary_rotation(lv, p), abelian.imaginary_rotation(lv, p, oracle=True))):
                worst = max(worst, abs(a - b) / max(1.0, abs(b)))
        return worst

    def derivs():
        worst, e = 0.0, 1e-5
        for lv in levels[:8]:
            I = lambda l, h: abelian.privileged_action((l, h), p)
            T = 2 * math.pi * (I(lv.l, lv.h + e) - I(lv.l, lv.h - e)) / (2 * e)
            W = -(I(lv.l + e, lv.h) - I(lv.l - e, lv.h)) / (2 * e)
            worst = max(worst, abs(T / abelian.period(lv, p) - 1),
                        abs(W - abelian.rotation_number(lv, p)) / max(1.0, abs(W)))
        return worst

    return [_timed("abelian", "Legendre forms vs quadrature", 1e-8, dual),
            _timed("abelian", "2pi dI/dh = T and -dI/dl = W", 1e-5, derivs)]


def suite_series(rng) -> list[Check]:
    p = DEFAULT

    def j_order():
        errs = []
        for eps in (1e-2, 5e-3):
            lv = ReducedLevel(0.6 * eps, 0.4 * eps)
            errs.append(abs(abelian.imaginary_action(lv, p) - series.imaginary_action_series(lv.l, lv.h, p.R, p.t)))
        return abs(errs[0] / errs[1] - 16)

    def inversion():
        return float(np.max(np.abs(series.birkhoff_from_inversion(p.R, p.t) - series.birkhoff_grid(p.R, p.t))))

    return [_timed("series", "J series residual ratio 16 (abs dev)", 2.0, j_order),
            _timed("series", "Birkhoff form equals inverted J series", 1e-12, inversion)]


def suite_taylor(rng) -> list[Check]:
    p = DEFAULT

    def recover():
        ref = taylor.closed_form(p)
        fit = taylor.recover_coefficients(p, seed=int(rng.integers(1 << 30)))
        return float(np.max(np.abs(fit.differences(ref) / ref.as_array())))

    def reverse():
        return max(taylor.reverse_symmetry_check(q).max_residual for q in sample_ff(rng, 100))

    def kepler():
        return max(float(np.max(np.abs(taylor.kepler_form(1.0, t).differences(taylor.closed_form(ModelParams(1, 1, t))))))
                   for t in (0.3, 1 / 3, 0.5))

    return [_timed("taylor", "regression vs closed form (rel)", 1e-3, recover),
            _timed("taylor", "reverse symmetry, 100 draws", 1e-10, reverse),
            _timed("taylor", "Kepler c-form vs closed form", 1e-10, kepler)]


def suite_global(rng) -> list[Check]:
    def height():
        worst = 0.0
        for q in sample_ff(rng, 25):
            worst = max(worst, abs(glob.height_closed_form(q).h - glob.height_numeric(q).h))
        return worst

    def twist():
        k, _ = glob.twisting_index(DEFAULT, 20_000)
        return abs(k)

    return [_timed("global", "height closed form vs quadrature", 1e-8, height),
            _timed("global", "twisting index of (1,2,1/2) is 0", 0.0, twist)]


SUITES = {"elliptic": suite_elliptic, "roots": suite_roots, "abelian": suite_abelian,
          "series": suite_series, "taylor": suite_taylor, "global": suite_global}


def run(suite: str = "all", seed: int = 0) -> list[Check]:
    names = list(SUITES) if suite == "all" else [suite]
    out = []
    for name in names:
        out.extend(SUITES[name](np.random.default_rng([seed, list(SUITES).index(name)])))
    return out
