"""Local expansions about the focus-focus value and their coefficient tables.

Coefficients live in ``data/coefficients.txt`` as ``family i j [k] : expr`` where
``expr`` is polynomial arithmetic (``+ - * ^``, integers, parentheses) in the
symbols ``R``, ``t``, ``rA``, ``sqrtR`` and, for the ``b`` family, ``p``.  The
expressions are parsed with :mod:`ast` against a whitelist and compiled once.

All functions work in scaled units (see :mod:`semitoric.reduced`).
"""
from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from itertools import product

import numpy as np

from .errors import NonInvertibleLinearPart, OriginSingular, OutOfFocusFocusRange
from .params import rA_squared

SYMBOLS = ("R", "t", "rA", "sqrtR", "p")
_ALLOWED = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Add, ast.Sub, ast.Mult, ast.Pow,
            ast.USub, ast.UAdd, ast.Constant, ast.Name, ast.Load)


class ExpressionError(ValueError):
    pass


def compile_expr(text: str):
    """Parse one table expression; ``^`` is exponentiation."""
    tree = ast.parse(text.replace("^", "**"), mode="eval")
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED):
            raise ExpressionError(f"disallowed syntax {type(node).__name__} in {text!r}")
        if isinstance(node, ast.Name) and node.id not in SYMBOLS:
            raise ExpressionError(f"unknown symbol {node.id!r}")
        if isinstance(node, ast.Constant) and not isinstance(node.value, int):
            raise ExpressionError(f"non-integer literal {node.value!r}")
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and node.right.value >= 0):
                raise ExpressionError("exponents must be non-negative integer literals")
    return compile(tree, "<coefficient>", "eval")


def parse_table(text: str) -> dict[tuple, tuple[str, object]]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, expr = line.partition(":")
        if not sep:
            raise ExpressionError(f"line {lineno}: missing ':'")
        parts = head.split()
        key = (parts[0],) + tuple(int(x) for x in parts[1:])
        if key in out:
            raise ExpressionError(f"line {lineno}: duplicate key {key}")
        out[key] = (expr.strip(), compile_expr(expr.strip()))
    return out


@lru_cache(maxsize=1)
def tables() -> dict[tuple, tuple[str, object]]:
    text = resources.files("semitoric").joinpath("data/coefficients.txt").read_text()
    return parse_table(text)


@dataclass(frozen=True)
class CoefficientTables:
    """Numerical values of every family at fixed (R, t)."""

    R: float
    t: float

    @property
    def rA(self) -> float:
        r2 = rA_squared(self.R, self.t)
        if r2 <= 0:
            raise OutOfFocusFocusRange(f"rA^2 = {r2} <= 0 at R={self.R}, t={self.t}")
        return math.sqrt(r2)

    def env(self, p=None) -> dict:
        return {"R": self.R, "t": self.t, "rA": self.rA, "sqrtR": math.sqrt(self.R), "p": p,
                "__builtins__": {}}

    def __call__(self, family: str, *idx: int, p=None) -> float:
        key = (family,) + idx
        try:
            code = tables()[key][1]
        except KeyError:
            raise KeyError(f"no coefficient {key}") from None
        return eval(code, self.env(p))  # noqa: S307 - whitelisted AST only

    def family(self, name: str) -> dict[tuple, float]:
        env = self.env()
        return {k[1:]: eval(v[1], env) for k, v in tables().items() if k[0] == name and name != "b"}


def _ff(R, t):
    r2 = rA_squared(R, t)
    if r2 <= 0:
        raise OutOfFocusFocusRange(f"not focus-focus at R={R}, t={t}")
    return CoefficientTables(R, t), math.sqrt(r2)


# ------------------------------------------------------------------ (l, h)

def imaginary_action_series(l, h, R, t, order: int = 3):
    """Imaginary action J(l, h) truncated after the given total degree."""
    c, rA = _ff(R, t)
    out = (-(R + t - 2 * R * t) * l + 2 * R * h) / rA
    if order >= 2:
        out = out + (c("c", 2, 0) * l * l + c("c", 1, 1) * l * h + c("c", 0, 2) * h * h) / rA ** 5
    if order >= 3:
        out = out + (c("c", 3, 0) * l ** 3 + c("c", 2, 1) * l * l * h + c("c", 1, 2) * l * h * h
                     + c("c", 0, 3) * h ** 3) / rA ** 9
    return out


def imaginary_action_grid(R, t, order: int = 3) -> np.ndarray:
    """Dense coefficient grid g[i, j] of l^i h^j for J."""
    c, rA = _ff(R, t)
    g = np.zeros((4, 4))
    g[1, 0] = -(R + t - 2 * R * t) / rA
    g[0, 1] = 2 * R / rA
    if order >= 2:
        for (i, j) in ((2, 0), (1, 1), (0, 2)):
            g[i, j] = c("c", i, j) / rA ** 5
    if order >= 3:
        for (i, j) in ((3, 0), (2, 1), (1, 2), (0, 3)):
            g[i, j] = c("c", i, j) / rA ** 9
    return g


def birkhoff_grid(R, t) -> np.ndarray:
    c, rA = _ff(R, t)
    g = np.zeros((4, 4))
    g[1, 0] = (R + t - 2 * R * t) / (2 * R)
    g[0, 1] = rA / (2 * R)
    f2 = t / (8 * R * rA ** 2)
    for (i, j) in ((2, 0), (1, 1), (0, 2)):
        g[i, j] = f2 * c("a", i, j)
    f3 = t * t * (t - 1) / (8 * rA ** 6)
    for (i, j) in ((3, 0), (2, 1), (1, 2), (0, 3)):
        g[i, j] = f3 * c("a", i, j)
    return g


def eval_grid(g: np.ndarray, x, y):
    out = 0.0
    for i, j in zip(*np.nonzero(g)):
        out = out + g[i, j] * x ** i * y ** j
    return out


def birkhoff(l, j, R, t):
    """Energy as a function of (l, j) through cubic order."""
    return eval_grid(birkhoff_grid(R, t), l, j)


def rC(l, h, R, t):
    """Square root of the discriminant of the two small roots.

    The cross term enters with a minus sign (checked against companion roots).
    """
    _ff(R, t)
    return np.sqrt(l * l * (1 - t) * t - l * h * (R + t - 2 * R * t) + h * h * R)


def roots_lh(l, h, R, t, order: int = 3):
    """Series for zeta1, zeta2, zeta3 in (l, h); order 1 keeps linear terms only."""
    c, rA = _ff(R, t)
    rc = rC(l, h, R, t)

    def small(fam):
        z = (c(fam, 1, 0, 0) * l + c(fam, 0, 1, 0) * h + c(fam, 0, 0, 1) * rc) / rA ** 2
        if order >= 2:
            if np.all(rc == 0):
                # cubic corrections carry 1/rC; they vanish at the origin itself
                return z
            z = z + R / (2 * rA ** 6 * rc) * (
                c(fam, 3, 0, 0) * l ** 3 + c(fam, 2, 1, 0) * l * l * h + c(fam, 2, 0, 1) * l * l * rc
                + c(fam, 1, 2, 0) * l * h * h + c(fam, 1, 1, 1) * l * h * rc + c(fam, 0, 3, 0) * h ** 3
                + c(fam, 0, 2, 1) * h * h * rc)
        return z

    z3 = rA ** 2 / (2 * R * t * (1 - t)) + (R - t) / ((1 - t) * rA ** 2) * (c("f", 1, 0) * l + c("f", 0, 1) * h)
    if order >= 2:
        z3 = z3 + 2 * R * t / rA ** 6 * (c("f", 2, 0) * l * l + c("f", 1, 1) * l * h + c("f", 0, 2) * h * h)
    if order >= 3:
        z3 = z3 + 4 * R * R * t * t / rA ** 10 * (c("f", 3, 0) * l ** 3 + c("f", 2, 1) * l * l * h
                                                  + c("f", 1, 2) * l * h * h + c("f", 0, 3) * h ** 3)
    return small("d"), small("e"), z3


def RI_over_sqrtP_series(p2, l, h, R, t, order: int = 2):
    """Expansion of 2 R_I / sqrt(P) in (l, h) at fixed p2."""
    c, rA = _ff(R, t)
    rB = math.sqrt(-R * R * (1 - 2 * t) ** 2 + 2 * R * (1 + p2 * (t - 1)) * t - t * t)
    out = c("b", 0, 0, p=p2) / ((p2 - 2) * (p2 - 2 * R) * rB)
    if order >= 1:
        out += (c("b", 1, 0, p=p2) * l + c("b", 0, 1, p=p2) * h) / (p2 * (p2 - 2) ** 2 * rB ** 3)
    if order >= 2:
        # cube on (p2 - 2): the quadratic numerators carry no compensating factor
        out += (c("b", 2, 0, p=p2) * l * l + c("b", 1, 1, p=p2) * l * h + c("b", 0, 2, p=p2) * h * h) / (
            p2 * p2 * (p2 - 2) ** 3 * (p2 - 2 * R) * rB ** 5)
    return out


def imaginary_period_series(l, h, R, t):
    """2 pi dJ/dh from the J expansion."""
    c, rA = _ff(R, t)
    d = 2 * R / rA + (c("c", 1, 1) * l + 2 * c("c", 0, 2) * h) / rA ** 5 + (
        c("c", 2, 1) * l * l + 2 * c("c", 1, 2) * l * h + 3 * c("c", 0, 3) * h * h) / rA ** 9
    return 2 * math.pi * d


def imaginary_rotation_series(l, h, R, t):
    """-dJ/dl from the J expansion."""
    c, rA = _ff(R, t)
    d = -(R + t - 2 * R * t) / rA + (2 * c("c", 2, 0) * l + c("c", 1, 1) * h) / rA ** 5 + (
        3 * c("c", 3, 0) * l * l + 2 * c("c", 2, 1) * l * h + c("c", 1, 2) * h * h) / rA ** 9
    return -d


# ------------------------------------------------------------------ (l, j)

def _w(l, j):
    r = math.hypot(l, j)
    if r == 0:
        raise OriginSingular("|w| = 0")
    return r


def log_constant(R, t):
    _, rA = _ff(R, t)
    return math.log(4 * rA ** 3 / (R ** 1.5 * (1 - t) * t * t))


def rC_series(l, j, R, t):
    c, rA = _ff(R, t)
    w = _w(l, j)
    sR = math.sqrt(R)
    out = rA / (2 * sR) * w
    out += t * j / (8 * sR * rA ** 2 * w) * (c("u", 2, 0) * l * l + c("u", 1, 1) * l * j + c("u", 0, 2) * j * j)
    six = sum(c("u", a, 6 - a) * l ** a * j ** (6 - a) for a in range(0, 7) if ("u", a, 6 - a) in tables())
    out += t * t / (64 * sR * rA ** 5 * w ** 3) * six
    return out


def roots_lj(l, j, R, t):
    c, rA = _ff(R, t)
    w = _w(l, j)
    sR = math.sqrt(R)

    def small(fam):
        z = (c(fam, 1, 0, 0) * l + c(fam, 0, 1, 0) * j + c(fam, 0, 0, 1) * w) / (2 * rA)
        z += 1 / (8 * rA ** 4 * sR * w) * (
            c(fam, 3, 0, 0) * l ** 3 + c(fam, 2, 1, 0) * l * l * j + c(fam, 1, 2, 0) * l * j * j
            + c(fam, 0, 3, 0) * j ** 3
            + (c(fam, 2, 0, 1) * l * l + c(fam, 1, 1, 1) * l * j + c(fam, 0, 2, 1) * j * j) * w)
        return z

    z3 = rA ** 2 / (2 * R * t * (1 - t)) + (c("gamma", 1, 0) * l + c("gamma", 0, 1) * j) / (2 * R * rA * (t - 1))
    z3 += (c("gamma", 2, 0) * l * l + c("gamma", 1, 1) * l * j + c("gamma", 0, 2) * j * j) / (8 * R * rA ** 4 * (t - 1))
    z3 += t * t / (8 * rA ** 8) * (c("gamma", 3, 0) * l ** 3 + c("gamma", 2, 1) * l * l * j
                                   + c("gamma", 1, 2) * l * j * j + c("gamma", 0, 3) * j ** 3)
    return small("alpha"), small("beta"), z3


def modulus_series(l, j, R, t):
    """k^2 of the real cycle as a function of (l, j)."""
    c, rA = _ff(R, t)
    w = _w(l, j)
    sR = math.sqrt(R)
    lead = 4 * R ** 1.5 * (t - 1) * t * t * w / rA ** 3
    corr = sR * (1 - t) * t * t / (2 * rA ** 9 * w) * (
        c("delta", 3, 0, 0) * l ** 3 + c("delta", 2, 1, 0) * l * l * j + c("delta", 1, 2, 0) * l * j * j
        + c("delta", 0, 3, 0) * j ** 3
        + (c("delta", 2, 0, 1) * l * l + c("delta", 1, 1, 1) * l * j + c("delta", 0, 2, 1) * j * j) * w)
    return 1 + lead + corr


def period_series(l, j, R, t):
    c, rA = _ff(R, t)
    w = _w(l, j)
    reg = (c("h", 1, 0) * l + c("h", 0, 1) * j) / (4 * rA ** 5)
    reg += (c("h", 2, 0) * l * l + c("h", 1, 1) * l * j + c("h", 0, 2) * j * j) / (32 * R * rA ** 8)
    logc = -2 * R / rA + R * t / rA ** 4 * (c("hL", 1, 0) * l + c("hL", 0, 1) * j)
    logc += R * t * t / (2 * rA ** 9) * (c("hL", 2, 0) * l * l + c("hL", 1, 1) * l * j + c("hL", 0, 2) * j * j)
    return reg + (math.log(w) - log_constant(R, t)) * logc


def arg_w(l, j) -> float:
    """Argument of w = l + i j with values in [-3 pi / 2, pi / 2)."""
    a = math.atan2(j, l)
    return a - 2 * math.pi if a >= 0.5 * math.pi else a


def _atan_lin(R, t):
    _, rA = _ff(R, t)
    return math.atan((t - R * (1 + t) - R * R * (1 - 2 * t)) / ((1 - R) * rA)) if R != 1 else math.copysign(
        0.5 * math.pi, t - R * (1 + t) - R * R * (1 - 2 * t))


def rotation_series_2pi(l, j, R, t):
    """2 pi W on the branch fixed by the arg determination above."""
    c, rA = _ff(R, t)
    w = _w(l, j)
    out = math.pi - _atan_lin(R, t) + arg_w(l, j)
    out += (c("v", 1, 0) * l + c("v", 0, 1) * j) / (4 * rA ** 5)
    logc = -(R + t - 2 * R * t) / rA + R * (t - 1) * t / rA ** 4 * (c("vL", 1, 0) * l + c("vL", 0, 1) * j)
    return out + (math.log(w) - log_constant(R, t)) * logc


def rotation_series(l, j, R, t):
    return rotation_series_2pi(l, j, R, t) / (2 * math.pi)


def dsdl_series(l, j, R, t):
    c, rA = _ff(R, t)
    return -math.pi + _atan_lin(R, t) + (c("mu", 1, 0) * l + c("mu", 0, 1) * j) / (8 * R * rA ** 3 * (t + R * (2 * t - 1)))


def dsdj_series(l, j, R, t):
    c, rA = _ff(R, t)
    return (log_constant(R, t) + (c("kappa", 1, 0) * l + c("kappa", 0, 1) * j) / (8 * R * rA ** 3)
            + (c("kappa", 2, 0) * l * l + c("kappa", 1, 1) * l * j + c("kappa", 0, 2) * j * j) / (64 * R * R * rA ** 6))


# ------------------------------------------------------------- inversion

def invert_series(g: np.ndarray, order: int | None = None) -> np.ndarray:
    """Invert y = f(x, z) = sum g[i, k] z^i x^k in x, with z a passive parameter.

    ``g`` is a dense grid indexed (passive, active) with no constant term.  The
    result ``G`` satisfies f(G(y, z), z) = y through total degree ``order``,
    and is indexed the same way with y as the active variable.
    """
    g = np.asarray(g, float)
    n = g.shape[0] - 1 if order is None else order
    a1 = g[0, 1]
    if a1 == 0 or abs(a1) < 1e-300:
        raise NonInvertibleLinearPart("active linear coefficient vanishes")
    G = np.zeros((n + 1, n + 1))
    G[0, 1] = 1.0 / a1
    # fixed point iteration x <- (y - (f(x) - a1 x)) / a1 on truncated grids
    for _ in range(n + 1):
        fx = _compose(g, G, n)
        fx[0, 1] -= 1.0  # subtract y
        G = G - fx / a1
        G = _truncate(G, n)
    return G


def _truncate(G, n):
    out = np.zeros((n + 1, n + 1))
    for i, k in product(range(n + 1), repeat=2):
        if i + k <= n and i < G.shape[0] and k < G.shape[1]:
            out[i, k] = G[i, k]
    return out


def _mul(A, B, n):
    out = np.zeros((n + 1, n + 1))
    for (i, k) in zip(*np.nonzero(A)):
        for (a, b) in zip(*np.nonzero(B)):
            if i + k + a + b <= n:
                out[i + a, k + b] += A[i, k] * B[a, b]
    return out


def _compose(g, X, n):
    """g(X(y, z), z) as a grid in (z, y)."""
    out = np.zeros((n + 1, n + 1))
    powers = {0: _truncate(np.array([[1.0]]), n)}
    for k in range(1, g.shape[1]):
        powers[k] = _mul(powers[k - 1], X, n)
    for (i, k) in zip(*np.nonzero(g)):
        if i > n:
            continue
        zi = np.zeros((n + 1, n + 1))
        zi[i, 0] = 1.0
        out += g[i, k] * _mul(zi, powers[k], n)
    return out


def birkhoff_from_inversion(R, t) -> np.ndarray:
    """Invert the J series in h with l passive; returns grid in (l, j)."""
    return invert_series(imaginary_action_grid(R, t))
