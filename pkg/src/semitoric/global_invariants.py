"""Global invariants: height, polygon family with its group action, twisting index, n_FF.

Polygons live in (L, toric height) coordinates in unscaled units with the
focus-focus value at the origin and the cut along the vertical line L = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.spatial import ConvexHull

from . import abelian
from .errors import NoMatchingPolygon, QuadratureFailure
from .params import FixedPointClass, ModelParams, classify_fixed_point, require_focus_focus

LAMBDA = 0.0
Z_EDGE = 1.0 - 1e-9


# ------------------------------------------------------------------ height

@dataclass(frozen=True)
class HeightInvariant:
    h: float

    def __float__(self):
        return self.h


def height_closed_form(p: ModelParams) -> HeightInvariant:
    require_focus_focus(p)
    R1, R, t = p.R1, p.R, p.t
    rA = p.rA
    # atan2 with positive first argument lands in [0, pi]
    val = rA - 2 * R * t * math.atan2(rA, R - t) - 2 * t * math.atan2(rA, R + t - 2 * R * t)
    return HeightInvariant(2 * min(p.R1, p.R2) + R1 / (math.pi * t) * val)


def height_numeric(p: ModelParams) -> HeightInvariant:
    """Reduced area below the critical level at l = 0, by adaptive quadrature."""
    require_focus_focus(p)
    R, t = p.R, p.t
    z3 = p.rA_squared / (2 * R * t * (1 - t))

    def f(s):
        # p2 = z3 (1 - s^2) straightens the square-root endpoint at z3
        x = z3 * (1.0 - s * s)
        arg = (R + (x - 1) * t - 2 * R * t) / (t * math.sqrt((x - 2) * (x - 2 * R)))
        return math.acos(min(1.0, max(-1.0, arg))) * 2 * z3 * s

    val, err = integrate.quad(f, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=200)
    if err > 1e-10:
        raise QuadratureFailure(f"height quadrature error estimate {err:.2e}")
    # past z3 the clipped integrand is constant, 0 or pi; it is pi when the
    # level curve leaves through the far edge instead of closing at z3
    top = min(2.0, 2 * R)
    if top > z3:
        x = 0.5 * (z3 + top)
        arg = (R + (x - 1) * t - 2 * R * t) / (t * math.sqrt((x - 2) * (x - 2 * R)))
        val += (top - z3) * math.acos(min(1.0, max(-1.0, arg)))
    return HeightInvariant(2 * min(p.R1, p.R2) - p.R1 / math.pi * val)


def kepler_height_uv(v: float, kappa: float = 1.0) -> float:
    """Height for R1 = R2 = kappa in terms of the chart coordinate v."""
    return kappa * (2 - 2 / math.pi * (2 * math.atan(math.exp(-v)) - 1 / math.cosh(v)))


# ---------------------------------------------------------------- polygons

@dataclass(frozen=True)
class WeightedPolygon:
    vertices: tuple[tuple[float, float], ...]
    epsilon: int = 1
    k: int = 0
    lam: float = LAMBDA

    def array(self) -> np.ndarray:
        return np.array(self.vertices, dtype=float)

    def edge_slopes(self) -> list[float]:
        v = self.array()
        w = np.roll(v, -1, axis=0)
        dx = w[:, 0] - v[:, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            return list(np.where(dx != 0, (w[:, 1] - v[:, 1]) / dx, np.inf))

    def is_convex(self, tol: float = 1e-12) -> bool:
        v = self.array()
        a = np.roll(v, -1, axis=0) - v
        b = np.roll(v, -2, axis=0) - np.roll(v, -1, axis=0)
        cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
        return bool(np.all(cross >= -tol) or np.all(cross <= tol))

    def boundary_y(self, x: float, top: bool = True) -> float:
        """Height of the upper (or lower) boundary above abscissa x."""
        v = self.array()
        ys = []
        for a, b in zip(v, np.roll(v, -1, axis=0)):
            lo, hi = sorted((a[0], b[0]))
            if lo <= x <= hi and hi > lo:
                ys.append(a[1] + (b[1] - a[1]) * (x - a[0]) / (b[0] - a[0]))
        if not ys:
            raise ValueError(f"x={x} outside polygon")
        return max(ys) if top else min(ys)

    def kink_at_cut(self, top: bool = True, h: float = 1e-6) -> float:
        """Slope to the right of the cut minus slope to the left."""
        x = self.lam
        f = lambda s: self.boundary_y(s, top)
        return (f(x + h) - f(x)) / h - (f(x) - f(x - h)) / h

    def to_json(self) -> dict:
        return {"vertices": [list(map(float, q)) for q in self.vertices], "epsilon": int(self.epsilon),
                "k": int(self.k), "lambda": float(self.lam)}

    @classmethod
    def from_json(cls, d: dict) -> "WeightedPolygon":
        return cls(tuple(tuple(map(float, q)) for q in d["vertices"]), int(d["epsilon"]), int(d["k"]),
                   float(d.get("lambda", 0.0)))


def _clean(vs: np.ndarray, tol: float = 1e-12) -> tuple:
    """Drop repeated and collinear vertices; start at the lowest-left vertex, counterclockwise."""
    out = []
    n = len(vs)
    for i in range(n):
        a, b, c = vs[i - 1], vs[i], vs[(i + 1) % n]
        if np.hypot(*(b - a)) < tol:
            continue
        cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if abs(cross) < tol:
            continue
        out.append(b)
    out = np.array(out)
    area2 = np.sum(out[:, 0] * np.roll(out[:, 1], -1) - np.roll(out[:, 0], -1) * out[:, 1])
    if area2 < 0:
        out = out[::-1]
    # round before ranking so last-digit noise cannot pick a different start
    key = np.round(out, 9)
    start = int(np.lexsort((key[:, 0], key[:, 1]))[0])
    out = np.roll(out, -start, axis=0)
    return tuple((float(x), float(y)) for x, y in out)


def shear(vs: np.ndarray, k: int) -> np.ndarray:
    """T^k: (x, y) -> (x, y + k x)."""
    out = np.array(vs, dtype=float)
    out[:, 1] += k * out[:, 0]
    return out


def half_shear(vs: np.ndarray, u: int, lam: float = LAMBDA) -> np.ndarray:
    """t_u: T^u on the half-plane x >= lam, identity elsewhere.

    Edges crossing the cut get a vertex on it first so the image stays a polygon.
    """
    if u == 0:
        return np.array(vs, dtype=float)
    pts = []
    n = len(vs)
    for i in range(n):
        a, b = np.asarray(vs[i], float), np.asarray(vs[(i + 1) % n], float)
        pts.append(a)
        if (a[0] - lam) * (b[0] - lam) < 0:
            s = (lam - a[0]) / (b[0] - a[0])
            pts.append(a + s * (b - a))
    out = np.array(pts)
    right = out[:, 0] >= lam
    out[right, 1] += u * (out[right, 0] - lam)
    return out


def polygon_representative(p: ModelParams, epsilon: int = 1, k: int = 0) -> WeightedPolygon:
    """Representative with the given cut sign and twisting index.

    The (+1, 0) member is the image of the privileged momentum map; every other
    member is produced from it by the group action.
    """
    require_focus_focus(p)
    R1, R2 = p.R1, p.R2
    hgt = height_closed_form(p).h
    m = min(R1, R2)
    y_bot = 2 * m - 2 * R1 - hgt
    y_top = 2 * m - hgt
    base = WeightedPolygon(_clean(np.array([(-2 * R1, y_bot), (2 * R2 - 2 * R1, y_bot), (2 * R2, y_top),
                                            (0.0, y_top)])), 1, 0)
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    return act((epsilon, k), base)


def act(g: tuple[int, int], poly: WeightedPolygon) -> WeightedPolygon:
    """(eps', T^k') acting on (Delta, eps, k)."""
    eps2, k2 = g
    if eps2 not in (1, -1):
        raise ValueError("group sign must be +1 or -1")
    u = (poly.epsilon - eps2 * poly.epsilon) // 2
    vs = half_shear(shear(poly.array(), k2), u, poly.lam)
    return WeightedPolygon(_clean(vs), eps2 * poly.epsilon, poly.k + k2, poly.lam)


def compose(g1: tuple[int, int], g2: tuple[int, int]) -> tuple[int, int]:
    return g1[0] * g2[0], g1[1] + g2[1]


def polygon_family(p: ModelParams, k_range=range(-2, 3)) -> list[WeightedPolygon]:
    return [polygon_representative(p, e, k) for e in (1, -1) for k in k_range]


# ---------------------------------------------------------- privileged map

@dataclass(frozen=True)
class MomentumSample:
    theta1: float
    z1: float
    theta2: float
    z2: float
    L: float
    H: float
    I_m: float


@dataclass
class MomentumCloud:
    L: np.ndarray
    H: np.ndarray
    nu2: np.ndarray
    skipped: int
    spacing: float
    grid: tuple = field(default=())

    def samples(self) -> list[MomentumSample]:
        return [MomentumSample(0.0, 0.0, 0.0, 0.0, a, b, c) for a, b, c in zip(self.L, self.H, self.nu2)]


def momentum_map(z1, z2, dtheta, p: ModelParams):
    """(L, H) on S^2 x S^2 in cylindrical coordinates; dtheta = theta1 - theta2."""
    t = p.t
    L = p.R1 * (z1 - 1) + p.R2 * (z2 + 1)
    s = np.sqrt(np.clip((1 - z1 * z1) * (1 - z2 * z2), 0.0, None))
    H = (1 - t) * z1 + t * (s * np.cos(dtheta) + z1 * z2) + 2 * t - 1
    return L, H


def grid_for(n_points: int):
    n = max(2, int(round(n_points ** (1 / 3))))
    z = np.linspace(-Z_EDGE, Z_EDGE, n)
    th = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
    return z, z.copy(), th


def privileged_map_sample(p: ModelParams, n_points: int = 100_000, grid=None) -> MomentumCloud:
    """Image of the phase-space grid under nu = (L, I o F - I(m)).

    Only the angle difference enters F, so the grid is over (z1, z2, theta1 - theta2).
    """
    require_focus_focus(p)
    z1g, z2g, thg = grid if grid is not None else grid_for(n_points)
    Z1, Z2, TH = np.meshgrid(z1g, z2g, thg, indexing="ij")
    L, H = momentum_map(Z1.ravel(), Z2.ravel(), TH.ravel(), p)
    l = L / p.R1
    sing = (np.abs(l) < 1e-14) & (np.abs(H) < 1e-14)
    area = abelian.area_action_batch(l, H, p)
    I0 = abelian.origin_action(p)
    nu2 = p.R1 * (area + np.minimum(l, 0.0) - I0)
    ok = ~sing & np.isfinite(nu2)
    dz = (z1g[1] - z1g[0]) if len(z1g) > 1 else 2.0
    dth = (thg[1] - thg[0]) if len(thg) > 1 else 2 * math.pi
    spacing = 2 * max(dth * p.R2, dz * p.R2)
    return MomentumCloud(L[ok], H[ok], nu2[ok], int((~ok).sum()), spacing, (len(z1g), len(z2g), len(thg)))


def hull_vertices(cloud: MomentumCloud, tol: float = 1e-9) -> np.ndarray:
    pts = np.column_stack([cloud.L, cloud.nu2])
    hull = ConvexHull(pts)
    v = pts[hull.vertices]
    return np.array(_clean(v, tol))


def corner_distance(poly: WeightedPolygon, hull_pts: np.ndarray) -> float:
    """Largest distance from a polygon corner to the nearest hull vertex."""
    pv = poly.array()
    d = np.sqrt(((pv[:, None, :] - hull_pts[None, :, :]) ** 2).sum(-1))
    return float(d.min(axis=1).max())


def twisting_index(p: ModelParams, n_points: int = 100_000, k_range=range(-3, 4),
                   cloud: MomentumCloud | None = None) -> tuple[int, float]:
    """Index k whose (+1, k) representative matches the privileged-map hull, and its corner error."""
    cloud = cloud or privileged_map_sample(p, n_points)
    hp = hull_vertices(cloud)
    best = None
    for k in k_range:
        d = corner_distance(polygon_representative(p, 1, k), hp)
        if d <= cloud.spacing and (best is None or d < best[1]):
            best = (k, d)
    if best is None:
        raise NoMatchingPolygon(f"no k in {list(k_range)} within {cloud.spacing:.3g}")
    return best


def twisting_index_verify(p: ModelParams, n_points: int = 100_000, extra_t: tuple[float, ...] | None = None) -> int:
    """Twisting index at p, also checked at three interior couplings for the same radii."""
    k, _ = twisting_index(p, n_points)
    ci = p.interval
    ts = extra_t or tuple(ci.t_minus + f * (ci.t_plus - ci.t_minus) for f in (0.25, 0.5, 0.75))
    for t in ts:
        k2, _ = twisting_index(ModelParams(p.R1, p.R2, t), n_points)
        if k2 != k:
            raise NoMatchingPolygon(f"twisting index changed from {k} to {k2} at t={t}")
    return k


# ---------------------------------------------------------------- n_FF

def ff_report(p: ModelParams) -> FixedPointClass:
    return classify_fixed_point(p)


def ff_count(p: ModelParams) -> int:
    return ff_report(p).n_ff
