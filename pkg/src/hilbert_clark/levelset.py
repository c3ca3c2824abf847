"""Level sets of the potential and the partial fractions of 1/(alpha - phi).

The equation ``phi(lambda) = alpha`` is a secular equation: along the line
(or around the circle) ``phi`` increases from -inf to +inf between
consecutive nodes, so there is exactly one root per gap.  Each root is stored
as an anchor node plus an offset from it, which keeps ``lambda - gamma_n``
accurate to full relative precision even when a root crowds a node.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DecompositionResidual, InvalidNodeSet
from .potential import PotentialContext, phi
from .sequences import Geometry, WeightedNodeSet

LEVEL_TOL = 1e-12
EXC_TOL = 1e-9
MAX_ITER = 200
BISECT_FRACTION = 1e-3
_EPS = np.finfo(float).eps
_TWO_PI = 2.0 * np.pi


def _wrap(x):
    """Map angles into [-pi, pi)."""
    return x - _TWO_PI * np.floor((x + np.pi) / _TWO_PI)


@dataclass(frozen=True, eq=False)
class LevelSet:
    """Solutions of ``phi = alpha`` with their kernel weights.

    ``anchors``/``offsets`` (index into the node set and displacement from
    that node; an angle for circles) are filled in by :func:`solve_level_set`
    and are optional for hand-built level sets.
    """

    alpha: float
    lambdas: np.ndarray
    weights: np.ndarray
    exceptional: bool = False
    geometry: Geometry = Geometry.GENERAL
    anchors: Optional[np.ndarray] = None
    offsets: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "lambdas",
                           np.atleast_1d(np.asarray(self.lambdas, dtype=complex)))
        object.__setattr__(self, "weights",
                           np.atleast_1d(np.asarray(self.weights, dtype=float)))
        object.__setattr__(self, "geometry", Geometry(self.geometry))
        if self.lambdas.shape != self.weights.shape:
            raise InvalidNodeSet("lambdas and weights must have equal length")
        if np.any(self.weights <= 0):
            raise InvalidNodeSet("level-set weights must be positive")

    def __len__(self) -> int:
        return self.lambdas.size

    def differences(self, nodes: WeightedNodeSet) -> np.ndarray:
        """Matrix of ``lambda_j - gamma_n`` (rows: level set, columns: nodes)."""
        if self.anchors is None:
            return self.lambdas[:, None] - nodes.gamma[None, :]
        a = self.anchors
        tau = self.offsets[:, None]
        if self.geometry is Geometry.LINE:
            g = nodes.gamma.real
            return (tau - (g[None, :] - g[a][:, None])).astype(complex)
        theta = np.angle(nodes.gamma)
        d = _wrap(theta[None, :] - theta[a][:, None])
        half = 0.5 * (tau - d)
        return 2j * np.sin(half) * np.exp(
            1j * (theta[a][:, None] + 0.5 * (tau + d)))

    def as_nodes(self) -> WeightedNodeSet:
        """The level set viewed as a weighted node set in its own right."""
        pts = self.lambdas.real if self.geometry is Geometry.LINE else self.lambdas
        return WeightedNodeSet(pts, self.weights, self.geometry)

    def to_json(self) -> dict:
        return {
            "alpha": float(self.alpha),
            "exceptional": bool(self.exceptional),
            "lambdas": [[float(z.real), float(z.imag)] for z in self.lambdas],
            "weights": [float(w) for w in self.weights],
        }


@dataclass(frozen=True)
class HerglotzDecomposition:
    """``1/(alpha - phi(z)) = b + c z + sum_j w_j (1/(lambda_j - z) - lambda_j/(1 + lambda_j^2))``.

    With finitely many nodes the representing measure is purely atomic, so the
    continuous part is identically zero and not stored.
    """

    b: float
    c: float
    atoms: tuple

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        lam = np.array([a[0] for a in self.atoms], dtype=float)
        w = np.array([a[1] for a in self.atoms], dtype=float)
        terms = w * (1.0 / (lam - z[..., None]) - lam / (1.0 + lam * lam))
        out = self.b + self.c * z + np.sum(terms, axis=-1)
        return out if out.ndim else out[()]


def _find_root(f: Callable, df: Callable, lo: float, hi: float, ftol: float,
               max_iter: int = MAX_ITER) -> float:
    """Root of an increasing function on (lo, hi) with f(lo) < 0 < f(hi).

    Either endpoint may be a pole; ``f`` is never evaluated at the endpoints.
    Bisection narrows the bracket to a fraction of its width, then Newton
    steps take over, falling back to bisection whenever a step leaves the
    bracket.
    """
    stop_width = BISECT_FRACTION * (hi - lo)
    while hi - lo > stop_width:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        fx = f(x)
        if abs(fx) <= ftol:
            # one more step is nearly free and removes the ftol/f' offset
            x_new = x - fx / df(x)
            return x_new if lo <= x_new <= hi else x
        if fx < 0:
            lo = x
        else:
            hi = x
        if hi - lo <= 4 * _EPS * max(abs(lo), abs(hi)):
            return x
        step = fx / df(x)
        x_new = x - step
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        elif abs(step) <= 2 * _EPS * abs(x):
            return x_new
        x = x_new
    return x


def _line_roots(ctx: PotentialContext, alpha: float, exc_tol: float,
                level_tol: float):
    nodes = ctx.nodes
    order = np.argsort(nodes.gamma.real, kind="stable")
    g = nodes.gamma.real[order]
    v = nodes.v[order]
    n = g.size
    alpha_star = -ctx.shift
    target = alpha - alpha_star
    ftol = level_tol * (1.0 + abs(alpha))

    def local(k):
        d = g - g[k]

        def f(t):
            return float(np.sum(v / (d - t))) - target

        def df(t):
            r = d - t
            return float(np.sum(v / (r * r)))
        return f, df

    anchors, offsets = [], []
    exceptional = abs(target) <= exc_tol * (1.0 + abs(alpha_star))
    if not exceptional and target > 0:
        f, df = local(0)
        span = max(g[-1] - g[0], 1.0)
        lo = -span
        while f(lo) >= 0:
            lo *= 2.0
        anchors.append(0)
        offsets.append(_find_root(f, df, lo, 0.0, ftol))
    for k in range(n - 1):
        gap = g[k + 1] - g[k]
        f_left, df_left = local(k)
        if f_left(0.5 * gap) > 0:
            anchors.append(k)
            offsets.append(_find_root(f_left, df_left, 0.0, 0.5 * gap, ftol))
        else:
            f_right, df_right = local(k + 1)
            anchors.append(k + 1)
            offsets.append(_find_root(f_right, df_right, -0.5 * gap, 0.0, ftol))
    if not exceptional and target < 0:
        f, df = local(n - 1)
        span = max(g[-1] - g[0], 1.0)
        hi = span
        while f(hi) <= 0:
            hi *= 2.0
        anchors.append(n - 1)
        offsets.append(_find_root(f, df, 0.0, hi, ftol))
    anchors = np.array(anchors, dtype=int)
    offsets = np.array(offsets, dtype=float)
    lambdas = g[anchors] + offsets
    return order[anchors], offsets, lambdas.astype(complex), exceptional


def _circle_roots(ctx: PotentialContext, alpha: float, level_tol: float):
    nodes = ctx.nodes
    theta = np.angle(nodes.gamma)
    order = np.argsort(theta, kind="stable")
    th = theta[order]
    v = nodes.v[order]
    n = th.size
    ftol = level_tol * (1.0 + abs(alpha))

    def local(k):
        d = _wrap(th - th[k])

        def f(t):
            return 0.5 * float(np.sum(v / np.tan(0.5 * (d - t)))) - alpha

        def df(t):
            s = np.sin(0.5 * (d - t))
            return 0.25 * float(np.sum(v / (s * s)))
        return f, df

    anchors, offsets = [], []
    for k in range(n):
        right = (k + 1) % n
        gap = th[right] - th[k] if k + 1 < n else th[0] + _TWO_PI - th[k]
        f_left, df_left = local(k)
        if f_left(0.5 * gap) > 0:
            anchors.append(k)
            offsets.append(_find_root(f_left, df_left, 0.0, 0.5 * gap, ftol))
        else:
            f_right, df_right = local(right)
            anchors.append(right)
            offsets.append(_find_root(f_right, df_right, -0.5 * gap, 0.0, ftol))
    anchors = np.array(anchors, dtype=int)
    offsets = np.array(offsets, dtype=float)
    lambdas = np.exp(1j * (th[anchors] + offsets))
    return order[anchors], offsets, lambdas


def exceptional_alpha(ctx: PotentialContext) -> Optional[float]:
    """Limit of phi at infinity along the line; ``None`` for circles."""
    if not ctx.is_line:
        return None
    return -ctx.shift


def solve_level_set(ctx: PotentialContext, alpha: float, *,
                    level_tol: float = LEVEL_TOL,
                    exc_tol: float = EXC_TOL) -> LevelSet:
    """Solve ``phi(lambda) = alpha`` and attach the kernel weights."""
    alpha = float(alpha)
    if ctx.is_line:
        anchors, offsets, lambdas, exceptional = _line_roots(
            ctx, alpha, exc_tol, level_tol)
        geometry = Geometry.LINE
    else:
        anchors, offsets, lambdas = _circle_roots(ctx, alpha, level_tol)
        exceptional = False
        geometry = Geometry.CIRCLE
    ls = LevelSet(alpha, lambdas, np.ones(lambdas.size), exceptional,
                  geometry, anchors, offsets)
    d = ls.differences(ctx.nodes)
    weights = 1.0 / np.sum(ctx.nodes.v / (d.real ** 2 + d.imag ** 2), axis=1)
    return LevelSet(alpha, lambdas, weights, exceptional, geometry, anchors,
                    offsets)


def level_residuals(ctx: PotentialContext, ls: LevelSet) -> np.ndarray:
    """``phi(lambda_j) - alpha`` evaluated from the anchored differences."""
    s = ctx.nodes
    d = -ls.differences(s)  # gamma_n - lambda_j
    if ctx.is_line:
        vals = np.sum(s.v / d, axis=1) - ctx.shift
    else:
        vals = 0.5j * np.sum(s.v * (s.gamma + ls.lambdas[:, None]) / d, axis=1)
    return np.real(vals) - ls.alpha


def herglotz_decompose(ctx: PotentialContext, alpha: float, *,
                       level_set: Optional[LevelSet] = None,
                       level_tol: float = LEVEL_TOL, exc_tol: float = EXC_TOL,
                       residual_tol: float = 1e-9) -> HerglotzDecomposition:
    """Partial-fraction form of ``1/(alpha - phi(z))`` on the line."""
    if not ctx.is_line:
        raise InvalidNodeSet("herglotz_decompose is defined for line nodes")
    ls = level_set if level_set is not None else solve_level_set(
        ctx, alpha, level_tol=level_tol, exc_tol=exc_tol)
    c = 1.0 / float(np.sum(ctx.nodes.v)) if ls.exceptional else 0.0
    atoms = tuple((float(l.real), float(w))
                  for l, w in zip(ls.lambdas, ls.weights))
    partial = HerglotzDecomposition(0.0, c, atoms)

    lhs_i = 1.0 / (alpha - phi(ctx, 1j))
    b_complex = lhs_i - partial(1j)
    scale = 1.0 + abs(lhs_i) + abs(c) + float(np.sum(ls.weights))
    if abs(b_complex.imag) > 1e-10 * scale:
        raise DecompositionResidual(
            f"constant term is not real: Im b = {b_complex.imag:.3e}")
    dec = HerglotzDecomposition(float(b_complex.real), c, atoms)

    g = ctx.nodes.gamma.real
    centre = 0.5 * (g.min() + g.max())
    width = max(g.max() - g.min(), 1.0)
    probes = centre + width * np.array([0.5j, 1j, 0.3 + 0.2j, -0.7 + 0.1j, 3j])
    lhs = 1.0 / (alpha - phi(ctx, probes))
    res = np.abs(lhs - dec(probes))
    if np.any(res > residual_tol * (1.0 + np.abs(lhs))):
        raise DecompositionResidual(
            f"identity residual {res.max():.3e} exceeds tolerance")
    return dec
