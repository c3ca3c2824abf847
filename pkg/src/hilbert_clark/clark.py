"""Inner functions, model-space kernels and Clark bases for circle nodes.

For circle nodes the potential phi gives an inner function
``I = (phi - i)/(phi + i)`` (a finite Blaschke product of degree N).  For
each unimodular ``beta != 1`` the points where ``I = beta`` are exactly the
level set ``phi = alpha`` with ``beta = (alpha - i)/(alpha + i)``, and the
model-space kernels at those points are orthogonal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (AtOne, BetaEqualsOne, InvalidNodeSet, QuadratureUnresolved,
                     SingularPair)
from .levelset import LEVEL_TOL, LevelSet, solve_level_set
from .potential import PotentialContext, phi, phi_complex_derivative

QUAD_FACTOR = 64
QUAD_TOL = 1e-8
_ONE_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class InnerFunction:
    ctx: PotentialContext

    def __post_init__(self):
        if self.ctx.is_line:
            raise InvalidNodeSet("inner functions are built from circle nodes")

    def __call__(self, z):
        return inner_value(self, z)

    def derivative(self, z):
        """``I'(z) = 2i phi'(z) / (phi(z) + i)^2``."""
        p = phi(self.ctx, z)
        return 2j * phi_complex_derivative(self.ctx, z) / (p + 1j) ** 2


def inner_value(h: InnerFunction, z):
    p = phi(h.ctx, z)
    return (p - 1j) / (p + 1j)


def phi_from_inner(value):
    value = np.asarray(value, dtype=complex)
    if np.any(np.abs(1.0 - value) <= _ONE_TOL):
        raise AtOne("i(1 + I)/(1 - I) is undefined at I = 1")
    out = 1j * (1.0 + value) / (1.0 - value)
    return out if out.ndim else out[()]


def alpha_beta(alpha: float) -> complex:
    """Unimodular ``beta`` with ``I = beta`` exactly where ``phi = alpha``."""
    alpha = float(alpha)
    return complex((alpha - 1j) / (alpha + 1j))


def beta_alpha(beta: complex) -> float:
    beta = complex(beta)
    if abs(1.0 - beta) <= _ONE_TOL:
        raise BetaEqualsOne("beta = 1 corresponds to alpha = infinity")
    return float((1j * (1.0 + beta) / (1.0 - beta)).real)


def model_kernel(h: InnerFunction, zeta, z):
    """``(1 - conj(I(zeta)) I(z)) / (1 - conj(zeta) z)``.

    On the diagonal of the unit circle the removable singularity is filled
    in with ``zeta * conj(I(zeta)) * I'(zeta)``.
    """
    zeta = complex(zeta)
    z = np.asarray(z, dtype=complex)
    denom = 1.0 - np.conj(zeta) * z
    num = 1.0 - np.conj(inner_value(h, zeta)) * inner_value(h, z)
    singular = np.abs(denom) <= 1e-13
    if np.any(singular):
        on_diag = singular & (np.abs(z - zeta) <= 1e-12)
        if not np.all(on_diag) or abs(abs(zeta) - 1.0) > 1e-10:
            raise SingularPair("conj(zeta) z = 1 away from the circle diagonal")
        limit = zeta * np.conj(inner_value(h, zeta)) * h.derivative(zeta)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(singular, limit, num / denom)
    else:
        out = num / denom
    return out if out.ndim else out[()]


def _boundary_kernels(ctx: PotentialContext, ls: LevelSet, z: np.ndarray) -> np.ndarray:
    """Clark kernels ``kappa_{lambda_j}(z)`` for ``z`` on the circle, one column per j.

    Uses ``1 - conj(beta) I(z) = 2i (alpha - phi(z)) / ((alpha - i)(phi(z) + i))``
    together with the difference quotient of phi, which removes the 0/0 at
    ``z = lambda_j`` from the textbook formula.
    """
    s = ctx.nodes
    alpha = ls.alpha
    gz = s.gamma[None, :] - z[:, None]                     # (M, N)
    p = 0.5j * np.sum(s.v * (s.gamma[None, :] + z[:, None]) / gz, axis=1)
    gl = -ls.differences(s)                                # (J, N): gamma_n - lambda_j
    # phi(lambda) - phi(z) = i (lambda - z) sum v g / ((g - lambda)(g - z))
    quot = (s.v * s.gamma / gz) @ (1.0 / gl).T            # (M, J)
    lam = ls.lambdas[None, :]
    return -2.0 * lam * quot / ((alpha - 1j) * (p + 1j)[:, None])


def l2_gram(ctx: PotentialContext, ls: LevelSet) -> np.ndarray:
    """Gram of the Clark kernels from the weighted l2 formula.

    ``<kappa_k, kappa_j> = (|1 - beta|^2 / 2) sum_n v_n / ((lambda_j - gamma_n) conj(lambda_k - gamma_n))``
    """
    beta = alpha_beta(ls.alpha)
    d = ls.differences(ctx.nodes)
    inv = 1.0 / d
    return 0.5 * abs(1.0 - beta) ** 2 * ((np.conj(inv) * ctx.nodes.v) @ inv.T)


def quadrature_gram(ctx: PotentialContext, ls: LevelSet, m: int) -> np.ndarray:
    """Gram of the Clark kernels as a boundary integral, by the m-point trapezoid rule.

    The grid is offset by half a step so it never lands on roots of unity.
    """
    t = 2.0 * np.pi * (np.arange(m) + 0.5) / m
    k = _boundary_kernels(ctx, ls, np.exp(1j * t))
    return (k.T @ k.conj()) / m


@dataclass(frozen=True, eq=False)
class ClarkBasis:
    beta: complex
    level_set: LevelSet
    gram_quadrature: np.ndarray
    gram_l2: np.ndarray
    quad_points: int
    quad_change: float

    @property
    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(np.diag(self.gram_l2)))))

    @property
    def max_offdiagonal(self) -> float:
        g = self.gram_quadrature - np.diag(np.diag(self.gram_quadrature))
        return float(np.max(np.abs(g), initial=0.0))

    @property
    def max_l2_mismatch(self) -> float:
        return float(np.max(np.abs(self.gram_quadrature - self.gram_l2)))

    def to_json(self) -> dict:
        return {
            "beta": [self.beta.real, self.beta.imag],
            "alpha": self.level_set.alpha,
            "points": [[float(z.real), float(z.imag)] for z in self.level_set.lambdas],
            "weights": [float(w) for w in self.level_set.weights],
            "gram_diagonal": [float(x.real) for x in np.diag(self.gram_quadrature)],
            "max_offdiagonal": self.max_offdiagonal,
            "max_l2_mismatch": self.max_l2_mismatch,
            "quad_points": self.quad_points,
            "quad_change": self.quad_change,
        }


def clark_basis(h: InnerFunction, beta: complex, *, quad_points: int | None = None,
                quad_tol: float = QUAD_TOL, level_tol: float = LEVEL_TOL) -> ClarkBasis:
    """Clark points for ``beta`` and the Gram matrix of their kernels.

    The Gram is computed at ``M`` and ``2M`` quadrature points; if any entry
    moves by more than ``quad_tol`` (relative to the largest diagonal entry,
    floored at 1) the integral is considered unresolved.
    """
    beta = complex(beta)
    if abs(abs(beta) - 1.0) > 1e-12:
        raise InvalidNodeSet("beta must lie on the unit circle")
    alpha = beta_alpha(beta)
    ls = solve_level_set(h.ctx, alpha, level_tol=level_tol)
    m = QUAD_FACTOR * len(h.ctx.nodes) if quad_points is None else int(quad_points)
    g1 = quadrature_gram(h.ctx, ls, m)
    g2 = quadrature_gram(h.ctx, ls, 2 * m)
    gl = l2_gram(h.ctx, ls)
    scale = max(1.0, float(np.max(np.abs(np.diag(gl)))))
    change = float(np.max(np.abs(g2 - g1))) / scale
    if change > quad_tol:
        raise QuadratureUnresolved(
            f"Gram changed by {change:.3e} when doubling {m} quadrature points")
    return ClarkBasis(beta, ls, g2, gl, 2 * m, change)
