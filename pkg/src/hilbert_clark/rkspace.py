"""The reproducing-kernel space H(Gamma, v).

Its elements are ``f(z) = sum_n a_n v_n / (z - gamma_n)`` with norm
``||f||^2 = sum_n |a_n|^2 v_n``, so coefficient vectors live in ``l2_v`` and
the kernel at ``z`` has coefficients ``1 / conj(z - gamma_n)``.

The space satisfies the three structural requirements used for kernel bases
by construction: dividing out a zero keeps you in the space, point
evaluation is bounded off Gamma, and the normalised kernels at Gamma's
level sets give orthonormal bases.  Nothing here checks those properties
for arbitrary user-supplied spaces.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BasisNotCertified, InvalidNodeSet, ShapeMismatch
from .levelset import LevelSet
from .potential import PotentialContext, phi
from .sequences import WeightedNodeSet
from .transform import UNIT_TOL


@dataclass(frozen=True, eq=False)
class SpaceElement:
    nodes: WeightedNodeSet
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != (len(self.nodes),):
            raise ShapeMismatch(
                f"expected {len(self.nodes)} coefficients, got {coeffs.shape}")
        if not np.all(np.isfinite(coeffs)):
            raise InvalidNodeSet("coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, z):
        return evaluate(self, z)


def evaluate(f: SpaceElement, z):
    d = f.nodes.differences(z)
    out = np.sum(f.coeffs * f.nodes.v / d, axis=-1)
    return out if out.ndim else out[()]


def inner(f: SpaceElement, g: SpaceElement) -> complex:
    if f.coeffs.shape != g.coeffs.shape:
        raise ShapeMismatch("elements belong to different node sets")
    return complex(np.sum(f.coeffs * np.conj(g.coeffs) * f.nodes.v))


def norm(f: SpaceElement) -> float:
    return float(np.sqrt(np.sum(np.abs(f.coeffs) ** 2 * f.nodes.v)))


def kernel_vector(nodes: WeightedNodeSet, z) -> SpaceElement:
    d = nodes.differences(complex(z))
    return SpaceElement(nodes, 1.0 / np.conj(d))


def kernel(nodes: WeightedNodeSet, z, zeta):
    """``k_z(zeta) = sum_n v_n / (conj(z - gamma_n) (zeta - gamma_n))``."""
    dz = nodes.differences(z)
    dzeta = nodes.differences(zeta)
    out = np.sum(nodes.v / (np.conj(dz) * dzeta), axis=-1)
    return out if out.ndim else out[()]


def level_kernel_coeffs(nodes: WeightedNodeSet, level_set: LevelSet) -> np.ndarray:
    """Coefficients of ``k_{lambda_j}`` for every level-set point (one row each)."""
    return 1.0 / np.conj(level_set.differences(nodes))


def basis_certificate(nodes: WeightedNodeSet, level_set: LevelSet) -> float:
    """Deviation of the normalised kernels ``sqrt(w_j) k_{lambda_j}`` from an orthonormal basis.

    Returns ``|| sum_j e_j (x) e_j - I ||_F`` (the frame operator of the
    normalised kernels, in orthonormal coordinates of ``l2_v``).  This is zero
    exactly when the kernels are orthonormal *and* complete; a level set that
    is one point short cannot get below 1.
    """
    coords = (np.sqrt(level_set.weights)[:, None]
              * level_kernel_coeffs(nodes, level_set)
              * np.sqrt(nodes.v)[None, :])
    frame = coords.T @ coords.conj()
    return float(np.linalg.norm(frame - np.eye(len(nodes))))


def reconstruct(nodes: WeightedNodeSet, samples, level_set: LevelSet, z, *,
                tol: float | None = None):
    """Rebuild ``f(z)`` from its samples on the level set.

    ``f = sum_j f(lambda_j) w_j k_{lambda_j}``; refuses to run unless the
    level set carries a certified orthogonal basis.
    """
    samples = np.asarray(samples, dtype=complex)
    if samples.shape != (len(level_set),):
        raise ShapeMismatch("one sample per level-set point is required")
    tol = UNIT_TOL * len(nodes) if tol is None else tol
    cert = basis_certificate(nodes, level_set)
    if cert > tol:
        raise BasisNotCertified(
            f"basis certificate {cert:.3e} exceeds tolerance {tol:.3e}")
    coeffs = (samples * level_set.weights) @ level_kernel_coeffs(nodes, level_set)
    return evaluate(SpaceElement(nodes, coeffs), z)


def parseval_sum(samples, level_set: LevelSet) -> float:
    """``sum_j w_j |f(lambda_j)|^2``."""
    samples = np.asarray(samples)
    return float(np.sum(level_set.weights * np.abs(samples) ** 2))


def generating_function(ctx: PotentialContext, alpha: float, z):
    """``E(z) = (alpha - phi(z)) * prod_n (z - gamma_n)``; its zeros are the level set."""
    if not ctx.is_line:
        raise InvalidNodeSet("the generating function is defined for line nodes")
    d = ctx.nodes.differences(z)
    out = (alpha - phi(ctx, z)) * np.prod(d, axis=-1)
    return out if np.ndim(out) else out[()]


def generating_derivative(ctx: PotentialContext, level_set: LevelSet) -> np.ndarray:
    """``E'(lambda_j) = -phi'(lambda_j) * prod_n (lambda_j - gamma_n)`` at each root."""
    d = level_set.differences(ctx.nodes)
    dphi = np.sum(ctx.nodes.v / (d * d), axis=1)
    return -dphi * np.prod(d, axis=1)


def biorthogonal(ctx: PotentialContext, level_set: LevelSet, j: int, z):
    """``g_j(z) = E(z) / (E'(lambda_j) (z - lambda_j))``, with ``g_j(lambda_k) = delta_jk``.

    E is a polynomial whose zeros are exactly the (simple) level-set points,
    so g_j is the Lagrange basis polynomial
    ``prod_{k != j} (z - lambda_k) / (lambda_j - lambda_k)``.  That form
    vanishes exactly at the other points, whereas going through
    ``alpha - phi(z)`` and the node product amplifies rounding enormously
    when a level point lies far outside the nodes.
    """
    if not ctx.is_line:
        raise InvalidNodeSet("the generating function is defined for line nodes")
    z = np.asarray(z, dtype=complex)
    lam = level_set.lambdas
    others = np.delete(lam, j)
    out = np.prod((z[..., None] - others) / (lam[j] - others), axis=-1)
    return out if out.ndim else out[()]
