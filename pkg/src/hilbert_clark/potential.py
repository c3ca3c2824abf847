"""The Herglotz potential attached to a weighted node set.

Line nodes give the upper half-plane potential

    phi(z) = sum_n v_n * (1/(gamma_n - z) - gamma_n/(1 + gamma_n^2)),

circle nodes give the disk potential

    phi(z) = (i/2) * sum_n v_n * (gamma_n + z)/(gamma_n - z).

Both are real on the boundary away from the nodes and increase along it.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidNodeSet, NotOnCircle, OutOfDomain
from .sequences import Geometry, WeightedNodeSet

ON_CIRCLE_TOL = 1e-10


class Variant(str, enum.Enum):
    LINE = "line"
    CIRCLE = "circle"


def _scalar(out):
    return out if np.ndim(out) else out[()]


@dataclass(frozen=True, eq=False)
class PotentialContext:
    nodes: WeightedNodeSet
    variant: Variant = None
    # sum_n v_n gamma_n / (1 + gamma_n^2); only used by the line variant
    shift: float = field(init=False, default=0.0)

    def __post_init__(self):
        geometry = self.nodes.geometry
        variant = self.variant
        if variant is None:
            if geometry is Geometry.GENERAL:
                raise InvalidNodeSet(
                    "a potential needs line or circle geometry")
            variant = Variant(geometry.value)
        variant = Variant(variant)
        if variant.value != geometry.value:
            raise InvalidNodeSet(
                f"{variant.value} potential does not match {geometry.value} nodes")
        object.__setattr__(self, "variant", variant)
        if variant is Variant.LINE:
            g = self.nodes.gamma.real
            object.__setattr__(
                self, "shift", float(np.sum(self.nodes.v * g / (1.0 + g * g))))

    @classmethod
    def of(cls, nodes: WeightedNodeSet) -> "PotentialContext":
        return cls(nodes)

    @property
    def is_line(self) -> bool:
        return self.variant is Variant.LINE


def phi(ctx: PotentialContext, z):
    """Evaluate the potential at ``z`` (scalar or array)."""
    s = ctx.nodes
    d = -s.differences(z)  # gamma_n - z
    if ctx.is_line:
        out = np.sum(s.v / d, axis=-1) - ctx.shift
    else:
        out = 0.5j * np.sum(s.v * (s.gamma + np.asarray(z)[..., None]) / d,
                            axis=-1)
    return _scalar(out)


def phi_derivative(ctx: PotentialContext, z):
    """Line: the complex derivative. Circle: the tangential derivative d phi/d theta.

    The circle form is only defined on the unit circle, where it equals
    ``sum v_n / |gamma_n - z|^2``.
    """
    s = ctx.nodes
    d = s.differences(z)
    if ctx.is_line:
        out = np.sum(s.v / (d * d), axis=-1)
    else:
        if np.any(np.abs(np.abs(np.asarray(z)) - 1.0) > ON_CIRCLE_TOL):
            raise NotOnCircle("tangential derivative needs |z| = 1")
        out = np.sum(s.v / (d.real ** 2 + d.imag ** 2), axis=-1)
    return _scalar(out)


def phi_complex_derivative(ctx: PotentialContext, z):
    """Complex derivative d phi/dz for either variant."""
    s = ctx.nodes
    d = -s.differences(z)
    if ctx.is_line:
        out = np.sum(s.v / (d * d), axis=-1)
    else:
        out = 1j * np.sum(s.v * s.gamma / (d * d), axis=-1)
    return _scalar(out)


def herglotz_check(ctx: PotentialContext, z):
    """Return ``Im phi(z)``, which is strictly positive on the domain."""
    z_arr = np.asarray(z, dtype=complex)
    if ctx.is_line:
        if np.any(z_arr.imag <= 0):
            raise OutOfDomain("line potential is checked on Im z > 0")
    elif np.any(np.abs(z_arr) >= 1):
        raise OutOfDomain("circle potential is checked on |z| < 1")
    return np.imag(phi(ctx, z))
