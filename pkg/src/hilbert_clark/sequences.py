"""Weighted node sets (Gamma, v) and the sums built directly from them.

All sums over nodes go through :func:`numpy.sum` on contiguous arrays, which
uses pairwise summation and is deterministic for a fixed node order.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidNodeSet, PointOnGamma

DEDUP_TOL = 1e-12
CIRCLE_TOL = 1e-12


class Geometry(str, enum.Enum):
    LINE = "line"
    CIRCLE = "circle"
    GENERAL = "general"


def _as_complex_array(values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim == 2 and arr.shape[1] == 2 and not np.iscomplexobj(arr):
        arr = arr[:, 0] + 1j * arr[:, 1]
    return np.ascontiguousarray(np.atleast_1d(arr), dtype=complex)


def exclusion_radius(gamma: np.ndarray, dedup_tol: float = DEDUP_TOL) -> float:
    """Absolute size of the exclusion zone around each node."""
    return dedup_tol * max(1.0, float(np.max(np.abs(gamma))))


def _min_pairwise_distance(gamma: np.ndarray, geometry: Geometry) -> float:
    if gamma.size < 2:
        return np.inf
    if geometry is Geometry.LINE:
        return float(np.min(np.diff(np.sort(gamma.real))))
    d = np.abs(gamma[:, None] - gamma[None, :])
    d[np.diag_indices_from(d)] = np.inf
    return float(d.min())


@dataclass(frozen=True, eq=False)
class WeightedNodeSet:
    """Distinct nodes ``gamma`` with positive weights ``v``.

    Circle nodes are validated to lie within ``CIRCLE_TOL`` of the unit circle
    and are then projected onto it exactly, so that angle-based arithmetic in
    the solvers is consistent with the stored values.
    """

    gamma: np.ndarray
    v: np.ndarray
    geometry: Geometry = Geometry.GENERAL
    dedup_tol: float = DEDUP_TOL

    def __post_init__(self):
        geometry = Geometry(self.geometry)
        gamma = _as_complex_array(self.gamma)
        v = np.ascontiguousarray(np.atleast_1d(np.asarray(self.v, dtype=float)))
        if gamma.ndim != 1 or gamma.size < 1:
            raise InvalidNodeSet("gamma must be a non-empty 1-d sequence")
        if v.shape != gamma.shape:
            raise InvalidNodeSet(
                f"v has length {v.size}, gamma has length {gamma.size}")
        if not (np.all(np.isfinite(gamma)) and np.all(np.isfinite(v))):
            raise InvalidNodeSet("gamma and v must be finite")
        if np.any(v <= 0):
            raise InvalidNodeSet("all weights v must be strictly positive")
        if geometry is Geometry.LINE:
            if np.any(gamma.imag != 0):
                raise InvalidNodeSet("line geometry requires real nodes")
        elif geometry is Geometry.CIRCLE:
            if np.any(np.abs(np.abs(gamma) - 1.0) > CIRCLE_TOL):
                raise InvalidNodeSet(
                    "circle geometry requires unit-modulus nodes")
            gamma = np.exp(1j * np.angle(gamma))
        if _min_pairwise_distance(gamma, geometry) <= exclusion_radius(
                gamma, self.dedup_tol):
            raise InvalidNodeSet("nodes must be pairwise distinct")
        gamma.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "geometry", geometry)

    @classmethod
    def line(cls, gamma, v, **kwargs) -> "WeightedNodeSet":
        return cls(np.asarray(gamma, dtype=float), v, Geometry.LINE, **kwargs)

    @classmethod
    def circle(cls, gamma, v, **kwargs) -> "WeightedNodeSet":
        return cls(gamma, v, Geometry.CIRCLE, **kwargs)

    @classmethod
    def from_json(cls, data: dict, **kwargs) -> "WeightedNodeSet":
        """Build from ``{"geometry": ..., "gamma": [...], "v": [...]}``.

        ``gamma`` entries are ``[re, im]`` pairs; line geometry also accepts
        bare reals.
        """
        try:
            geometry = Geometry(data.get("geometry", "general"))
            raw = data["gamma"]
            v = data["v"]
        except (KeyError, ValueError, AttributeError) as exc:
            raise InvalidNodeSet(f"malformed node set: {exc}") from exc
        points = []
        for item in raw:
            if isinstance(item, (int, float)):
                if geometry is not Geometry.LINE:
                    raise InvalidNodeSet(
                        "bare real gamma entries are only allowed for line geometry")
                points.append(complex(item))
            elif isinstance(item, (list, tuple)) and len(item) == 2:
                points.append(complex(float(item[0]), float(item[1])))
            else:
                raise InvalidNodeSet(f"cannot parse gamma entry {item!r}")
        gamma = np.array(points, dtype=complex)
        if geometry is Geometry.LINE:
            if np.any(gamma.imag != 0):
                raise InvalidNodeSet("line geometry requires real nodes")
            gamma = gamma.real
        return cls(gamma, v, geometry, **kwargs)

    def to_json(self) -> dict:
        return {
            "geometry": self.geometry.value,
            "gamma": [[float(g.real), float(g.imag)] for g in self.gamma],
            "v": [float(x) for x in self.v],
        }

    def __len__(self) -> int:
        return self.gamma.size

    @property
    def exclusion(self) -> float:
        return exclusion_radius(self.gamma, self.dedup_tol)

    def differences(self, z) -> np.ndarray:
        """``z - gamma_n`` as an array of shape ``z.shape + (N,)``.

        Raises :class:`PointOnGamma` if any ``z`` falls inside a node's
        exclusion zone.
        """
        z = np.asarray(z, dtype=complex)
        d = z[..., None] - self.gamma
        if np.any(np.abs(d) <= self.exclusion):
            raise PointOnGamma("evaluation point coincides with a node")
        return d


def admissibility_sum(s: WeightedNodeSet) -> float:
    """Return ``sum v_n / (1 + |gamma_n|^2)``."""
    return float(np.sum(s.v / (1.0 + np.abs(s.gamma) ** 2)))


def star_value(s: WeightedNodeSet, z):
    """Return ``sum v_n / |z - gamma_n|^2``; vectorised over ``z``."""
    d = s.differences(z)
    out = np.sum(s.v / (d.real ** 2 + d.imag ** 2), axis=-1)
    return out if out.ndim else float(out)


def kernel_weight(s: WeightedNodeSet, lam):
    """Return the reciprocal of :func:`star_value` at ``lam``."""
    return 1.0 / star_value(s, lam)
