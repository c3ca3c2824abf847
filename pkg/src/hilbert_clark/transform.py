"""Discrete Hilbert transform matrices and their unitarity certificates."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidNodeSet, Overlap, ShapeMismatch
from .levelset import LevelSet
from .sequences import Geometry, WeightedNodeSet

UNIT_TOL = 1e-9


class Verdict(str, enum.Enum):
    UNITARY = "Unitary"
    ISOMETRY_ONLY = "IsometryOnly"
    COISOMETRY_ONLY = "CoisometryOnly"
    NOT_ISOMETRIC = "NotIsometric"
    DIMENSION_MISMATCH = "DimensionMismatch"


@dataclass(frozen=True, eq=False)
class TransformMatrix:
    """Matrix of H_v(Gamma, Lambda); rows follow Lambda, columns follow Gamma.

    With ``scaled=True`` the entries are ``sqrt(w_j v_n)/(lambda_j - gamma_n)``,
    i.e. the operator written in the orthonormal bases of the two weighted
    spaces.  Otherwise they are the raw ``v_n/(lambda_j - gamma_n)``.
    """

    entries: np.ndarray
    row_weights: np.ndarray
    col_weights: np.ndarray
    scaled: bool = True

    @property
    def shape(self):
        return self.entries.shape

    def scaled_entries(self) -> np.ndarray:
        if self.scaled:
            return self.entries
        return (self.entries * np.sqrt(self.row_weights)[:, None]
                / np.sqrt(self.col_weights)[None, :])

    def raw_entries(self) -> np.ndarray:
        if not self.scaled:
            return self.entries
        return (self.entries * np.sqrt(self.col_weights)[None, :]
                / np.sqrt(self.row_weights)[:, None])


@dataclass(frozen=True)
class UnitarityReport:
    col_gram_dev: float
    row_gram_dev: float
    dims: tuple
    verdict: Verdict
    tolerance: float

    def to_json(self) -> dict:
        return {
            "col_gram_dev": self.col_gram_dev,
            "row_gram_dev": self.row_gram_dev,
            "dims": list(self.dims),
            "verdict": self.verdict.value,
            "tolerance": self.tolerance,
        }


def _from_differences(diffs: np.ndarray, row_w: np.ndarray,
                      col_w: np.ndarray, scaled: bool) -> TransformMatrix:
    if scaled:
        entries = np.sqrt(row_w)[:, None] * np.sqrt(col_w)[None, :] / diffs
    else:
        entries = col_w[None, :] / diffs
    return TransformMatrix(entries, row_w, col_w, scaled)


def build(nodes: WeightedNodeSet, level_set: LevelSet, *,
          scaled: bool = True) -> TransformMatrix:
    """Assemble the transform from ``l2_v`` over Gamma to ``l2_w`` over Lambda."""
    diffs = level_set.differences(nodes)
    if diffs.size and np.min(np.abs(diffs)) <= nodes.exclusion:
        raise Overlap("a level-set point coincides with a node")
    return _from_differences(diffs, level_set.weights, nodes.v, scaled)


def apply(T: TransformMatrix, a) -> np.ndarray:
    """Map coefficients ``a`` in ``l2_v`` to ``b_j = sum_n a_n v_n/(lambda_j - gamma_n)``."""
    a = np.asarray(a)
    if a.shape[0] != T.shape[1]:
        raise ShapeMismatch(
            f"coefficient vector has length {a.shape[0]}, expected {T.shape[1]}")
    return T.raw_entries() @ a


def weighted_norm(values, weights) -> float:
    """Norm in the weighted sequence space ``l2_weights``."""
    values = np.asarray(values)
    return float(np.sqrt(np.sum(np.abs(values) ** 2 * weights)))


def to_orthonormal(values, weights) -> np.ndarray:
    """Coordinates of ``values`` in the orthonormal basis of ``l2_weights``."""
    return np.asarray(values) * np.sqrt(weights)


def gram_deviations(U: np.ndarray) -> tuple[float, float]:
    m, n = U.shape
    col = np.linalg.norm(U.conj().T @ U - np.eye(n))
    row = np.linalg.norm(U @ U.conj().T - np.eye(m))
    return float(col), float(row)


def unitarity_report(T: TransformMatrix, *, unit_tol: float | None = None
                     ) -> UnitarityReport:
    """Frobenius deviations of both Gram matrices and a verdict.

    ``unit_tol`` defaults to ``1e-9 * max(rows, cols)``.
    """
    U = T.scaled_entries()
    m, n = U.shape
    tol = UNIT_TOL * max(m, n) if unit_tol is None else unit_tol
    col, row = gram_deviations(U)
    cols_ok, rows_ok = col <= tol, row <= tol
    if cols_ok and rows_ok:
        verdict = Verdict.UNITARY
    elif cols_ok:
        verdict = Verdict.ISOMETRY_ONLY
    elif rows_ok:
        verdict = Verdict.COISOMETRY_ONLY
    elif m != n:
        verdict = Verdict.DIMENSION_MISMATCH
    else:
        verdict = Verdict.NOT_ISOMETRIC
    return UnitarityReport(col, row, (m, n), verdict, tol)


def adjoint_identity_check(nodes: WeightedNodeSet, level_set: LevelSet) -> float:
    """``|| H_v(Gamma, Lambda)^* + H_w(Lambda, Gamma) ||_F`` for real sequences."""
    if nodes.geometry is not Geometry.LINE:
        raise InvalidNodeSet("the adjoint identity is stated for line nodes")
    diffs = level_set.differences(nodes)
    forward = _from_differences(diffs, level_set.weights, nodes.v, True)
    backward = _from_differences(-diffs.T, nodes.v, level_set.weights, True)
    return float(np.linalg.norm(forward.entries.conj().T + backward.entries))
