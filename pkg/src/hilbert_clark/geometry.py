"""Cross ratios and circle/line localisation of finite point sets."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateQuadruple, TooFewPoints
from .levelset import LevelSet
from .sequences import WeightedNodeSet

COLLINEAR_TOL = 1e-10
LOCALIZE_TOL = 1e-9


class LocusKind(str, enum.Enum):
    LINE = "Line"
    CIRCLE = "Circle"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class LocusClassification:
    """Result of :func:`localize`.

    Lines are given by ``point`` (the foot of the perpendicular from the
    origin) and a unit ``direction`` normalised to point into the right
    half-plane (or straight up), so equal lines compare equal.
    """

    kind: LocusKind
    max_deviation: float
    point: complex | None = None
    direction: complex | None = None
    center: complex | None = None
    radius: float | None = None
    reason: str | None = None

    def to_json(self) -> dict:
        def pair(z):
            return None if z is None else [float(z.real), float(z.imag)]
        return {
            "kind": self.kind.value,
            "max_deviation": self.max_deviation,
            "point": pair(self.point),
            "direction": pair(self.direction),
            "center": pair(self.center),
            "radius": self.radius,
            "reason": self.reason,
        }


def cross_ratio_square(lam_j, lam_l, gam_n, gam_m) -> complex:
    """((lj - gm)(ll - gn) / ((lj - gn)(ll - gm)))**2, real iff the points are concyclic or collinear."""
    pts = [complex(lam_j), complex(lam_l), complex(gam_n), complex(gam_m)]
    scale = max(1.0, max(abs(p) for p in pts))
    for a, b in itertools.combinations(pts, 2):
        if abs(a - b) <= 1e-14 * scale:
            raise DegenerateQuadruple("cross ratio needs four distinct points")
    lj, ll, gn, gm = pts
    q = (lj - gm) * (ll - gn) / ((lj - gn) * (ll - gm))
    return q * q


def _canonical_direction(u: complex) -> complex:
    u = u / abs(u)
    if u.real < 0 or (u.real == 0 and u.imag < 0):
        u = -u
    return u


def _circumcircle(a: complex, b: complex, c: complex) -> tuple[complex, float]:
    # center of the circle through a, b, c via the standard determinant formula
    ax, ay, bx, by, cx, cy = a.real, a.imag, b.real, b.imag, c.real, c.imag
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    a2, b2, c2 = abs(a) ** 2, abs(b) ** 2, abs(c) ** 2
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    center = complex(ux, uy)
    return center, abs(a - center)


def localize(points, tol: float | None = None) -> LocusClassification:
    """Fit the circle or line through three seed points and test the rest.

    The seeds are chosen to be well spread: the first point, the point
    farthest from it, and the point enclosing the largest triangle with
    those two.  If that triangle is flat relative to its size, the seeds
    define a line.  ``tol`` is an absolute distance; it defaults to
    ``1e-9`` times the diameter of the set.
    """
    pts = np.asarray(points, dtype=complex).ravel()
    if pts.size < 3:
        raise TooFewPoints("localize needs at least three points")
    diameter = float(np.max(np.abs(pts[:, None] - pts[None, :])))
    if diameter == 0:
        raise TooFewPoints("localize needs distinct points")
    if tol is None:
        tol = LOCALIZE_TOL * diameter

    p0 = pts[0]
    p1 = pts[np.argmax(np.abs(pts - p0))]
    u = p1 - p0
    areas = 0.5 * np.abs(np.imag(np.conj(u) * (pts - p0)))
    k = int(np.argmax(areas))
    p2 = pts[k]
    seed_diam = max(abs(u), abs(p2 - p0), abs(p2 - p1))
    if areas[k] / seed_diam ** 2 < COLLINEAR_TOL:
        direction = _canonical_direction(u)
        normal = 1j * direction
        offset = np.real(np.conj(normal) * pts)
        # project the data onto the normal; a line is one constant offset
        c = 0.5 * (offset.max() + offset.min())
        dev = float(np.max(np.abs(offset - c)))
        if dev > tol:
            return LocusClassification(
                LocusKind.INDETERMINATE, dev,
                reason=f"points leave the seed line by {dev:.3e}")
        return LocusClassification(LocusKind.LINE, dev, point=complex(c * normal),
                                   direction=complex(direction))
    center, radius = _circumcircle(p0, p1, p2)
    dev = float(np.max(np.abs(np.abs(pts - center) - radius)))
    if dev > tol:
        return LocusClassification(
            LocusKind.INDETERMINATE, dev,
            reason=f"points leave the seed circle by {dev:.3e}")
    return LocusClassification(LocusKind.CIRCLE, dev, center=complex(center),
                               radius=float(radius))


def certify_localization(nodes: WeightedNodeSet, level_set: LevelSet,
                         tol: float | None = None) -> LocusClassification:
    """Localise Gamma together with the level set."""
    return localize(np.concatenate([nodes.gamma, level_set.lambdas]), tol)


def max_cross_ratio_imag(lambdas, gammas, focus: int | None = None, *,
                         relative: bool = False) -> float:
    """Largest ``|Im|`` of the squared cross ratio over quadruples (l_j, l_l, g_n, g_m).

    Both orderings of each node pair are scanned.  With ``focus`` only
    quadruples whose first point is ``lambdas[focus]``
    are scanned, which is enough to expose a single displaced point.  With
    ``relative`` each ``|Im q|`` is divided by ``|q|``; cross ratios blow up
    when a level point sits close to a node, so only the relative figure is
    a fair reality test in floating point.
    """
    lam = np.asarray(lambdas, dtype=complex)
    gam = np.asarray(gammas, dtype=complex)
    rows = range(lam.size) if focus is None else [focus]
    # ordered pairs: swapping gamma_n and gamma_m inverts the cross ratio,
    # which matters when q is small and Im(q^2) is tiny in absolute terms
    n_idx, m_idx = np.nonzero(~np.eye(gam.size, dtype=bool))
    gn, gm = gam[n_idx], gam[m_idx]
    best = 0.0
    for j in rows:
        others = np.delete(lam, j)
        lj = lam[j]
        ll = others[:, None]
        q = (lj - gm) * (ll - gn) / ((lj - gn) * (ll - gm))
        q2 = q * q
        im = np.abs(q2.imag) / np.abs(q2) if relative else np.abs(q2.imag)
        best = max(best, float(np.max(im, initial=0.0)))
    return best
