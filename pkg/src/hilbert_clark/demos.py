"""Prepared instances used by the CLI and the test suite."""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import UnknownDemo
from .levelset import LevelSet
from .sequences import Geometry, WeightedNodeSet, admissibility_sum

SEED_ENV = "HILBERT_CLARK_SEED"


@dataclass(frozen=True, eq=False)
class Demo:
    name: str
    nodes: WeightedNodeSet | None
    alphas: tuple = ()
    betas: tuple = ()
    note: str = ""
    extra: dict = field(default_factory=dict)


def two_point() -> Demo:
    return Demo("two-point", WeightedNodeSet.line([-1.0, 1.0], [1.0, 1.0]),
                alphas=(1.0, 0.0),
                note="alpha = 0 is the exceptional value")


def single_node() -> Demo:
    return Demo("single-node", WeightedNodeSet.line([0.0], [1.0]), alphas=(1.0,))


def lattice(n: int = 64) -> Demo:
    nodes = WeightedNodeSet.line(np.arange(-n, n + 1, dtype=float),
                                 np.ones(2 * n + 1))
    return Demo("lattice", nodes, note="integers against half-integers",
                extra={"level_set": lattice_level_set(n)})


def lattice_level_set(n: int) -> LevelSet:
    """Half-integers ``k + 1/2`` (``-n <= k < n``) with weight ``1/pi^2``."""
    lam = np.arange(-n, n, dtype=float) + 0.5
    return LevelSet(0.0, lam, np.full(lam.size, 1.0 / np.pi ** 2),
                    geometry=Geometry.LINE)


def lattice_row_deviation(n: int, window: float = 0.5) -> float:
    """Worst row-norm deviation ``| sum_n |U_jn|^2 - 1 |`` over rows with ``|lambda_j| <= window * n``.

    Rows near the truncation edge miss an O(1) tail and never converge, so
    only the central rows are measured.
    """
    g = np.arange(-n, n + 1, dtype=float)
    lam = lattice_level_set(n).lambdas.real
    u = (1.0 / np.pi) / (lam[:, None] - g[None, :])
    dev = np.abs(np.sum(u * u, axis=1) - 1.0)
    return float(np.max(dev[np.abs(lam) <= window * n]))


def roots_of_unity(n: int = 3) -> Demo:
    gamma = np.exp(2j * np.pi * np.arange(n) / n)
    return Demo("roots-of-unity", WeightedNodeSet.circle(gamma, np.full(n, 2.0 / n)),
                alphas=(0.0,), betas=(-1.0 + 0j, 1j),
                note="inner function is z**n")


def _sparse_primes(terms: int) -> list[int]:
    # the l-th prime is the first prime above 4**l, so sum p**-0.5 converges
    out = []
    for level in range(1, terms + 1):
        k = 4 ** level + 1
        while any(k % d == 0 for d in range(2, int(k ** 0.5) + 1)):
            k += 1
        out.append(k)
    return out


def prime_example(terms: int = 3, radius: float = 4.0) -> Demo:
    """Finite window of the union of ``p^-1 Z \\ Z`` with weight ``p^-3/2``.

    The full set is admissible yet its star set misses the real line.  Any
    finite window is just an ordinary node set, so this demo only reports
    partial admissibility sums.
    """
    primes = _sparse_primes(terms)
    points, weights, partial = [], [], []
    for p in primes:
        k = np.arange(-int(radius * p), int(radius * p) + 1)
        k = k[k % p != 0]
        points.append(k / p)
        weights.append(np.full(k.size, p ** -1.5))
        nodes = WeightedNodeSet.line(np.concatenate(points), np.concatenate(weights))
        partial.append(admissibility_sum(nodes))
    nodes = WeightedNodeSet.line(np.concatenate(points), np.concatenate(weights))
    return Demo("prime-example", nodes,
                note="display only: truncations cannot show the empty star set",
                extra={"primes": primes, "radius": radius,
                       "admissibility_partial_sums": partial})


def seeded_rng() -> np.random.Generator:
    seed = os.environ.get(SEED_ENV)
    return np.random.default_rng(None if seed is None else int(seed))


def random_line(n: int = 8, rng: np.random.Generator | None = None) -> Demo:
    rng = seeded_rng() if rng is None else rng
    gamma = np.sort(rng.uniform(-10.0, 10.0, n))
    v = 5.0 - rng.uniform(0.0, 5.0, n)  # (0, 5]
    return Demo("random-line", WeightedNodeSet.line(gamma, v),
                alphas=tuple(float(a) for a in rng.uniform(-5, 5, 3)))


def random_circle(n: int = 8, rng: np.random.Generator | None = None) -> Demo:
    rng = seeded_rng() if rng is None else rng
    gamma = np.exp(1j * rng.uniform(0.0, 2 * np.pi, n))
    v = 5.0 - rng.uniform(0.0, 5.0, n)
    return Demo("random-circle", WeightedNodeSet.circle(gamma, v),
                alphas=tuple(float(a) for a in rng.uniform(-5, 5, 3)))


DEMOS = {
    "two-point": lambda n=None, **_: two_point(),
    "single-node": lambda n=None, **_: single_node(),
    "lattice": lambda n=None, **_: lattice(64 if n is None else n),
    "roots-of-unity": lambda n=None, **_: roots_of_unity(3 if n is None else n),
    "prime-example": lambda n=None, terms=3, **_: prime_example(terms),
    "random-line": lambda n=None, **_: random_line(8 if n is None else n),
    "random-circle": lambda n=None, **_: random_circle(8 if n is None else n),
}


def demo(name: str, **kwargs) -> Demo:
    try:
        factory = DEMOS[name]
    except KeyError:
        raise UnknownDemo(
            f"unknown demo {name!r}; choose from {', '.join(DEMOS)}") from None
    return factory(**kwargs)
