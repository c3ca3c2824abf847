"""Acceptance gate: one test per criterion, each logging a PASS/FAIL line."""
import time
from dataclasses import dataclass

import numpy as np
import pytest

from hilbert_clark.clark import InnerFunction, clark_basis
from hilbert_clark.demos import lattice_row_deviation, roots_of_unity
from hilbert_clark.geometry import LocusKind, certify_localization, max_cross_ratio_imag
from hilbert_clark.levelset import (LevelSet, exceptional_alpha, herglotz_decompose,
                                    solve_level_set)
from hilbert_clark.potential import PotentialContext, phi, phi_derivative
from hilbert_clark.rkspace import (SpaceElement, basis_certificate, evaluate, inner,
                                   kernel_vector, norm, parseval_sum, reconstruct)
from hilbert_clark.sequences import WeightedNodeSet
from hilbert_clark.transform import Verdict, build, unitarity_report

SEED = 20261019
INSTANCES = 50
ALPHAS = 5


@dataclass
class Case:
    nodes: WeightedNodeSet
    ctx: PotentialContext
    level_set: LevelSet
    report: object


def _record(log, number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    log.append(line)
    print(line)
    assert ok, line


def _random_nodes(rng, circle):
    n = int(rng.integers(2, 65))
    v = 5.0 - rng.uniform(0.0, 5.0, n)  # (0, 5]
    if circle:
        return WeightedNodeSet.circle(np.exp(1j * rng.uniform(0, 2 * np.pi, n)), v)
    return WeightedNodeSet.line(rng.uniform(-10.0, 10.0, n), v)


def _random_alpha(rng, a_star):
    while True:
        alpha = rng.uniform(-5.0, 5.0)
        if a_star is None or abs(alpha - a_star) > 1e-6 * (1 + abs(a_star)):
            return alpha


def _build_cases(circle):
    rng = np.random.default_rng(SEED + int(circle))
    cases, start = [], time.perf_counter()
    for _ in range(INSTANCES):
        nodes = _random_nodes(rng, circle)
        ctx = PotentialContext(nodes)
        a_star = exceptional_alpha(ctx)
        for _ in range(ALPHAS):
            ls = solve_level_set(ctx, _random_alpha(rng, a_star))
            cases.append(Case(nodes, ctx, ls, unitarity_report(build(nodes, ls))))
    return cases, time.perf_counter() - start


@pytest.fixture(scope="module")
def line_cases():
    return _build_cases(circle=False)


@pytest.fixture(scope="module")
def circle_cases():
    return _build_cases(circle=True)


def _unitary_within(case):
    bound = 1e-9 * len(case.nodes)
    return (case.report.verdict is Verdict.UNITARY
            and max(case.report.col_gram_dev, case.report.row_gram_dev) <= bound)


def test_criterion_1_line_unitarity(line_cases, acceptance_log):
    cases, elapsed = line_cases
    bad = sum(not _unitary_within(c) for c in cases)
    worst = max(max(c.report.col_gram_dev, c.report.row_gram_dev) / len(c.nodes) for c in cases)
    _record(acceptance_log, 1, bad == 0 and elapsed <= 30.0,
            f"{len(cases) - bad}/{len(cases)} Unitary, worst dev/N {worst:.1e}, {elapsed:.2f}s")


def test_criterion_2_exceptional(line_cases, acceptance_log):
    seen, failures, worst_c = set(), 0, 0.0
    for case in line_cases[0]:
        if id(case.nodes) in seen:
            continue
        seen.add(id(case.nodes))
        a_star = exceptional_alpha(case.ctx)
        ls = solve_level_set(case.ctx, a_star)
        rep = unitarity_report(build(case.nodes, ls))
        dec = herglotz_decompose(case.ctx, a_star, level_set=ls)
        c_err = abs(dec.c * case.nodes.v.sum() - 1.0)
        worst_c = max(worst_c, c_err)
        if (rep.verdict is Verdict.UNITARY or len(ls) != len(case.nodes) - 1
                or not ls.exceptional or c_err > 1e-8):
            failures += 1
    _record(acceptance_log, 2, failures == 0,
            f"{len(seen) - failures}/{len(seen)} instances fail unitarity with N-1 points, "
            f"worst |c sum(v) - 1| {worst_c:.1e}")


def test_criterion_3_circle_unitarity(circle_cases, acceptance_log):
    cases, elapsed = circle_cases
    bad = sum(not _unitary_within(c) or len(c.level_set) != len(c.nodes) for c in cases)
    _record(acceptance_log, 3, bad == 0,
            f"{len(cases) - bad}/{len(cases)} Unitary with N points, {elapsed:.2f}s")


def _nudged(ls, j, circle):
    lam = ls.lambdas.copy()
    # move the point off the locus: radially for the circle, vertically for the line
    lam[j] = lam[j] * (1 + 1e-3) if circle else lam[j] + 1e-3j
    return LevelSet(ls.alpha, lam, ls.weights, ls.exceptional, ls.geometry)


def test_criterion_4_localization(line_cases, circle_cases, acceptance_log):
    rng = np.random.default_rng(SEED + 4)
    checked, failures, missed = 0, [], 0
    for circle, cases in ((False, line_cases[0]), (True, circle_cases[0])):
        for case in cases:
            if not _unitary_within(case):
                continue
            checked += 1
            pts = np.concatenate([case.nodes.gamma, case.level_set.lambdas])
            diameter = float(np.max(np.abs(pts[:, None] - pts[None, :])))
            loc = certify_localization(case.nodes, case.level_set)
            ok = loc.max_deviation <= 1e-9 * diameter
            if circle:
                ok &= (loc.kind is LocusKind.CIRCLE and abs(loc.center) <= 1e-9
                       and abs(loc.radius - 1) <= 1e-9)
            else:
                ok &= loc.kind is LocusKind.LINE
            j = int(rng.integers(len(case.level_set)))
            bad = _nudged(case.level_set, j, circle)
            caught = (unitarity_report(build(case.nodes, bad)).verdict is not Verdict.UNITARY
                      and max_cross_ratio_imag(bad.lambdas, case.nodes.gamma, focus=j) > 1e-6)
            missed += not caught
            ok &= caught
            if not ok:
                failures.append((circle, len(case.nodes)))
    _record(acceptance_log, 4, not failures,
            f"{checked - len(failures)}/{checked} pass; nudge missed {missed} times")


def test_criterion_5_partial_fractions(line_cases, acceptance_log):
    rng = np.random.default_rng(SEED + 5)
    worst = 0.0
    cases = line_cases[0]
    extra = [(c.ctx, exceptional_alpha(c.ctx)) for c in cases[::ALPHAS]]
    for ctx, alpha in [(c.ctx, c.level_set.alpha) for c in cases] + extra:
        dec = herglotz_decompose(ctx, alpha)
        z = rng.uniform(-15, 15, 200) + 1j * rng.uniform(0.01, 10, 200) * rng.choice([-1, 1], 200)
        lhs = 1.0 / (alpha - phi(ctx, z))
        worst = max(worst, float(np.max(np.abs(lhs - dec(z)) / (1 + np.abs(lhs)))))
    _record(acceptance_log, 5, worst <= 1e-9,
            f"worst residual/(1+|LHS|) {worst:.1e} over {len(cases) + len(extra)} level sets")


def test_criterion_6_weights(line_cases, circle_cases, acceptance_log):
    worst = 0.0
    for cases in (line_cases[0], circle_cases[0]):
        for case in cases:
            if not _unitary_within(case):
                continue
            lam = case.level_set.lambdas
            dphi = phi_derivative(case.ctx, lam.real if case.ctx.is_line else lam).real
            worst = max(worst, float(np.max(np.abs(case.level_set.weights * dphi - 1.0))))
    _record(acceptance_log, 6, worst <= 1e-9, f"worst |w phi' - 1| {worst:.1e}")


def test_criterion_7_lattice(acceptance_log):
    devs = {n: lattice_row_deviation(n) for n in (32, 64, 128, 256)}
    ratios = [devs[2 * n] / devs[n] for n in (32, 64, 128)]
    ok = all(r <= 0.6 for r in ratios) and devs[128] <= 0.02
    _record(acceptance_log, 7, ok,
            "central-row deviations "
            + ", ".join(f"N={n}: {d:.2e}" for n, d in devs.items())
            + f"; ratios {', '.join(f'{r:.2f}' for r in ratios)}")


def _spread_circle(rng, n):
    theta = 2 * np.pi * (np.arange(n) + rng.uniform(-0.3, 0.3, n)) / n
    v = rng.uniform(0.5, 1.5, n)
    return WeightedNodeSet.circle(np.exp(1j * theta), 2 * v / v.sum())


def test_criterion_8_clark(acceptance_log):
    t = 2 * np.pi * (np.arange(1000) + 0.5) / 1000
    z = np.exp(1j * t)
    inner_err = max(float(np.max(np.abs(InnerFunction(PotentialContext(roots_of_unity(n).nodes))(z)
                                        - z ** n))) for n in (1, 3, 8))
    rng = np.random.default_rng(SEED + 8)
    worst_off, worst_l2, agree = 0.0, 0.0, True
    for _ in range(10):
        beta = complex(np.exp(1j * rng.uniform(0.05, 2 * np.pi - 0.05)))
        family = [roots_of_unity(n).nodes for n in (1, 3, 8)]
        family.append(_spread_circle(rng, int(rng.integers(2, 17))))
        for nodes in family:
            cb = clark_basis(InnerFunction(PotentialContext(nodes)), beta)
            worst_off = max(worst_off, cb.max_offdiagonal)
            worst_l2 = max(worst_l2, cb.max_l2_mismatch)
            unitary = unitarity_report(build(nodes, cb.level_set)).verdict is Verdict.UNITARY
            agree &= unitary == (cb.max_offdiagonal <= 1e-9)
    ok = inner_err <= 1e-12 and worst_off <= 1e-9 and worst_l2 <= 1e-9 and agree
    _record(acceptance_log, 8, ok,
            f"|I - z^N| {inner_err:.1e}, off-diagonal {worst_off:.1e}, "
            f"l2 mismatch {worst_l2:.1e}, verdicts agree: {agree}")


def test_criterion_9_rkhs(line_cases, circle_cases, acceptance_log):
    rng = np.random.default_rng(SEED + 9)
    worst = {"reproducing": 0.0, "parseval": 0.0, "reconstruct": 0.0, "certificate": 0.0}
    for circle, cases in ((False, line_cases[0]), (True, circle_cases[0])):
        for case in cases:
            if not _unitary_within(case):
                continue
            s, ls = case.nodes, case.level_set
            n = len(s)
            f = SpaceElement(s, rng.normal(size=n) + 1j * rng.normal(size=n))
            if circle:
                z = rng.choice([0.5, 2.0], 5) * np.exp(1j * rng.uniform(0, 2 * np.pi, 5))
            else:
                z = rng.uniform(-12, 12, 5) + 1j * rng.uniform(0.1, 5, 5) * rng.choice([-1, 1], 5)
            fz = evaluate(f, z)
            rep = np.array([inner(f, kernel_vector(s, zi)) for zi in z])
            worst["reproducing"] = max(worst["reproducing"],
                                       float(np.max(np.abs(rep - fz) / (1 + np.abs(fz)))))
            samples = evaluate(f, ls.lambdas)
            worst["parseval"] = max(worst["parseval"],
                                    abs(parseval_sum(samples, ls) / norm(f) ** 2 - 1))
            rec = reconstruct(s, samples, ls, z)
            worst["reconstruct"] = max(worst["reconstruct"],
                                       float(np.max(np.abs(rec - fz) / (1 + np.abs(fz)))))
            worst["certificate"] = max(worst["certificate"],
                                       abs(basis_certificate(s, ls) - case.report.col_gram_dev))
    ok = (max(worst["reproducing"], worst["parseval"], worst["reconstruct"]) <= 1e-9
          and worst["certificate"] <= 1e-12)
    _record(acceptance_log, 9, ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
