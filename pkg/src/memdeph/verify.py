"""Self-checks run by ``memdeph verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from memdeph import analysis, engine
from memdeph.errormodel import ChannelParams, enumerate_sequences, marginal, total_probability


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    limit: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.value:.3e} (limit {self.limit:.1e})"


def check_oracle_grid(points: int = 21, tol: float = 1e-12) -> CheckResult:
    worst = 0.0
    for p0 in np.linspace(0.0, 1.0, points):
        for mu in np.linspace(0.0, 1.0, points):
            params = ChannelParams(p0, mu)
            for code in analysis.CODE_NAMES:
                diff = abs(engine.fe_exact(code, params) - analysis.fe_closed(code, params).Fe)
                worst = max(worst, diff)
    return CheckResult(f"max |fe_exact - fe_closed| on {points}x{points} grid", worst <= tol, worst, tol)


def check_stationarity(n_uses: int = 3, tol: float = 1e-12) -> CheckResult:
    worst = 0.0
    for p0 in (0.1, 0.6, 0.9, 0.999):
        for mu in (0.0, 0.2, 0.7, 1.0):
            params = ChannelParams(p0, mu)
            entries = enumerate_sequences(n_uses, params)
            worst = max(worst, abs(total_probability(entries) - 1.0))
            for k in range(n_uses):
                p_i, p_z = marginal(entries, k)
                worst = max(worst, abs(p_i - params.p0), abs(p_z - params.pz))
    return CheckResult(f"normalisation and stationary marginals (N={n_uses})", worst <= tol, worst, tol)


def check_capacity_endpoints(tol: float = 1e-12) -> list[CheckResult]:
    grid = np.linspace(0.0, 1.0, 101)
    at_one = max(abs(analysis.capacity(ChannelParams(p0, 1.0)).Q - 1.0) for p0 in grid)
    at_zero = max(
        abs(analysis.capacity(ChannelParams(p0, 0.0)).Q - (1.0 - analysis.binary_entropy(p0))) for p0 in grid
    )
    return [
        CheckResult("capacity Q(mu=1) = 1", at_one == 0.0, at_one, 0.0),
        CheckResult("capacity Q(mu=0) = 1 - H(p0)", at_zero <= tol, at_zero, tol),
    ]


def check_monotonicity(points: int = 1001) -> list[CheckResult]:
    mus = np.linspace(0.0, 1.0, points)
    worst_q = 0.0
    worst_c1 = 0.0
    for p0 in (0.6, 0.9, 0.999):
        qs = np.array([analysis.capacity(ChannelParams(p0, mu)).Q for mu in mus])
        fe = np.array([analysis.fe_closed("c1", ChannelParams(p0, mu)).Fe for mu in mus])
        worst_q = max(worst_q, float(np.max(-np.diff(qs), initial=0.0)))
        worst_c1 = max(worst_c1, float(np.max(np.diff(fe), initial=0.0)))
    return [
        CheckResult("capacity non-decreasing in mu (largest drop)", worst_q <= 0.0, worst_q, 0.0),
        CheckResult("c1 fidelity non-increasing in mu (largest rise)", worst_c1 <= 0.0, worst_c1, 0.0),
    ]


def check_thresholds(tol: float = 1e-9) -> list[CheckResult]:
    worst = 0.0
    for p0 in (0.6, 0.9, 0.999):
        root = analysis.bisect_root(
            lambda mu: analysis.fe_closed("c2", ChannelParams(p0, mu)).Fe - p0, 0.0, 1.0
        )
        worst = max(worst, abs(root - analysis.c2_beats_uncoded_threshold(p0)))
    mu_x = analysis.c2_beats_c1_crossover()
    residual = abs(mu_x * (2 - mu_x) - 2 * (1 - mu_x))
    shift = abs(analysis.exact_crossover(1 - 1e-3, fe=engine.fe_exact) - mu_x)
    return [
        CheckResult("c2-vs-uncoded threshold by bisection", worst <= tol, worst, tol),
        CheckResult("small-eps crossover residual", residual <= 1e-12, residual, 1e-12),
        CheckResult("exact crossover shift at eps=1e-3", shift <= 5e-3, shift, 5e-3),
    ]


def run_all() -> list[CheckResult]:
    results = [check_oracle_grid(), check_stationarity()]
    results += check_capacity_endpoints()
    results += check_monotonicity()
    results += check_thresholds()
    return results


def all_passed(results) -> bool:
    return all(r.passed for r in results) and not any(math.isnan(r.value) for r in results)
