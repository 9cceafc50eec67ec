"""Closed-form capacity, code fidelities and the derived thresholds."""

from __future__ import annotations

import math
from dataclasses import dataclass

from memdeph.errormodel import ChannelParams, ParameterError, derived_probs

CODE_NAMES = ("uncoded", "c1", "c2")


@dataclass(frozen=True)
class CapacityPoint:
    params: ChannelParams
    Q: float


@dataclass(frozen=True)
class FidelityPoint:
    code: str
    params: ChannelParams
    Fe: float

    @property
    def Pe(self) -> float:
        return 1.0 - self.Fe


def binary_entropy(q: float) -> float:
    """Shannon entropy in bits of a Bernoulli(q) variable, with 0 log 0 = 0."""
    q = float(q)
    if not 0.0 <= q <= 1.0:
        raise ParameterError(f"q must lie in [0, 1], got {q!r}")
    if q == 0.0 or q == 1.0:
        return 0.0
    return -q * math.log2(q) - (1.0 - q) * math.log2(1.0 - q)


def capacity(params: ChannelParams) -> CapacityPoint:
    """Quantum capacity (qubits per use) of the Markov dephasing channel."""
    d = derived_probs(params)
    q = 1.0 - params.p0 * binary_entropy(d.q0) - params.pz * binary_entropy(d.qz)
    if not -1e-12 <= q <= 1.0 + 1e-12:
        raise ArithmeticError(f"capacity {q!r} outside [0, 1] for {params}")
    return CapacityPoint(params, q)


def fe_memoryless(code: str, p0: float) -> float:
    """Entanglement fidelity of ``code`` on the memoryless channel."""
    if code == "uncoded":
        return p0
    if code == "c1":
        return 3 * p0**2 - 2 * p0**3
    if code == "c2":
        return p0**2 + (1 - p0) ** 2
    raise ValueError(f"unknown code {code!r}; choose from {CODE_NAMES}")


def fe_c1_terms(params: ChannelParams) -> float:
    """c1 fidelity as the sum of the four successful trajectories.

    No flip, or exactly one flip on the first, second or third use.
    """
    d = derived_probs(params)
    p0, pz = params.p0, params.pz
    return p0 * d.q0**2 + p0 * d.q0 * d.r0 + p0 * d.r0 * d.rz + pz * d.rz * d.q0


def fe_c1_compact(params: ChannelParams) -> float:
    f0 = fe_memoryless("c1", params.p0)
    mu = params.mu
    return f0 - mu * (2 - mu) * (f0 - params.p0)


def fe_c2_terms(params: ChannelParams) -> float:
    d = derived_probs(params)
    return params.p0 * d.q0 + params.pz * d.qz


def fe_c2_compact(params: ChannelParams) -> float:
    f0 = fe_memoryless("c2", params.p0)
    return f0 + params.mu * (1 - f0)


def fe_closed(code: str, params: ChannelParams) -> FidelityPoint:
    if code == "uncoded":
        fe = params.p0
    elif code == "c1":
        fe = fe_c1_terms(params)
    elif code == "c2":
        fe = fe_c2_terms(params)
    else:
        raise ValueError(f"unknown code {code!r}; choose from {CODE_NAMES}")
    return FidelityPoint(code, params, fe)


def pe_small_eps(code: str, eps: float, mu: float) -> float:
    """Leading-order error probability for a small flip probability ``eps``.

    Only meaningful for ``eps << 1``. For c1 the first-order term
    ``mu (2 - mu) eps`` vanishes at ``mu = 0``; there the second-order
    memoryless value ``3 eps**2`` is returned instead.
    """
    eps = float(eps)
    mu = float(mu)
    if not 0.0 <= eps <= 1.0 or not 0.0 <= mu <= 1.0:
        raise ParameterError(f"eps and mu must lie in [0, 1], got {eps!r}, {mu!r}")
    if code == "uncoded":
        return eps
    if code == "c1":
        if mu == 0.0:
            return 3 * eps**2
        return mu * (2 - mu) * eps
    if code == "c2":
        return 2 * (1 - mu) * eps
    raise ValueError(f"unknown code {code!r}; choose from {CODE_NAMES}")


def c2_beats_uncoded_threshold(p0: float) -> float:
    """Memory factor above which c2 outperforms sending the qubit bare.

    Negative values of ``(2 p0 - 1) / (2 p0)`` (``p0 < 1/2``) are clamped to
    0: c2 then wins for every ``mu``.
    """
    p0 = float(p0)
    if not 0.0 < p0 <= 1.0:
        raise ParameterError(f"p0 must lie in (0, 1], got {p0!r}")
    return max((2 * p0 - 1) / (2 * p0), 0.0)


def c2_beats_c1_crossover() -> float:
    """Small-eps crossover: root of ``mu (2 - mu) = 2 (1 - mu)`` in [0, 1]."""
    return 2.0 - math.sqrt(2.0)


def bisect_root(f, lo: float, hi: float, tol: float = 1e-13, max_iter: int = 200) -> float:
    """Plain bisection for a sign change of ``f`` on ``[lo, hi]``."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0 or hi - lo < tol:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def exact_crossover(p0: float, fe=None) -> float:
    """Memory factor where c1 and c2 reach equal fidelity at fixed ``p0``.

    ``fe(code, params) -> float`` defaults to the closed forms.
    """
    if fe is None:
        fe = lambda code, params: fe_closed(code, params).Fe  # noqa: E731
    return bisect_root(
        lambda mu: fe("c2", ChannelParams(p0, mu)) - fe("c1", ChannelParams(p0, mu)), 0.0, 1.0
    )
