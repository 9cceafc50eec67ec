"""Entanglement fidelity by exact trajectory enumeration and by Monte Carlo.

Both estimators push the reference+system state through the real
encode / channel / decode pipeline and never look at the closed forms, so
they serve as independent checks of :mod:`memdeph.analysis`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from memdeph import codes, kernels, qsim
from memdeph.analysis import fe_closed
from memdeph.errormodel import ChannelParams, enumerate_sequences

MIN_SAMPLES = 100
# samples per independent RNG substream
MC_CHUNK = 1 << 16


@dataclass(frozen=True)
class FidelityReport:
    code: str
    params: ChannelParams
    fe_closed: float
    fe_exact: float
    fe_mc: Optional[float] = None
    mc_stderr: Optional[float] = None
    n_samples: int = 0
    seed: Optional[int] = None

    @property
    def abs_discrepancy_closed_vs_exact(self) -> float:
        return abs(self.fe_closed - self.fe_exact)


@dataclass(frozen=True)
class _Pipeline:
    encoded: np.ndarray
    decoder: np.ndarray
    ref: np.ndarray
    qubit_masks: np.ndarray


def _pipeline(code, psi_rq=None) -> _Pipeline:
    code = codes.get_code(code)
    ref = qsim.bell_state() if psi_rq is None else np.asarray(psi_rq, dtype=complex)
    qsim.check_state_vector(ref)
    if ref.shape != (4,):
        raise ValueError("the reference+system state must be a two-qubit ket")
    encoded = codes.encode(code, codes.attach_ancillas(ref, code))
    n = code.n_qubits
    masks = np.array([1 << (n - 1 - t) for t in code.channel_targets], dtype=np.int64)
    return _Pipeline(encoded, codes.decoder_unitary(code), ref, masks)


@lru_cache(maxsize=None)
def _bell_pipeline(name: str) -> _Pipeline:
    return _pipeline(name)


def trajectory_fidelity(code, seq, psi_rq=None, method: str = "pure") -> float:
    """Fidelity with ``psi_rq`` after a single error sequence.

    ``method="pure"`` runs the ket through the trajectory kernel;
    ``method="density"`` conjugates the full density matrix with :mod:`qsim`.
    """
    code = codes.get_code(code)
    labels = list(seq)
    if len(labels) != code.n_physical:
        raise ValueError(f"code {code.name} uses {code.n_physical} channel uses, got {len(labels)} labels")
    if method == "density":
        ref = qsim.bell_state() if psi_rq is None else np.asarray(psi_rq, dtype=complex)
        rho = qsim.density(codes.encode(code, codes.attach_ancillas(ref, code)))
        rho = qsim.apply_error_sequence(rho, labels, code.channel_targets)
        return qsim.fidelity_with_pure(ref, codes.decode(code, rho))
    if method != "pure":
        raise ValueError(f"unknown method {method!r}")
    pipe = _bell_pipeline(code.name) if psi_rq is None else _pipeline(code, psi_rq)
    bits = np.array([[label == "Z" for label in labels]], dtype=np.int8)
    return float(kernels.trajectory_fidelities(bits, pipe.encoded, pipe.decoder, pipe.ref, pipe.qubit_masks)[0])


@lru_cache(maxsize=None)
def _bell_trajectory_table(name: str) -> tuple[float, ...]:
    # trajectory fidelities do not depend on (p0, mu); enumeration order matches enumerate_sequences
    code = codes.get_code(name)
    pipe = _bell_pipeline(name)
    n = code.n_physical
    idx = np.arange(1 << n)
    bits = ((idx[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1).astype(np.int8)
    fids = kernels.trajectory_fidelities(bits, pipe.encoded, pipe.decoder, pipe.ref, pipe.qubit_masks)
    return tuple(float(f) for f in fids)


def fe_exact(code, params: ChannelParams, method: str = "pure", psi_rq=None) -> float:
    """Exact entanglement fidelity as a probability-weighted sum over all trajectories.

    ``method`` picks the per-trajectory simulator (see
    :func:`trajectory_fidelity`). Terms are summed in enumeration order
    with ``math.fsum``.
    """
    code = codes.get_code(code)
    entries = enumerate_sequences(code.n_physical, params)
    if method == "pure" and psi_rq is None:
        table = _bell_trajectory_table(code.name)
        return math.fsum(p * f for (_, p), f in zip(entries, table))
    return math.fsum(p * trajectory_fidelity(code, seq, psi_rq, method) for seq, p in entries)


def fe_ensemble(code, params: ChannelParams, psi_rq=None) -> float:
    """Fidelity from the mixed channel output, decoded once.

    Builds the whole N-use channel output as a Kraus mixture and then
    decodes, rather than averaging per-trajectory fidelities.
    """
    code = codes.get_code(code)
    ref = qsim.bell_state() if psi_rq is None else np.asarray(psi_rq, dtype=complex)
    rho = qsim.density(codes.encode(code, codes.attach_ancillas(ref, code)))
    entries = enumerate_sequences(code.n_physical, params)
    rho = qsim.apply_channel(rho, entries, code.channel_targets)
    return qsim.fidelity_with_pure(ref, codes.decode(code, rho))


def _substreams(seed, n_chunks: int):
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    return [np.random.default_rng(child) for child in children]


def mc_trajectory_fidelities(code, params: ChannelParams, n_samples: int, seed: int) -> np.ndarray:
    """Per-trajectory fidelities for ``n_samples`` sampled error sequences.

    Chunk ``k`` of :data:`MC_CHUNK` samples draws from the ``k``-th spawned
    child of ``SeedSequence(seed)``, so results depend only on the seed.
    """
    code = codes.get_code(code)
    if seed is None:
        raise ValueError("Monte Carlo estimation requires an explicit seed")
    n_samples = int(n_samples)
    pipe = _bell_pipeline(code.name)
    n_chunks = max(1, -(-n_samples // MC_CHUNK))
    out = np.empty(n_samples, dtype=np.float64)
    for k, rng in enumerate(_substreams(seed, n_chunks)):
        lo = k * MC_CHUNK
        hi = min(n_samples, lo + MC_CHUNK)
        uniforms = rng.random((hi - lo, code.n_physical))
        bits = kernels.sample_markov_bits(uniforms, params.pz, params.mu)
        out[lo:hi] = kernels.trajectory_fidelities(
            bits, pipe.encoded, pipe.decoder, pipe.ref, pipe.qubit_masks
        )
    return out


def fe_monte_carlo(code, params: ChannelParams, n_samples: int, seed: int) -> tuple[float, float]:
    """Monte Carlo estimate of the entanglement fidelity and its standard error."""
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be at least {MIN_SAMPLES}, got {n_samples}")
    fids = mc_trajectory_fidelities(code, params, n_samples, seed)
    estimate = float(np.mean(fids))
    stderr = float(np.std(fids, ddof=1) / math.sqrt(n_samples))
    return estimate, stderr


def fidelity_report(code, params: ChannelParams, n_samples: int = 0, seed=None) -> FidelityReport:
    """Closed-form, exact and (when ``n_samples`` > 0) Monte Carlo fidelities side by side."""
    name = codes.get_code(code).name
    closed = fe_closed(name, params).Fe
    exact = fe_exact(name, params)
    mc = stderr = None
    if n_samples:
        mc, stderr = fe_monte_carlo(name, params, n_samples, seed)
    return FidelityReport(name, params, closed, exact, mc, stderr, int(n_samples), seed)

