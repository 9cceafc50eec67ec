"""Markov-chain distribution over Pauli dephasing error sequences.

Each channel use applies either the identity ``I`` or a phase flip ``Z``.
The label of the first use is drawn from the stationary distribution
``(p0, pz)``; every following label repeats the previous one with extra
probability ``mu``::

    p(next | prev) = (1 - mu) * p(next) + mu * [next == prev]

``mu = 0`` is the memoryless channel, ``mu = 1`` applies the same operator
to every use.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from memdeph import kernels

LABELS = ("I", "Z")
MAX_ENUMERATION_USES = 20


class ParameterError(ValueError):
    """Raised for probabilities outside [0, 1] or malformed inputs."""


def _check_probability(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise ParameterError(f"{name} must lie in [0, 1], got {value!r}")
    return value


@dataclass(frozen=True)
class ChannelParams:
    """Stationary no-error probability ``p0`` and memory factor ``mu``."""

    p0: float
    mu: float

    def __post_init__(self):
        object.__setattr__(self, "p0", _check_probability("p0", self.p0))
        object.__setattr__(self, "mu", _check_probability("mu", self.mu))

    @property
    def pz(self) -> float:
        return 1.0 - self.p0

    @property
    def eps(self) -> float:
        """Single-use phase-flip probability, ``1 - p0``."""
        return 1.0 - self.p0

    def stationary(self, label: str) -> float:
        _check_label(label)
        return self.p0 if label == "I" else self.pz


@dataclass(frozen=True)
class DerivedProbs:
    """Probabilities that two consecutive uses get the same (q) or a different (r) operator.

    ``q0``/``r0`` are conditioned on the previous use being ``I``,
    ``qz``/``rz`` on it being ``Z``.
    """

    q0: float
    qz: float
    r0: float
    rz: float


def _check_label(label: str) -> None:
    if label not in LABELS:
        raise ParameterError(f"label must be one of {LABELS}, got {label!r}")


@dataclass(frozen=True)
class ErrorSequence:
    """Ordered Pauli labels, one per channel use."""

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        if not labels:
            raise ParameterError("an error sequence needs at least one label")
        for label in labels:
            _check_label(label)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_string(cls, text: str) -> "ErrorSequence":
        return cls(tuple(text.upper()))

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "ErrorSequence":
        return cls(tuple("Z" if b else "I" for b in bits))

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __getitem__(self, index):
        return self.labels[index]

    def __str__(self) -> str:
        return "".join(self.labels)

    @property
    def bits(self) -> tuple[int, ...]:
        """1 where a phase flip is applied, 0 for identity."""
        return tuple(int(label == "Z") for label in self.labels)

    @property
    def n_flips(self) -> int:
        return sum(self.bits)


def _as_sequence(seq) -> ErrorSequence:
    if isinstance(seq, ErrorSequence):
        return seq
    if isinstance(seq, str):
        return ErrorSequence.from_string(seq)
    return ErrorSequence(tuple(seq))


def derived_probs(params: ChannelParams) -> DerivedProbs:
    """Return ``q0, qz, r0, rz`` for the given channel."""
    mu = params.mu
    q0 = (1.0 - mu) * params.p0 + mu
    qz = (1.0 - mu) * params.pz + mu
    return DerivedProbs(q0=q0, qz=qz, r0=1.0 - q0, rz=1.0 - qz)


def conditional_prob(prev: str, next: str, params: ChannelParams) -> float:
    """Probability of ``next`` on a use given ``prev`` on the use before."""
    _check_label(prev)
    _check_label(next)
    same = 1.0 if prev == next else 0.0
    return (1.0 - params.mu) * params.stationary(next) + params.mu * same


def sequence_prob(seq, params: ChannelParams) -> float:
    """Joint probability of a whole error sequence under the Markov chain."""
    seq = _as_sequence(seq)
    prob = params.stationary(seq[0])
    for prev, nxt in zip(seq.labels, seq.labels[1:]):
        prob *= conditional_prob(prev, nxt, params)
    return prob


def enumerate_sequences(n_uses: int, params: ChannelParams) -> list[tuple[ErrorSequence, float]]:
    """All ``2**n_uses`` sequences with their probabilities.

    Sequences come in lexicographic order with ``I < Z`` and the first use
    most significant, so the order never depends on the parameters.
    """
    if int(n_uses) != n_uses or n_uses < 1:
        raise ParameterError(f"number of uses must be a positive integer, got {n_uses!r}")
    if n_uses > MAX_ENUMERATION_USES:
        raise ParameterError(
            f"refusing to enumerate 2**{n_uses} sequences (limit is N <= {MAX_ENUMERATION_USES})"
        )
    out = []
    for labels in itertools.product(LABELS, repeat=int(n_uses)):
        seq = ErrorSequence(labels)
        out.append((seq, sequence_prob(seq, params)))
    return out


def total_probability(entries) -> float:
    return math.fsum(p for _, p in entries)


def marginal(entries, position: int) -> tuple[float, float]:
    """Marginal ``(P[I], P[Z])`` at one position of an enumerated distribution."""
    p_i = math.fsum(p for seq, p in entries if seq[position] == "I")
    p_z = math.fsum(p for seq, p in entries if seq[position] == "Z")
    return p_i, p_z


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        raise ParameterError("a seed is required for reproducible sampling")
    return np.random.default_rng(seed)


def sample_bits(n_uses: int, n_samples: int, params: ChannelParams, rng) -> np.ndarray:
    """Draw ``n_samples`` sequences by ancestral sampling.

    Returns an ``(n_samples, n_uses)`` int8 array, 1 marking a phase flip.
    """
    if n_uses < 1:
        raise ParameterError("number of uses must be >= 1")
    rng = make_rng(rng)
    uniforms = rng.random((int(n_samples), int(n_uses)))
    return kernels.sample_markov_bits(uniforms, params.pz, params.mu)


def sample_sequence(n_uses: int, params: ChannelParams, rng) -> ErrorSequence:
    """Draw a single error sequence; ``rng`` is a seed or a numpy Generator."""
    bits = sample_bits(n_uses, 1, params, rng)[0]
    return ErrorSequence.from_bits(bits)
