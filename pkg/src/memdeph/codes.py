"""Encoders and decoders for the three transmission schemes.

Register layout is ``[R, Q, A1, A2, ...]``: the reference qubit ``R`` never
passes through the channel; ``Q`` and the ancillas are sent in order, so
channel use ``k`` hits qubit ``k + 1``.

* ``uncoded`` sends ``Q`` alone.
* ``c1`` is the three-qubit phase-flip code ``|0> -> |+++>, |1> -> |--->``.
  Decoding undoes the Hadamards, computes the two syndromes into the
  ancillas with CNOTs and corrects ``Q`` with a Toffoli, all coherently.
* ``c2`` stores the qubit in ``span{|01>, |10>}``, which both ``I I`` and
  ``Z Z`` leave alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from memdeph import qsim

# gates as (matrix, qubits) on the Q+A register; index 0 is Q
Circuit = tuple


@dataclass(frozen=True)
class CodeSpec:
    name: str
    n_physical: int
    n_ancilla: int
    encoder: Circuit
    decoder: Circuit

    @property
    def n_qubits(self) -> int:
        """Total register size including the reference qubit."""
        return 1 + self.n_physical

    @property
    def channel_targets(self) -> tuple[int, ...]:
        return tuple(range(1, 1 + self.n_physical))


UNCODED = CodeSpec("uncoded", 1, 0, encoder=(), decoder=())

C1 = CodeSpec(
    "c1",
    n_physical=3,
    n_ancilla=2,
    encoder=(
        (qsim.CNOT, (0, 1)),
        (qsim.CNOT, (0, 2)),
        (qsim.H, (0,)),
        (qsim.H, (1,)),
        (qsim.H, (2,)),
    ),
    decoder=(
        (qsim.H, (0,)),
        (qsim.H, (1,)),
        (qsim.H, (2,)),
        (qsim.CNOT, (0, 1)),
        (qsim.CNOT, (0, 2)),
        (qsim.TOFFOLI, (1, 2, 0)),
    ),
)

C2 = CodeSpec(
    "c2",
    n_physical=2,
    n_ancilla=1,
    encoder=(
        (qsim.X, (1,)),
        (qsim.CNOT, (0, 1)),
    ),
    decoder=((qsim.CNOT, (0, 1)),),
)

CODES = {code.name: code for code in (UNCODED, C1, C2)}


def get_code(code) -> CodeSpec:
    if isinstance(code, CodeSpec):
        return code
    try:
        return CODES[code]
    except KeyError:
        raise ValueError(f"unknown code {code!r}; choose from {sorted(CODES)}") from None


def circuit_unitary(circuit: Circuit, n_register: int, offset: int = 1) -> np.ndarray:
    """Matrix of ``circuit`` on a register of ``n_register`` qubits.

    Circuit qubit ``j`` maps to register qubit ``j + offset`` (the default
    skips the reference qubit).
    """
    u = np.eye(1 << n_register, dtype=complex)
    for gate, qubits in circuit:
        u = qsim.expand_operator(gate, [q + offset for q in qubits], n_register) @ u
    return u


def encoder_unitary(code) -> np.ndarray:
    code = get_code(code)
    return circuit_unitary(code.encoder, code.n_qubits)


def decoder_unitary(code) -> np.ndarray:
    code = get_code(code)
    return circuit_unitary(code.decoder, code.n_qubits)


def attach_ancillas(psi_rq, code) -> np.ndarray:
    """``|psi>_RQ (x) |0...0>_A``."""
    code = get_code(code)
    return np.kron(np.asarray(psi_rq, dtype=complex), qsim.basis_state([0] * code.n_ancilla))


def _check_register(state, code: CodeSpec) -> None:
    n = qsim.n_qubits(state)
    if n != code.n_qubits:
        raise ValueError(
            f"code {code.name} needs {code.n_qubits} qubits (R, Q and {code.n_ancilla} ancillas), got {n}"
        )


def encode(code, state) -> np.ndarray:
    """Encode an R+Q+A ket whose ancillas are all in ``|0>``."""
    code = get_code(code)
    state = np.asarray(state, dtype=complex)
    if not qsim.is_ket(state):
        raise ValueError("encode expects a state vector")
    _check_register(state, code)
    n_anc = 1 << code.n_ancilla
    # amplitudes with any ancilla bit set must vanish
    if np.max(np.abs(state.reshape(-1, n_anc)[:, 1:]), initial=0.0) > qsim.ATOL:
        raise ValueError("ancilla qubits are not in the ground state")
    out = state
    for gate, qubits in code.encoder:
        out = qsim.apply_unitary(out, gate, [q + 1 for q in qubits], check_unitary=False)
    return out


def decode(code, state) -> np.ndarray:
    """Run the decoding circuit on R+Q+A, then trace out the ancillas."""
    code = get_code(code)
    state = np.asarray(state, dtype=complex)
    _check_register(state, code)
    if qsim.is_ket(state):
        state = qsim.density(state)
    out = state
    for gate, qubits in code.decoder:
        out = qsim.apply_unitary(out, gate, [q + 1 for q in qubits], check_unitary=False)
    return qsim.partial_trace(out, [0, 1])
