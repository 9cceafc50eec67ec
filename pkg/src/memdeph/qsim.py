"""Small dense state-vector / density-matrix simulator.

States are plain numpy arrays: a ket of length ``2**n`` or a ``2**n x 2**n``
density matrix. Qubit 0 is the most significant bit of the basis index,
so ``|q0 q1 ... q_{n-1}>`` has index ``sum(q_k << (n - 1 - k))``.
"""

from __future__ import annotations

import numpy as np

ATOL = 1e-12

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CNOT = np.array(
    [[1, 0, 0, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0]],
    dtype=complex,
)
TOFFOLI = np.eye(8, dtype=complex)
TOFFOLI[6:, 6:] = X

PAULI = {"I": I2, "Z": Z}


def n_qubits(state) -> int:
    dim = state.shape[0]
    n = int(dim).bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    if state.ndim == 2 and state.shape[1] != dim:
        raise ValueError(f"density matrix must be square, got shape {state.shape}")
    if state.ndim not in (1, 2):
        raise ValueError("state must be a vector or a square matrix")
    return n


def is_ket(state) -> bool:
    return np.ndim(state) == 1


def basis_state(bits) -> np.ndarray:
    """Computational basis ket ``|b0 b1 ...>``."""
    bits = list(bits)
    psi = np.zeros(1 << len(bits), dtype=complex)
    psi[int("".join(str(int(b)) for b in bits), 2) if bits else 0] = 1.0
    return psi


def kron(*ops) -> np.ndarray:
    out = np.array([[1.0 + 0j]]) if np.ndim(ops[0]) == 2 else np.array([1.0 + 0j])
    for op in ops:
        out = np.kron(out, op)
    return out


def bell_state() -> np.ndarray:
    """(|00> + |11>)/sqrt(2) on (reference, system)."""
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1 / np.sqrt(2)
    return psi


def density(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def check_state_vector(psi, atol: float = ATOL) -> None:
    n_qubits(psi)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > atol:
        raise ValueError(f"state vector norm is {norm!r}, expected 1")


def check_density_matrix(rho, atol: float = ATOL, psd_tol: float = 1e-10) -> None:
    """Raise ``ValueError`` unless ``rho`` is Hermitian, unit-trace and PSD."""
    n_qubits(rho)
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > atol:
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -psd_tol:
        raise ValueError("density matrix has a negative eigenvalue")


def _check_targets(targets, n: int) -> list[int]:
    targets = [int(t) for t in targets]
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate qubit indices in {targets}")
    for t in targets:
        if not 0 <= t < n:
            raise ValueError(f"qubit index {t} out of range for {n} qubits")
    return targets


def is_unitary(op, atol: float = ATOL) -> bool:
    op = np.asarray(op)
    return op.ndim == 2 and op.shape[0] == op.shape[1] and np.allclose(
        op.conj().T @ op, np.eye(op.shape[0]), atol=atol, rtol=0
    )


def _apply_left(tensor, op, targets, n):
    # contract op with the listed leading-axis indices of an (2,)*n (+ rest) tensor
    m = len(targets)
    t = np.moveaxis(tensor, targets, list(range(m)))
    shape = t.shape
    t = op @ t.reshape(1 << m, -1)
    t = t.reshape(shape)
    return np.moveaxis(t, list(range(m)), targets)


def expand_operator(op, targets, n: int) -> np.ndarray:
    """Full ``2**n`` matrix of ``op`` acting on ``targets`` (in that order)."""
    targets = _check_targets(targets, n)
    if op.shape != (1 << len(targets), 1 << len(targets)):
        raise ValueError(f"operator shape {op.shape} does not match {len(targets)} targets")
    eye = np.eye(1 << n, dtype=complex).reshape((2,) * n + (1 << n,))
    return _apply_left(eye, op, targets, n).reshape(1 << n, 1 << n)


def apply_unitary(state, op, targets, check_unitary: bool = True):
    """Apply ``op`` to the qubits ``targets``.

    Kets are multiplied, density matrices conjugated. ``targets`` lists the
    qubits ``op`` acts on, first entry most significant within ``op``.
    """
    op = np.asarray(op, dtype=complex)
    n = n_qubits(state)
    targets = _check_targets(targets, n)
    m = len(targets)
    if op.shape != (1 << m, 1 << m):
        raise ValueError(f"operator shape {op.shape} does not match {m} target qubits")
    if check_unitary and not is_unitary(op):
        raise ValueError("operator is not unitary")
    state = np.asarray(state, dtype=complex)
    if is_ket(state):
        t = _apply_left(state.reshape((2,) * n), op, targets, n)
        return t.reshape(1 << n)
    dim = 1 << n
    t = _apply_left(state.reshape((2,) * n + (dim,)), op, targets, n).reshape(dim, dim)
    # right multiplication by op^dagger == left multiplication of the adjoint
    t = _apply_left(t.conj().T.reshape((2,) * n + (dim,)), op, targets, n).reshape(dim, dim)
    return t.conj().T


def error_operator(seq) -> np.ndarray:
    """Tensor product of the Pauli operators named in ``seq``."""
    return kron(*(PAULI[label] for label in seq))


def apply_error_sequence(state, seq, targets):
    """Apply the Pauli string ``seq`` (``"I"``/``"Z"`` labels) to ``targets``."""
    labels = list(seq)
    n = n_qubits(state)
    targets = _check_targets(targets, n)
    if len(labels) != len(targets):
        raise ValueError(f"{len(labels)} labels for {len(targets)} target qubits")
    out = np.asarray(state, dtype=complex)
    for label, t in zip(labels, targets):
        if label not in PAULI:
            raise ValueError(f"unknown Pauli label {label!r}")
        if label != "I":
            out = apply_unitary(out, PAULI[label], [t], check_unitary=False)
    return out


def apply_channel(rho, terms, targets):
    """Mixture ``sum_k p_k B_k rho B_k^dagger`` over ``(seq, p_k)`` pairs."""
    out = np.zeros_like(np.asarray(rho, dtype=complex))
    for seq, p in terms:
        out = out + p * apply_error_sequence(rho, seq, targets)
    return out


def partial_trace(rho, keep) -> np.ndarray:
    """Reduced density matrix on the qubits in ``keep`` (kept in ascending order)."""
    rho = np.asarray(rho, dtype=complex)
    if is_ket(rho):
        rho = density(rho)
    n = n_qubits(rho)
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must name at least one qubit")
    _check_targets(keep, n)
    drop = [k for k in range(n) if k not in keep]
    t = rho.reshape((2,) * (2 * n))
    # trace out highest indices first so the remaining axis numbers stay valid
    for count, q in enumerate(sorted(drop, reverse=True)):
        cur = n - count
        t = np.trace(t, axis1=q, axis2=q + cur)
    dk = 1 << len(keep)
    return t.reshape(dk, dk)


def fidelity_with_pure(psi, rho, atol: float = ATOL) -> float:
    """``<psi| rho |psi>``, checked real and clamped to [0, 1]."""
    psi = np.asarray(psi, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if is_ket(rho):
        rho = density(rho)
    if rho.shape != (psi.shape[0], psi.shape[0]):
        raise ValueError(f"dimension mismatch: psi {psi.shape}, rho {rho.shape}")
    val = np.vdot(psi, rho @ psi)
    if abs(val.imag) > atol:
        raise ValueError(f"fidelity has imaginary part {val.imag!r}")
    if val.real < -atol or val.real > 1 + atol:
        raise ValueError(f"fidelity {val.real!r} outside [0, 1]")
    return float(min(max(val.real, 0.0), 1.0))
