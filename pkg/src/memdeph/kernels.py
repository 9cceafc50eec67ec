"""Hot loops for Monte Carlo sampling and trajectory evaluation.

Every kernel has a numba implementation and a pure-numpy one with the same
signature. The numba path is used when numba imports and the environment
variable ``MEMDEPH_DISABLE_NUMBA`` is unset (or ``0``); setting it to ``1``
forces the numpy path. Both paths consume the same uniforms, so sampled
sequences are identical across backends.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

_DISABLED = os.environ.get("MEMDEPH_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _DISABLED
BACKEND = "numba" if USE_NUMBA else "numpy"

# rows per block in the numpy trajectory kernel; bounds temporary memory
_NUMPY_BLOCK = 1 << 15


def sample_markov_bits_numpy(uniforms, pz, mu):
    n, length = uniforms.shape
    out = np.empty((n, length), dtype=np.int8)
    if length == 0:
        return out
    out[:, 0] = uniforms[:, 0] < pz
    # P(Z | prev) is (1 - mu) pz + mu when prev = Z and (1 - mu) pz otherwise
    base = (1.0 - mu) * pz
    for k in range(1, length):
        thresh = base + mu * out[:, k - 1]
        out[:, k] = uniforms[:, k] < thresh
    return out


def project_decoder(decoder, ref):
    """Rows ``(<ref| (x) <a|) U_dec`` for every ancilla basis state ``a``.

    Applying this ``(d_anc, d)`` matrix to a noisy encoded ket gives the
    overlaps of the decoded state with ``ref`` on the leading qubits.
    """
    d = decoder.shape[0]
    r = ref.shape[0]
    return np.einsum("j,jab->ab", ref.conj(), decoder.reshape(r, d // r, d))


def trajectory_fidelities_numpy(bits, encoded, decoder, ref, qubit_masks, scale=1.0):
    """Bell-reference fidelity of each trajectory, computed as pure states.

    ``bits``: (n, N) flips; ``encoded``: (d,) state after encoding;
    ``decoder``: (d, d) unitary; ``ref``: (r,) reference state on the kept
    leading qubits; ``qubit_masks``: (N,) basis-index bit masks of the
    noisy qubits; ``scale`` divides out the stored norms of ``ref`` and
    ``encoded`` so rounding in them does not bias the fidelity.
    """
    d = encoded.shape[0]
    basis = np.arange(d, dtype=np.int64)
    # which basis states carry a 1 on each noisy qubit
    occupancy = ((basis[None, :] & qubit_masks[:, None]) != 0).astype(np.int64)
    proj = project_decoder(decoder, ref)
    n = bits.shape[0]
    out = np.empty(n, dtype=np.float64)
    for start in range(0, n, _NUMPY_BLOCK):
        block = bits[start:start + _NUMPY_BLOCK].astype(np.int64)
        signs = 1.0 - 2.0 * ((block @ occupancy) & 1)
        overlaps = (signs * encoded[None, :]) @ proj.T
        out[start:start + _NUMPY_BLOCK] = scale * np.sum(np.abs(overlaps) ** 2, axis=1)
    return np.clip(out, 0.0, 1.0)


if HAVE_NUMBA:
    _JIT = {"nogil": True, "cache": True}

    @numba.njit(**_JIT)
    def sample_markov_bits_numba(uniforms, pz, mu):
        n, length = uniforms.shape
        out = np.empty((n, length), dtype=np.int8)
        base = (1.0 - mu) * pz
        for i in range(n):
            if length == 0:
                continue
            prev = 1 if uniforms[i, 0] < pz else 0
            out[i, 0] = prev
            for k in range(1, length):
                thresh = base + mu * prev
                prev = 1 if uniforms[i, k] < thresh else 0
                out[i, k] = prev
        return out

    @numba.njit(**_JIT)
    def trajectory_fidelities_numba(bits, encoded, decoder, ref, qubit_masks, scale=1.0):
        n, length = bits.shape
        d = encoded.shape[0]
        r = ref.shape[0]
        n_anc = d // r
        proj = np.zeros((n_anc, d), dtype=np.complex128)
        for a in range(n_anc):
            for j in range(r):
                cj = np.conj(ref[j])
                for col in range(d):
                    proj[a, col] += cj * decoder[j * n_anc + a, col]
        state = np.empty(d, dtype=np.complex128)
        out = np.empty(n, dtype=np.float64)
        for i in range(n):
            mask = 0
            for k in range(length):
                if bits[i, k]:
                    mask |= qubit_masks[k]
            for b in range(d):
                parity = 0
                x = b & mask
                while x:
                    parity ^= 1
                    x &= x - 1
                state[b] = -encoded[b] if parity else encoded[b]
            fid = 0.0
            for a in range(n_anc):
                ov = 0j
                for col in range(d):
                    ov += proj[a, col] * state[col]
                fid += ov.real * ov.real + ov.imag * ov.imag
            out[i] = min(max(scale * fid, 0.0), 1.0)
        return out
else:  # pragma: no cover
    sample_markov_bits_numba = None
    trajectory_fidelities_numba = None


def sample_markov_bits(uniforms, pz, mu):
    """Turn an ``(n, N)`` array of uniforms into Markov-chain flip bits."""
    uniforms = np.ascontiguousarray(uniforms, dtype=np.float64)
    if USE_NUMBA:
        return sample_markov_bits_numba(uniforms, float(pz), float(mu))
    return sample_markov_bits_numpy(uniforms, float(pz), float(mu))


def trajectory_fidelities(bits, encoded, decoder, ref, qubit_masks):
    """Fidelity with ``ref`` of the decoded state for each row of ``bits``."""
    bits = np.ascontiguousarray(bits, dtype=np.int8)
    encoded = np.ascontiguousarray(encoded, dtype=np.complex128)
    decoder = np.ascontiguousarray(decoder, dtype=np.complex128)
    ref = np.ascontiguousarray(ref, dtype=np.complex128)
    qubit_masks = np.ascontiguousarray(qubit_masks, dtype=np.int64)
    scale = 1.0 / (np.vdot(ref, ref).real * np.vdot(encoded, encoded).real)
    if USE_NUMBA:
        return trajectory_fidelities_numba(bits, encoded, decoder, ref, qubit_masks, scale)
    return trajectory_fidelities_numpy(bits, encoded, decoder, ref, qubit_masks, scale)
