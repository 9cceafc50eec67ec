import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memdeph import codes, qsim


def perm_matrix(n, fn):
    """Oracle: permutation matrix of a classical reversible map on n-bit tuples."""
    d = 1 << n
    m = np.zeros((d, d))
    for col, bits in enumerate(itertools.product([0, 1], repeat=n)):
        out = fn(list(bits))
        m[int("".join(map(str, out)), 2), col] = 1
    return m


def cnot(c, t):
    def fn(b):
        b[t] ^= b[c]
        return b
    return fn


def run(code, seq, psi_rq=None):
    code = codes.get_code(code)
    psi_rq = qsim.bell_state() if psi_rq is None else psi_rq
    enc = codes.encode(code, codes.attach_ancillas(psi_rq, code))
    rho = qsim.apply_error_sequence(qsim.density(enc), seq, code.channel_targets)
    return qsim.fidelity_with_pure(psi_rq, codes.decode(code, rho))


def random_two_qubit_ket(seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    return v / np.linalg.norm(v)


class TestRegistry:
    def test_names(self):
        assert set(codes.CODES) == {"uncoded", "c1", "c2"}
        assert [codes.get_code(n).n_physical for n in ("uncoded", "c1", "c2")] == [1, 3, 2]
        assert [codes.get_code(n).n_ancilla for n in ("uncoded", "c1", "c2")] == [0, 2, 1]

    def test_unknown(self):
        with pytest.raises(ValueError):
            codes.get_code("steane")

    @pytest.mark.parametrize("name", ["uncoded", "c1", "c2"])
    def test_circuits_unitary(self, name):
        assert qsim.is_unitary(codes.encoder_unitary(name))
        assert qsim.is_unitary(codes.decoder_unitary(name))


class TestEncode:
    def test_uncoded_is_identity(self):
        psi = random_two_qubit_ket(0)
        assert np.allclose(codes.encode("uncoded", psi), psi)

    def test_c2_zero(self):
        # R=|0>, Q=|0>, A=|0>  ->  R=|0>, QA=|01>
        out = codes.encode("c2", qsim.basis_state([0, 0, 0]))
        assert np.allclose(out, qsim.basis_state([0, 0, 1]))

    def test_c2_superposition(self):
        a, b = 0.6, 0.8j
        psi_rq = np.kron([1, 0], [a, b])
        out = codes.encode("c2", codes.attach_ancillas(psi_rq, "c2"))
        expected = a * qsim.basis_state([0, 0, 1]) + b * qsim.basis_state([0, 1, 0])
        assert np.allclose(out, expected)

    def test_c1_zero_is_plus_plus_plus(self):
        # independent construction: CNOT(Q->A1), CNOT(Q->A2), then H on all three
        h3 = np.kron(np.kron(qsim.H, qsim.H), qsim.H)
        enc = h3 @ perm_matrix(3, cnot(0, 2)) @ perm_matrix(3, cnot(0, 1))
        qa = enc @ qsim.basis_state([0, 0, 0])
        assert np.allclose(qa, np.full(8, 1 / np.sqrt(8)))
        out = codes.encode("c1", qsim.basis_state([0, 0, 0, 0]))
        assert np.allclose(out[:8], qa, atol=1e-15)
        assert np.allclose(out[8:], 0)

    def test_c1_one_is_minus_minus_minus(self):
        minus = np.array([1, -1]) / np.sqrt(2)
        out = codes.encode("c1", qsim.basis_state([0, 1, 0, 0]))
        assert np.allclose(out[:8], qsim.kron(minus, minus, minus))

    def test_dirty_ancilla(self):
        with pytest.raises(ValueError, match="ground state"):
            codes.encode("c2", qsim.basis_state([0, 0, 1]))

    def test_wrong_register(self):
        with pytest.raises(ValueError):
            codes.encode("c1", qsim.basis_state([0, 0, 0]))


class TestDecode:
    @pytest.mark.parametrize("name", ["uncoded", "c1", "c2"])
    def test_noiseless_round_trip(self, name):
        code = codes.get_code(name)
        assert run(name, "I" * code.n_physical) == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.sampled_from(["uncoded", "c1", "c2"]))
    def test_round_trip_any_input(self, seed, name):
        psi = random_two_qubit_ket(seed)
        code = codes.get_code(name)
        assert run(name, "I" * code.n_physical, psi) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("seq", ["III", "ZII", "IZI", "IIZ"])
    def test_c1_corrects_single_flip(self, seq):
        assert run("c1", seq) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("seq", ["ZZI", "ZIZ", "IZZ", "ZZZ"])
    def test_c1_fails_on_two_or_more(self, seq):
        assert run("c1", seq) == pytest.approx(0.0, abs=1e-12)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.sampled_from(["ZII", "IZI", "IIZ"]))
    def test_c1_corrects_any_input(self, seed, seq):
        assert run("c1", seq, random_two_qubit_ket(seed)) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("seq, expected", [("II", 1.0), ("ZZ", 1.0), ("IZ", 0.0), ("ZI", 0.0)])
    def test_c2_dichotomy(self, seq, expected):
        assert run("c2", seq) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("seq, expected", [("I", 1.0), ("Z", 0.0)])
    def test_uncoded(self, seq, expected):
        assert run("uncoded", seq) == pytest.approx(expected, abs=1e-12)

    def test_c2_decoder_leaves_ancilla_in_one(self):
        a, b = 0.6, 0.8
        state = a * qsim.basis_state([0, 0, 1]) + b * qsim.basis_state([1, 1, 0])
        dec = qsim.apply_unitary(state, qsim.CNOT, [1, 2])
        expected = np.kron(a * qsim.basis_state([0, 0]) + b * qsim.basis_state([1, 1]), [0, 1])
        assert np.allclose(dec, expected)

    def test_decode_dimension_mismatch(self):
        with pytest.raises(ValueError):
            codes.decode("c1", np.eye(8) / 8)
