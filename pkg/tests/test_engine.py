import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memdeph import engine
from memdeph.analysis import fe_closed
from memdeph.errormodel import ChannelParams, derived_probs, enumerate_sequences

CODES = ["uncoded", "c1", "c2"]
probs = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


class TestTrajectories:
    @pytest.mark.parametrize("code", CODES)
    @pytest.mark.parametrize("method", ["pure", "density"])
    def test_dichotomy(self, code, method):
        n = {"uncoded": 1, "c1": 3, "c2": 2}[code]
        for seq, _ in enumerate_sequences(n, ChannelParams(0.5, 0.5)):
            f = engine.trajectory_fidelity(code, seq, method=method)
            assert min(abs(f), abs(f - 1)) <= 1e-12

    @pytest.mark.parametrize("code", CODES)
    def test_pure_matches_density(self, code):
        rng = np.random.default_rng(3)
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi = v / np.linalg.norm(v)
        n = {"uncoded": 1, "c1": 3, "c2": 2}[code]
        for seq, _ in enumerate_sequences(n, ChannelParams(0.5, 0.5)):
            a = engine.trajectory_fidelity(code, seq, psi, "pure")
            b = engine.trajectory_fidelity(code, seq, psi, "density")
            assert a == pytest.approx(b, abs=1e-12)

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            engine.trajectory_fidelity("c1", "ZZ")


class TestFeExact:
    @given(probs, probs)
    def test_uncoded(self, p0, mu):
        assert abs(engine.fe_exact("uncoded", ChannelParams(p0, mu)) - p0) <= 1e-12

    def test_c1_partial_memory(self):
        params = ChannelParams(0.9, 0.2)
        d = derived_probs(params)
        assert (d.q0, d.qz) == (pytest.approx(0.92), pytest.approx(0.28))
        expected = 0.9 * d.q0**2 + 0.9 * d.q0 * d.r0 + 0.9 * d.r0 * d.rz + 0.1 * d.rz * d.q0
        assert abs(engine.fe_exact("c1", params) - expected) <= 1e-12

    @given(probs)
    def test_c2_perfect_memory(self, p0):
        assert engine.fe_exact("c2", ChannelParams(p0, 1.0)) == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=40)
    @given(probs, probs, st.sampled_from(CODES))
    def test_matches_closed_form(self, p0, mu, code):
        params = ChannelParams(p0, mu)
        assert abs(engine.fe_exact(code, params) - fe_closed(code, params).Fe) <= 1e-12

    @settings(max_examples=15, deadline=None)
    @given(probs, probs, st.sampled_from(CODES))
    def test_density_route(self, p0, mu, code):
        params = ChannelParams(p0, mu)
        assert abs(engine.fe_exact(code, params, method="density") - fe_closed(code, params).Fe) <= 1e-12

    @settings(max_examples=15, deadline=None)
    @given(probs, probs, st.sampled_from(CODES))
    def test_ensemble_route(self, p0, mu, code):
        params = ChannelParams(p0, mu)
        assert abs(engine.fe_ensemble(code, params) - engine.fe_exact(code, params)) <= 1e-12

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            engine.fe_exact("c1", ChannelParams(0.9, 0.1), method="stabilizer")


class TestMonteCarlo:
    def test_perfect_memory_c2(self):
        est, err = engine.fe_monte_carlo("c2", ChannelParams(0.7, 1.0), 5000, 9)
        assert est == 1.0 and err == 0.0

    def test_c1_weak_noise(self):
        params = ChannelParams(0.999, 0.1)
        est, err = engine.fe_monte_carlo("c1", params, 10**6, 12345)
        assert abs(est - engine.fe_exact("c1", params)) <= 4 * err

    def test_seeded_determinism(self):
        params = ChannelParams(0.9, 0.3)
        a = engine.fe_monte_carlo("uncoded", params, 10**5, 77)
        b = engine.fe_monte_carlo("uncoded", params, 10**5, 77)
        assert a == b
        assert engine.fe_monte_carlo("uncoded", params, 10**5, 78) != a

    def test_stderr_formula(self):
        params = ChannelParams(0.8, 0.4)
        fids = engine.mc_trajectory_fidelities("c2", params, 1000, 1)
        est, err = engine.fe_monte_carlo("c2", params, 1000, 1)
        assert est == pytest.approx(fids.mean(), abs=1e-15)
        assert err == pytest.approx(fids.std(ddof=1) / math.sqrt(1000), rel=1e-12)

    def test_chunks_do_not_overlap(self):
        # more than one RNG substream in play
        n = engine.MC_CHUNK * 2 + 17
        fids = engine.mc_trajectory_fidelities("uncoded", ChannelParams(0.5, 0.0), n, 3)
        head = fids[: engine.MC_CHUNK]
        assert not np.array_equal(head, fids[engine.MC_CHUNK : 2 * engine.MC_CHUNK])

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            engine.fe_monte_carlo("c1", ChannelParams(0.9, 0.1), 99, 1)

    def test_seed_required(self):
        with pytest.raises(ValueError):
            engine.fe_monte_carlo("c1", ChannelParams(0.9, 0.1), 1000, None)

    def test_error_scales_as_inverse_sqrt(self):
        params = ChannelParams(0.8, 0.3)
        exact = engine.fe_exact("c1", params)
        sizes = np.array([10**3, 10**4, 10**5, 10**6])
        reps = 24
        rms = []
        for n in sizes:
            errs = [engine.fe_monte_carlo("c1", params, int(n), 1000 * int(n) + r)[0] - exact for r in range(reps)]
            rms.append(math.sqrt(np.mean(np.square(errs))))
        slope = np.polyfit(np.log(sizes), np.log(rms), 1)[0]
        assert -0.6 <= slope <= -0.4


def test_report():
    params = ChannelParams(0.95, 0.25)
    rep = engine.fidelity_report("c1", params, n_samples=2000, seed=4)
    assert rep.abs_discrepancy_closed_vs_exact <= 1e-12
    assert rep.fe_mc is not None and rep.mc_stderr > 0
    assert rep.n_samples == 2000 and rep.seed == 4
    bare = engine.fidelity_report("c2", params)
    assert bare.fe_mc is None and bare.mc_stderr is None
