import numpy as np
import pytest

from seqcf import (gain, initial_state, propagate_combiners, refine, run_chain,
                   update_error_cov, update_pre_compression_corr)
from seqcf.linalg import herm

from oracles import (centralized_error_cov, centralized_estimate, complex_randn,
                     rand_channels)


def run_random_chain(rng, p=1.0, sigma2=0.4, K=2, L=3, N=3, strategy="eiu", rates=None):
    H = rand_channels(rng, L, N, K)
    s = np.sqrt(p) * complex_randn(rng, K)
    y = [Hl @ s + np.sqrt(sigma2) * complex_randn(rng, N) for Hl in H]
    if rates is None:
        rates = np.full(L, 6.0)
    st = run_chain(p, sigma2, H, y, strategy, rates, rng)
    return st, H, y, s


class TestGain:
    def test_scalar_wiener(self):
        p, s2, h = 2.0, 0.5, np.array([[0.7 - 0.2j]])
        G = gain(p * np.eye(1, dtype=complex), h, s2)
        expected = p * np.conj(h[0, 0]) / (p * abs(h[0, 0]) ** 2 + s2)
        assert G[0, 0] == pytest.approx(expected, rel=1e-14)

    def test_zero_prior_covariance(self, rng):
        H = complex_randn(rng, (3, 2))
        G = gain(np.zeros((2, 2), dtype=complex), H, 0.7)
        assert np.allclose(G, 0.0)

    def test_matches_direct_solve(self, rng):
        K, N, s2 = 2, 3, 0.3
        C = complex_randn(rng, (K, K))
        C = C @ C.conj().T
        H = complex_randn(rng, (N, K))
        G = gain(C, H, s2)
        S = H @ C @ H.conj().T + s2 * np.eye(N)
        expected = C @ H.conj().T @ np.linalg.inv(S)
        assert np.allclose(G, expected, atol=1e-12)

    def test_rejects_nonpositive_noise(self, rng):
        with pytest.raises(ValueError):
            gain(np.eye(2, dtype=complex), complex_randn(rng, (2, 2)), 0.0)


class TestRefine:
    def test_zero_gain_keeps_estimate(self, rng):
        s_prev = complex_randn(rng, 2)
        H = complex_randn(rng, (3, 2))
        out = refine(s_prev, np.zeros((2, 3)), H, complex_randn(rng, 3))
        assert np.array_equal(out, s_prev)

    def test_first_ap_base_case(self, rng):
        G = complex_randn(rng, (2, 3))
        y = complex_randn(rng, 3)
        out = refine(np.zeros(2, dtype=complex), G, complex_randn(rng, (3, 2)), y)
        assert np.allclose(out, G @ y)

    def test_noiseless_limit_recovers_signal(self, rng):
        # single user, many antennas, vanishing noise: estimate -> truth
        p, s2, N = 1.0, 1e-12, 8
        H = [complex_randn(rng, (N, 1))]
        s = np.sqrt(p) * complex_randn(rng, 1)
        y = [H[0] @ s]
        st = run_chain(p, s2, H, y, "infinite", [np.inf], rng)
        assert np.abs(st.s_tilde - s) ** 2 < 1e-6 * p


class TestCovarianceUpdates:
    def test_first_ap_pre_compression_identity(self, rng):
        # P_1 = p G H must equal G (p H H^H + s2 I) G^H
        p, s2, K, N = 1.3, 0.6, 2, 3
        H = complex_randn(rng, (N, K))
        C0 = p * np.eye(K, dtype=complex)
        G = gain(C0, H, s2)
        Z = np.zeros((K, K), dtype=complex)
        P1 = update_pre_compression_corr(Z, Z, C0, G, H)
        direct = G @ (p * H @ H.conj().T + s2 * np.eye(N)) @ G.conj().T
        assert np.linalg.norm(P1 - direct) / np.linalg.norm(direct) < 1e-9

    def test_compression_free_reduction(self, rng):
        K, N = 3, 2
        C = complex_randn(rng, (K, K))
        C = C @ C.conj().T
        P_prev = complex_randn(rng, (K, K))
        P_prev = P_prev @ P_prev.conj().T
        H = complex_randn(rng, (N, K))
        G = gain(C, H, 0.5)
        Z = np.zeros((K, K), dtype=complex)
        P = update_pre_compression_corr(P_prev, Z, C, G, H)
        assert np.allclose(P, herm(P_prev + G @ H @ C), atol=1e-12)

    def test_error_cov_trivial(self, rng):
        C = np.eye(2, dtype=complex) * 0.8
        out = update_error_cov(C, np.zeros((2, 3)), complex_randn(rng, (3, 2)),
                               np.zeros((2, 2)))
        assert np.allclose(out, C)

    def test_error_cov_scalar_algebra(self):
        p, s2, h, q = 1.0, 0.4, 0.9 + 0.1j, 0.05
        C = np.array([[p]], dtype=complex)
        H = np.array([[h]])
        G = gain(C, H, s2)
        out = update_error_cov(C, G, H, np.array([[q]], dtype=complex))
        expected = s2 * p / (p * abs(h) ** 2 + s2) + q
        assert out[0, 0].real == pytest.approx(expected, rel=1e-12)


class TestCombinerFamilies:
    def test_base_case(self, rng):
        G = complex_randn(rng, (2, 3))
        H = complex_randn(rng, (3, 2))
        V, A = propagate_combiners([], [], G, H)
        assert np.array_equal(V[0], G)
        assert np.array_equal(A[0], np.eye(2))

    def test_two_step_product_form(self, rng):
        p, s2, K, N = 1.0, 0.5, 2, 3
        H1, H2 = complex_randn(rng, (N, K)), complex_randn(rng, (N, K))
        C0 = p * np.eye(K, dtype=complex)
        G1 = gain(C0, H1, s2)
        C1 = update_error_cov(C0, G1, H1, np.zeros((K, K)))
        G2 = gain(C1, H2, s2)
        V, A = propagate_combiners(*propagate_combiners([], [], G1, H1), G2, H2)
        F2 = np.eye(K) - G2 @ H2
        assert np.allclose(V[0], F2 @ G1, atol=1e-12)
        assert np.allclose(A[0], F2, atol=1e-12)
        assert np.array_equal(V[1], G2)
        assert np.array_equal(A[1], np.eye(K))

    @pytest.mark.parametrize("strategy", ["eiu", "scnm", "wsinm", "infinite"])
    def test_recursion_matches_expansion(self, rng, strategy):
        # terminal estimate equals sum_i V_i y_i + A_i q_i for realized noise
        st, H, y, _ = run_random_chain(rng, strategy=strategy)
        recon = sum(Vi @ yi for Vi, yi in zip(st.V, st.ys))
        recon += sum(Ai @ qi for Ai, qi in zip(st.A, st.qs))
        err = np.linalg.norm(st.s_tilde - recon) / np.linalg.norm(st.s_tilde)
        assert err < 1e-9


class TestRunChain:
    def test_no_compression_matches_centralized(self, rng):
        p, s2 = 1.0, 0.5
        H = rand_channels(rng, 4, 2, 3)
        s = np.sqrt(p) * complex_randn(rng, 3)
        y = [Hl @ s + np.sqrt(s2) * complex_randn(rng, 2) for Hl in H]
        st = run_chain(p, s2, H, y, "infinite", np.full(4, np.inf), rng)
        cen = centralized_estimate(H, y, p, s2)
        assert np.linalg.norm(st.s_tilde - cen) / np.linalg.norm(cen) < 1e-8
        C_cen = centralized_error_cov(H, p, s2)
        assert np.linalg.norm(st.C - C_cen) / np.linalg.norm(C_cen) < 1e-8

    def test_single_ap_reduces_to_lmmse_plus_compression(self, rng):
        p, s2, K, N = 1.0, 0.5, 2, 3
        H = rand_channels(rng, 1, N, K)
        s = np.sqrt(p) * complex_randn(rng, K)
        y = [H[0] @ s + np.sqrt(s2) * complex_randn(rng, N)]
        st = run_chain(p, s2, H, y, "eiu", [8.0], rng)
        s_hat = centralized_estimate(H, y, p, s2)
        assert np.allclose(st.s_tilde - st.qs[0], s_hat, atol=1e-10)
        assert np.allclose(st.C, centralized_error_cov(H, p, s2) + st.Qhist[0],
                           atol=1e-10)

    def test_terminal_mse_non_increasing_in_rate(self, rng):
        p, s2, L = 1.0, 0.5, 3
        H = rand_channels(rng, L, 2, 2)
        s = np.sqrt(p) * complex_randn(rng, 2)
        y = [Hl @ s + np.sqrt(s2) * complex_randn(rng, 2) for Hl in H]
        base_rates = np.full(L, 4.0)
        for l in range(L):
            traces = []
            for extra in (0.0, 2.0, 6.0, 12.0):
                rates = base_rates.copy()
                rates[l] += extra
                st = run_chain(p, s2, H, y, "scnm", rates, rng)
                traces.append(np.trace(st.C).real)
            assert np.all(np.diff(traces) <= 1e-9)

    def test_trace_inequality_every_step(self, rng):
        st, H, y, _ = run_random_chain(rng, L=4, strategy="scnm")
        # rerun step by step to observe intermediate traces
        p, s2 = 1.0, 0.4
        prev = np.trace(initial_state(2, p).C).real
        for l in range(1, 5):
            stl = run_chain(p, s2, H[:l], y[:l], "scnm", np.full(l, 6.0),
                            np.random.default_rng(0))
            tr = np.trace(stl.C).real
            assert tr <= prev + np.trace(stl.Qhist[-1]).real + 1e-9
            prev = tr

    def test_psd_state_every_step(self, rng):
        st, *_ = run_random_chain(rng, L=4, strategy="wsinm")
        for X in [st.C, st.P] + st.Qhist:
            w = np.linalg.eigvalsh(herm(X))
            assert w.min() >= -1e-10 * max(abs(w).max(), 1e-300)

    def test_zero_rate_link_restarts_chain(self, rng):
        # a dead first link must leave AP 2 with a fresh prior
        p, s2, K, N = 1.0, 0.5, 2, 3
        H = rand_channels(rng, 2, N, K)
        s = np.sqrt(p) * complex_randn(rng, K)
        y = [Hl @ s + np.sqrt(s2) * complex_randn(rng, N) for Hl in H]
        st = run_chain(p, s2, H, y, "eiu", [0.0, 10.0], rng)
        fresh = run_chain(p, s2, H[1:], y[1:], "eiu", [10.0],
                          np.random.default_rng(0))
        assert np.allclose(st.s_tilde - st.qs[-1], fresh.s_tilde - fresh.qs[-1],
                           atol=1e-12)
        assert np.allclose(st.C, fresh.C, atol=1e-12)

    def test_deterministic_given_seed(self, rng):
        H = rand_channels(rng, 3, 2, 2)
        s = complex_randn(rng, 2)
        y = [Hl @ s for Hl in H]
        a = run_chain(1.0, 0.5, H, y, "eiu", np.full(3, 6.0), np.random.default_rng(3))
        b = run_chain(1.0, 0.5, H, y, "eiu", np.full(3, 6.0), np.random.default_rng(3))
        assert np.array_equal(a.s_tilde, b.s_tilde)
