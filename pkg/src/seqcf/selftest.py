# Fast built-in oracle / invariant checks, runnable without pytest.
from __future__ import annotations

import numpy as np

from . import allocation, compression, metrics
from .chain import run_chain
from .linalg import complex_normal


def _centralized_sinr(H: list, p: float, sigma2: float) -> np.ndarray:
    Hs = np.vstack(H)
    M, K = Hs.shape
    S = p * (Hs @ Hs.conj().T) + sigma2 * np.eye(M)
    V = p * np.linalg.solve(S, Hs).conj().T     # (K, M)
    T = V @ Hs
    abs2 = np.abs(T) ** 2
    num = p * np.diag(abs2)
    den = p * (abs2.sum(axis=1) - np.diag(abs2)) + sigma2 * np.sum(np.abs(V) ** 2, axis=1)
    return num / den


def _check_centralized_equivalence(rng) -> tuple[bool, str]:
    p, sigma2, K, L, N = 1.0, 0.5, 3, 3, 2
    H = [complex_normal(rng, (N, K)) for _ in range(L)]
    s = np.sqrt(p) * complex_normal(rng, K)
    y = [Hl @ s + np.sqrt(sigma2) * complex_normal(rng, N) for Hl in H]
    st = run_chain(p, sigma2, H, y, "infinite", np.full(L, np.inf), rng)
    Hs = np.vstack(H)
    S = p * (Hs @ Hs.conj().T) + sigma2 * np.eye(L * N)
    s_cen = p * np.linalg.solve(S, Hs).conj().T @ np.concatenate(y)
    err = np.linalg.norm(st.s_tilde - s_cen) / np.linalg.norm(s_cen)
    sinr_seq = metrics.sinr_chain(H, st.V, st.A, st.Qhist[:-1], st.Qhist[-1], p, sigma2)
    sinr_err = np.max(np.abs(sinr_seq - _centralized_sinr(H, p, sigma2))
                      / _centralized_sinr(H, p, sigma2))
    ok = err < 1e-8 and sinr_err < 1e-8
    return ok, f"estimate err {err:.2e}, SINR err {sinr_err:.2e}"


def _check_reconstruction(rng) -> tuple[bool, str]:
    p, sigma2, K, L, N = 1.0, 0.3, 2, 4, 3
    H = [complex_normal(rng, (N, K)) for _ in range(L)]
    s = np.sqrt(p) * complex_normal(rng, K)
    y = [Hl @ s + np.sqrt(sigma2) * complex_normal(rng, N) for Hl in H]
    st = run_chain(p, sigma2, H, y, "eiu", np.full(L, 6.0), rng)
    recon = sum(Vi @ yi for Vi, yi in zip(st.V, st.ys))
    recon += sum(Ai @ qi for Ai, qi in zip(st.A, st.qs))
    err = np.linalg.norm(st.s_tilde - recon) / max(np.linalg.norm(st.s_tilde), 1e-300)
    return err < 1e-9, f"reconstruction err {err:.2e}"


def _check_rate_equality(rng) -> tuple[bool, str]:
    K = 3
    X = complex_normal(rng, (K, K))
    P = X @ X.conj().T + 0.1 * np.eye(K)
    worst = 0.0
    for R in (2.0, 7.5, 20.0):
        out = compression.scnm(P, R)
        worst = max(worst, abs(compression.achieved_rate_bits(P, out.Q) - R))
        out = compression.wsinm(P, R, np.full(K, 0.4))
        worst = max(worst, abs(compression.achieved_rate_bits(P, out.Q) - R))
    return worst < 1e-6, f"worst rate-constraint error {worst:.2e} bits"


def _check_allocation(rng) -> tuple[bool, str]:
    worst = 0.0
    for L in (1, 4, 12):
        for sched in (allocation.equal(777.0, L), allocation.linear(777.0, L)):
            worst = max(worst, abs(sched.total - 777.0))
    worst = max(worst, abs(allocation.logarithmic(777.0, 5).total - 777.0))
    return worst < 1e-9, f"worst budget error {worst:.2e} bits"


CHECKS = [
    ("centralized-equivalence", _check_centralized_equivalence),
    ("eq5-eq6-reconstruction", _check_reconstruction),
    ("rate-constraint-equality", _check_rate_equality),
    ("budget-conservation", _check_allocation),
]


def run_selftest(seed: int = 0) -> bool:
    """Run the quick invariant checks; prints one line per check."""
    rng = np.random.default_rng(seed)
    all_ok = True
    for name, fn in CHECKS:
        ok, detail = fn(rng)
        all_ok &= ok
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
