# Sequential per-AP LMMSE refinement along one fronthaul chain, tracking
# the error covariance, the pre-compression correlation and the effective
# combiner / compression-noise propagation matrix families.
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import compression as comp
from . import metrics
from .linalg import ensure_psd, herm, herm_solve, sample_cn

# rates at or below this are treated as a dead link: the next AP restarts
# the chain from the prior (zero bits convey zero information)
ZERO_RATE_TOL = 1e-12


@dataclass
class ChainState:
    l: int                    # APs processed so far
    s_tilde: np.ndarray       # (K,) compressed refined estimate
    C: np.ndarray             # (K,K) error covariance
    P: np.ndarray             # (K,K) pre-compression correlation
    V: list = field(default_factory=list)      # V_il, i = 1..l, each (K,N)
    A: list = field(default_factory=list)      # A_il, i = 1..l, each (K,K)
    Qhist: list = field(default_factory=list)  # Q_i, i = 1..l
    outcomes: list = field(default_factory=list)  # per-AP CompressionOutcome
    ys: list = field(default_factory=list)     # realized received vectors
    qs: list = field(default_factory=list)     # realized compression noise


def initial_state(K: int, p: float) -> ChainState:
    return ChainState(l=0,
                      s_tilde=np.zeros(K, dtype=complex),
                      C=p * np.eye(K, dtype=complex),
                      P=np.zeros((K, K), dtype=complex))


def gain(C_prev: np.ndarray, H_l: np.ndarray, sigma2: float) -> np.ndarray:
    """LMMSE combining matrix C H^H (H C H^H + sigma2 I)^-1, via a PD solve."""
    if sigma2 <= 0:
        raise ValueError("sigma2 must be strictly positive")
    N = H_l.shape[0]
    S = herm(H_l @ C_prev @ H_l.conj().T) + sigma2 * np.eye(N)
    # (S^-1 H C)^H = C H^H S^-1 for Hermitian C
    return herm_solve(S, H_l @ C_prev).conj().T


def refine(s_tilde_prev: np.ndarray, Gamma: np.ndarray,
           H_l: np.ndarray, y_l: np.ndarray) -> np.ndarray:
    """Innovation update of the running estimate."""
    return s_tilde_prev + Gamma @ (y_l - H_l @ s_tilde_prev)


def update_error_cov(C_prev: np.ndarray, Gamma: np.ndarray,
                     H_l: np.ndarray, Q_l: np.ndarray) -> np.ndarray:
    """C_l = (I - Gamma H) C_{l-1} + Q_l, symmetrized and PSD-repaired."""
    K = C_prev.shape[0]
    C = (np.eye(K) - Gamma @ H_l) @ C_prev + Q_l
    return ensure_psd(C, name="C")


def update_pre_compression_corr(P_prev: np.ndarray, Q_prev: np.ndarray,
                                C_prev: np.ndarray, Gamma: np.ndarray,
                                H_l: np.ndarray) -> np.ndarray:
    """Correlation of the refined estimate before compression."""
    GH = Gamma @ H_l
    P = P_prev + Q_prev + GH @ C_prev - Q_prev @ GH.conj().T - GH @ Q_prev
    return ensure_psd(P, name="P")


def propagate_combiners(V: list, A: list, Gamma: np.ndarray,
                        H_l: np.ndarray) -> tuple[list, list]:
    """Push the combiner families through one more AP.

    Existing members pick up the factor (I - Gamma H); the new AP itself
    contributes V_ll = Gamma and A_ll = I.
    """
    K = Gamma.shape[0]
    F = np.eye(K) - Gamma @ H_l
    V_new = [F @ Vi for Vi in V] + [Gamma]
    A_new = [F @ Ai for Ai in A] + [np.eye(K, dtype=complex)]
    return V_new, A_new


def _compress(strategy: str, P: np.ndarray, R_l: float,
              base: np.ndarray | None) -> comp.CompressionOutcome:
    if strategy == "eiu":
        return comp.eiu(P, R_l)
    if strategy == "scnm":
        return comp.scnm(P, R_l)
    if strategy == "wsinm":
        return comp.wsinm(P, R_l, base)
    raise ValueError(f"unknown compression strategy {strategy!r}")


def run_chain(p: float, sigma2: float, H: list, y: list, strategy: str,
              rates, rng: np.random.Generator) -> ChainState:
    """Run the full refine -> compress pass over an ordered AP subset.

    H and y are the per-AP channels and realized received vectors in chain
    order; rates gives R_l per AP. strategy is one of eiu | scnm | wsinm |
    infinite ("infinite" disables compression, Q_l = 0).
    """
    K = H[0].shape[1]
    st = initial_state(K, p)
    rates = np.asarray(rates, dtype=float)
    if len(rates) != len(H) or len(y) != len(H):
        raise ValueError("H, y and rates must have one entry per chain AP")

    for H_l, y_l, R_l in zip(H, y, rates):
        Gamma = gain(st.C, H_l, sigma2)
        s_hat = refine(st.s_tilde, Gamma, H_l, y_l)
        V, A = propagate_combiners(st.V, st.A, Gamma, H_l)
        Q_prev = st.Qhist[-1] if st.Qhist else np.zeros((K, K), dtype=complex)
        P = update_pre_compression_corr(st.P, Q_prev, st.C, Gamma, H_l)
        st.ys.append(y_l)
        st.l += 1

        if strategy == "infinite":
            Q = np.zeros((K, K), dtype=complex)
            q = np.zeros(K, dtype=complex)
            outcome = comp.CompressionOutcome(Q=Q, achieved_rate=np.inf)
        elif R_l <= ZERO_RATE_TOL:
            # dead link: the next AP sees no estimate at all
            st.s_tilde = np.zeros(K, dtype=complex)
            st.C = p * np.eye(K, dtype=complex)
            st.P = np.zeros((K, K), dtype=complex)
            Z = np.zeros((K, K), dtype=complex)
            st.V = [np.zeros_like(Vi) for Vi in V]
            st.A = [np.zeros_like(Ai) for Ai in A]
            st.Qhist.append(Z)
            st.outcomes.append(comp.CompressionOutcome(Q=Z, achieved_rate=0.0))
            st.qs.append(-s_hat)  # realized q that zeroes the forwarded estimate
            continue
        else:
            base = None
            if strategy == "wsinm":
                ctx = metrics.interference_context(
                    H[:st.l], V, A, st.Qhist, p, sigma2)
                base = ctx.base
            outcome = _compress(strategy, P, R_l, base)
            Q = outcome.Q
            q = sample_cn(rng, Q)

        st.s_tilde = s_hat + q
        st.C = update_error_cov(st.C, Gamma, H_l, Q)
        st.P = P
        st.V, st.A = V, A
        st.Qhist.append(Q)
        st.outcomes.append(outcome)
        st.qs.append(q)

    return st
