# Two-Path propagation: the ring is split into two arcs, each runs the
# sequential chain independently, and the CPU fuses the two compressed
# estimates with a global LMMSE combiner.
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainState
from .linalg import ensure_psd, herm, herm_solve

# condition number above which the fusion Gram matrix gets a diagonal bump;
# kept above 1e12 so a merely ill-scaled (e.g. one useless path) fusion is
# still solved exactly
_COND_LIMIT = 1e14
_REG_SCALE = 1e-12


@dataclass(frozen=True)
class PathSummary:
    s_tilde: np.ndarray   # (K,) terminal compressed estimate of the path
    G: np.ndarray         # (K,K) effective channel
    Z: np.ndarray         # (K,K) effective noise covariance


@dataclass(frozen=True)
class FusedEstimate:
    y: np.ndarray         # (2K,) stacked path estimates
    G: np.ndarray         # (2K,K)
    Z: np.ndarray         # (2K,2K) block-diagonal
    V: np.ndarray         # (K,2K) global LMMSE combiner
    s_hat: np.ndarray     # (K,)


def split_paths(L: int) -> tuple[list, list]:
    """Two contiguous arcs of the AP ring, each ending adjacent to the CPU.

    The CPU sits at the last AP's location (index L-1). The first arc takes
    the extra AP when L is odd.
    """
    if L < 2:
        raise ValueError("Two-Path mode needs at least 2 APs")
    L1 = (L + 1) // 2
    path1 = list(range(L1 - 1, -1, -1))   # ends at index 0, ring-adjacent to L-1
    path2 = list(range(L1, L))            # ends at index L-1
    return path1, path2


def summarize_path(chain: ChainState, H: list, sigma2: float) -> PathSummary:
    """Effective channel / noise statistics of one completed path."""
    if chain.l != len(H):
        raise ValueError("chain length does not match the supplied channels")
    K = chain.s_tilde.shape[0]
    G = np.zeros((K, K), dtype=complex)
    Z = np.zeros((K, K), dtype=complex)
    for Vi, Ai, Qi, Hi in zip(chain.V, chain.A, chain.Qhist, H):
        G += Vi @ Hi
        Z += sigma2 * (Vi @ Vi.conj().T) + Ai @ Qi @ Ai.conj().T
    return PathSummary(s_tilde=chain.s_tilde, G=G, Z=ensure_psd(Z, name="Z"))


def _fusion_gram(G: np.ndarray, Z: np.ndarray, p: float) -> np.ndarray:
    """p G G^H + Z, with a diagonal bump when nearly singular."""
    n = G.shape[0]
    S = herm(p * (G @ G.conj().T) + Z)
    if np.linalg.cond(S) > _COND_LIMIT:
        S = S + (_REG_SCALE * np.trace(S).real / n) * np.eye(n)
        if np.linalg.cond(S) > 1 / np.finfo(float).eps:
            raise np.linalg.LinAlgError("fusion Gram matrix is singular")
    return S


def fuse(p1: PathSummary, p2: PathSummary, p: float) -> FusedEstimate:
    """Global LMMSE combination of the two path estimates at the CPU."""
    K = p1.G.shape[1]
    y = np.concatenate([p1.s_tilde, p2.s_tilde])
    G = np.vstack([p1.G, p2.G])
    Z = np.zeros((2 * K, 2 * K), dtype=complex)
    Z[:K, :K] = p1.Z
    Z[K:, K:] = p2.Z
    V = p * herm_solve(_fusion_gram(G, Z, p), G).conj().T
    return FusedEstimate(y=y, G=G, Z=Z, V=V, s_hat=V @ y)


def sinr_fused(fused: FusedEstimate, p: float) -> np.ndarray:
    """Per-user LMMSE SINR of the stacked two-path observation model.

    Computed from u_k = p g_k^H S^-1 g_k with S the full Gram matrix: by a
    rank-one identity the SINR excluding user k's own column is u/(1 - u),
    which avoids solving one deflated (possibly singular) system per user.
    """
    G, Z = fused.G, fused.Z
    S = _fusion_gram(G, Z, p)
    u = p * np.real(np.sum(G.conj() * herm_solve(S, G), axis=0))
    u = np.clip(u, 0.0, 1.0 - np.finfo(float).eps)
    return u / (1.0 - u)
