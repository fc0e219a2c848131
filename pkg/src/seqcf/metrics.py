# Per-user SINR / SE for a terminated chain, and the interference context
# consumed by the interference-aware compression design.
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SeReport:
    sinr: np.ndarray     # (K,) linear
    se: np.ndarray       # (K,) bits/s/Hz
    sum_se: float
    prelog: float


@dataclass(frozen=True)
class InterferenceContext:
    base: np.ndarray     # (K,) interference-plus-noise excluding the current AP's Q[k,k]


def _effective_channel(V: list, H: list) -> np.ndarray:
    """T[k, j] = sum_i V_i[k, :] @ H_i[:, j] (K x K)."""
    T = np.zeros((V[0].shape[0], H[0].shape[1]), dtype=complex)
    for Vi, Hi in zip(V, H):
        T += Vi @ Hi
    return T


def _denominator_base(H: list, V: list, A: list, Qhist: list,
                      p: float, sigma2: float) -> np.ndarray:
    """Interference + thermal-noise image + prior compression-noise image.

    Everything in the SINR denominator except the current AP's own Q[k,k].
    Qhist holds the compression covariances of the APs *before* the current
    one, paired with A[0..len(Qhist)-1].
    """
    T = _effective_channel(V, H)
    K = T.shape[0]
    abs2 = np.abs(T) ** 2
    inter_user = p * (abs2.sum(axis=1) - np.diag(abs2))
    noise = sigma2 * sum(np.sum(np.abs(Vi) ** 2, axis=1) for Vi in V)
    comp = np.zeros(K)
    for Ai, Qi in zip(A, Qhist):
        comp += np.einsum("kn,nm,km->k", Ai, Qi, Ai.conj()).real
    return inter_user + noise + comp


def sinr_chain(H: list, V: list, A: list, Qhist: list, Q_l: np.ndarray,
               p: float, sigma2: float) -> np.ndarray:
    """Per-user SINR at the terminal AP of a chain.

    H, V, A cover APs 1..l of the chain; Qhist covers APs 1..l-1 and Q_l is
    the terminal AP's compression covariance (its row combiner is I).
    """
    T = _effective_channel(V, H)
    num = p * np.abs(np.diag(T)) ** 2
    den = _denominator_base(H, V, A, Qhist, p, sigma2) + np.diag(Q_l).real
    # a user with a zero effective channel has 0/0 here; its SINR is zero
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=den > 0)
    return out


def interference_context(H: list, V: list, A: list, Qhist: list,
                         p: float, sigma2: float) -> InterferenceContext:
    """Denominator terms that do not depend on the current AP's Q."""
    return InterferenceContext(base=_denominator_base(H, V, A, Qhist, p, sigma2))


def se_from_sinr(sinr: np.ndarray, tau_u: int, tau_c: int) -> SeReport:
    """Spectral efficiency with the uplink-data prelog tau_u / tau_c."""
    sinr = np.asarray(sinr, dtype=float)
    if np.any(sinr < 0):
        raise ValueError("SINR must be non-negative")
    prelog = tau_u / tau_c
    se = prelog * np.log2(1.0 + sinr)
    return SeReport(sinr=sinr, se=se, sum_se=float(se.sum()), prelog=prelog)
