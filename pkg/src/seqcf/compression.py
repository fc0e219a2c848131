# Fronthaul compression-noise covariance design: element-wise equal
# inter-user bit split (EIU) and the two vector-wise designs (sum noise
# minimization and its weighted / interference-aware BCD variant).
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import herm, ensure_psd

LN2 = np.log(2.0)

# eigenvalues of P below this fraction of the largest are treated as a
# null space: those modes carry no rate and no compression noise
RANK_TOL = 1e-12


class SolverError(RuntimeError):
    pass


@dataclass
class CompressionOutcome:
    Q: np.ndarray
    achieved_rate: float                 # log2 det(P Q^-1 + I) on the support
    weights: np.ndarray | None = None    # WSINM only
    bcd_iters: int = 0
    objective_trace: list = field(default_factory=list)


def achieved_rate_bits(P: np.ndarray, Q: np.ndarray, tol: float = RANK_TOL) -> float:
    """log2 det(P Q^-1 + I_K), restricted to the support of Q."""
    w, U = np.linalg.eigh(herm(Q))
    keep = w > tol * max(float(w.max(initial=0.0)), 0.0)
    if np.all(keep):
        s1, ld1 = np.linalg.slogdet(herm(P) + herm(Q))
        s2, ld2 = np.linalg.slogdet(herm(Q))
        return float((ld1 - ld2) / LN2)
    Us = U[:, keep]
    Pr = Us.conj().T @ herm(P) @ Us
    Qr = np.diag(w[keep])
    s1, ld1 = np.linalg.slogdet(Pr + Qr)
    s2, ld2 = np.linalg.slogdet(Qr)
    return float((ld1 - ld2) / LN2)


def eiu(P: np.ndarray, R_l: float) -> CompressionOutcome:
    """Element-wise compression: b = R_l/K bits per user's estimate entry.

    Per rate-distortion theory the per-entry noise variance is
    P[k,k] / (2^b - 1); Q is diagonal.
    """
    K = P.shape[0]
    b = R_l / K
    if b <= 0:
        raise SolverError("EIU needs a strictly positive per-user bit budget")
    pdiag = np.diag(P).real
    if np.any(pdiag < -RANK_TOL * max(pdiag.max(initial=0.0), 1.0)):
        raise SolverError("P has a negative diagonal entry")
    q = np.clip(pdiag, 0.0, None) / (2.0 ** b - 1.0)
    Q = np.diag(q).astype(complex)
    return CompressionOutcome(Q=Q, achieved_rate=achieved_rate_bits(P, Q))


def _mode_noise(lam: np.ndarray, mu: float) -> np.ndarray:
    # positive root of d^2 + lam*d - mu*lam = 0, cancellation-free form
    return 2.0 * mu * lam / (lam + np.sqrt(lam * lam + 4.0 * mu * lam))


def _mode_rate(lam: np.ndarray, mu: float) -> float:
    return float(np.sum(np.log2(1.0 + lam / _mode_noise(lam, mu))))


def _solve_mode_noises(lam: np.ndarray, R_l: float,
                       tol_bits: float = 1e-9, max_iter: int = 200) -> np.ndarray:
    """Per-eigenmode noise variances meeting the rate constraint with equality.

    The rate is strictly decreasing in the multiplier mu, so the constraint
    is solved by bracketing mu geometrically and bisecting.
    """
    mu_hi = float(lam.max())
    grow = 0
    while _mode_rate(lam, mu_hi) > R_l:
        mu_hi *= 8.0
        grow += 1
        if grow > 600:
            raise SolverError("failed to bracket the rate constraint from above")
    mu_lo = mu_hi
    while _mode_rate(lam, mu_lo) < R_l:
        mu_lo /= 8.0
        grow += 1
        if grow > 1200:
            raise SolverError("failed to bracket the rate constraint from below")
    for _ in range(max_iter):
        mu = 0.5 * (mu_lo + mu_hi)
        r = _mode_rate(lam, mu)
        if abs(r - R_l) <= tol_bits:
            return _mode_noise(lam, mu)
        if r > R_l:
            mu_lo = mu
        else:
            mu_hi = mu
    raise SolverError(
        f"rate bisection did not converge: R={R_l}, last rate={r}, mu=[{mu_lo},{mu_hi}]")


def scnm(P: np.ndarray, R_l: float) -> CompressionOutcome:
    """Minimize trace(Q) s.t. log2 det(P Q^-1 + I) = R_l, Q >= 0.

    Q shares the eigenbasis of P; each mode's noise solves the KKT
    quadratic d^2 + lam*d - mu*lam = 0 with mu found by bisection.
    """
    if R_l <= 0:
        raise SolverError("vector-wise compression needs R_l > 0")
    P = ensure_psd(P, name="P")
    w, U = np.linalg.eigh(P)
    lam_max = float(w.max(initial=0.0))
    pos = w > RANK_TOL * lam_max
    if not np.any(pos):
        # nothing to forward: zero estimate costs zero rate and zero noise
        Q = np.zeros_like(P)
        return CompressionOutcome(Q=Q, achieved_rate=0.0)
    lam = w[pos]
    d = _solve_mode_noises(lam, R_l)
    dfull = np.zeros_like(w)
    dfull[pos] = d
    Q = herm((U * dfull) @ U.conj().T)
    rate = float(np.sum(np.log2(1.0 + lam / d)))
    return CompressionOutcome(Q=Q, achieved_rate=rate)


def weighted_scnm(P: np.ndarray, R_l: float, weights: np.ndarray) -> CompressionOutcome:
    """Minimize sum_k w_k Q[k,k] under the same rate constraint.

    Solved by the congruence transform P -> W^1/2 P W^1/2, which leaves the
    log-det constraint invariant, then undoing the transform on Q.
    """
    w = np.asarray(weights, dtype=float)
    if np.any(w <= 0):
        raise SolverError("weights must be strictly positive")
    ws = np.sqrt(w)
    Pbar = herm((ws[:, None] * P) * ws[None, :])
    inner = scnm(Pbar, R_l)
    Q = herm(inner.Q / ws[:, None] / ws[None, :])
    return CompressionOutcome(Q=Q, achieved_rate=inner.achieved_rate)


def wsinm(P: np.ndarray, R_l: float, interference_base: np.ndarray,
          rel_tol: float = 1e-8, max_iter: int = 100) -> CompressionOutcome:
    """Interference-aware compression via block coordinate descent.

    Alternates (i) weighted trace minimization at the current weights and
    (ii) the closed-form weight update w_k = 1/(ln2 * X_k), where
    X_k = interference_base[k] + Q[k,k] is user k's interference-plus-noise.
    interference_base must exclude the current AP's own Q[k,k] term.
    """
    base = np.asarray(interference_base, dtype=float)
    if np.any(base <= 0):
        raise SolverError("interference-plus-noise base must be strictly positive")
    K = P.shape[0]
    w = np.ones(K)
    trace_vals: list[float] = []
    prev_obj = None
    iters = 0
    for it in range(max_iter):
        iters = it + 1
        out = weighted_scnm(P, R_l, w)
        X = base + np.diag(out.Q).real
        obj_q = float(w @ X - np.sum(np.log2(w)))
        trace_vals.append(obj_q)
        w_new = 1.0 / (LN2 * X)
        obj_w = float(w_new @ X - np.sum(np.log2(w_new)))
        trace_vals.append(obj_w)
        w = w_new
        if prev_obj is not None and abs(prev_obj - obj_w) <= rel_tol * max(abs(prev_obj), 1e-300):
            break
        prev_obj = obj_w
    return CompressionOutcome(Q=out.Q, achieved_rate=out.achieved_rate,
                              weights=w, bcd_iters=iters, objective_trace=trace_vals)
