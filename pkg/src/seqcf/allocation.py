# Splitting the total fronthaul budget across the APs of a chain.
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SCHEMES = ("ef", "lf", "log")


@dataclass(frozen=True)
class RateSchedule:
    rates: np.ndarray   # bits per uplink sample, one entry per chain position
    scheme: str

    @property
    def total(self) -> float:
        return float(self.rates.sum())


def equal(R_T: float, L_chain: int) -> RateSchedule:
    """Every AP gets R_T / L."""
    _check(R_T, L_chain)
    return RateSchedule(np.full(L_chain, R_T / L_chain), "ef")


def linear(R_T: float, L_chain: int) -> RateSchedule:
    """R_l grows linearly with chain position: R_l = 2 R_T l / (L(L+1))."""
    _check(R_T, L_chain)
    l = np.arange(1, L_chain + 1, dtype=float)
    return RateSchedule(2.0 * R_T * l / (L_chain * (L_chain + 1)), "lf")


def logarithmic(R_T: float, L_chain: int) -> RateSchedule:
    """R_l proportional to log2(l); position 1 gets zero bits."""
    _check(R_T, L_chain)
    if L_chain < 2:
        raise ValueError("logarithmic allocation needs at least 2 chain positions")
    logs = np.log2(np.arange(1, L_chain + 1, dtype=float))
    return RateSchedule(R_T * logs / logs.sum(), "log")


def schedule(scheme: str, R_T: float, L_chain: int) -> RateSchedule:
    if scheme == "ef":
        return equal(R_T, L_chain)
    if scheme == "lf":
        return linear(R_T, L_chain)
    if scheme == "log":
        return logarithmic(R_T, L_chain)
    raise ValueError(f"unknown allocation scheme {scheme!r}")


def path_budget(R_T: float, L_total: int, L_path: int) -> float:
    """Two-Path budget split, proportional to path length.

    This is the unique split under which equal allocation gives every AP
    R_T / L regardless of the path it sits on.
    """
    return R_T * L_path / L_total


def _check(R_T: float, L_chain: int) -> None:
    if R_T <= 0:
        raise ValueError("R_T must be strictly positive")
    if L_chain < 1:
        raise ValueError("chain must contain at least one AP")
