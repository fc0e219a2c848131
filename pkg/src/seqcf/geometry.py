# Network geometry, 3GPP UMi large-scale fading and Rayleigh channel draws.
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ConfigError, NetworkConfig
from .linalg import complex_normal

# 3GPP Urban Microcell at 2 GHz: gain_dB(d) = -30.5 - 36.7 log10(d)
_PL_OFFSET_DB = -30.5
_PL_SLOPE = 36.7

# users are never dropped on top of an AP; distances below this floor are
# clamped so the dB gain stays negative
MIN_DISTANCE_M = 1.0


@dataclass(frozen=True)
class Layout:
    ap_positions: np.ndarray   # (L, 2), equally spaced on the ring
    user_positions: np.ndarray  # (K, 2), uniform over the inner disk


@dataclass(frozen=True)
class ChannelRealization:
    H: list          # L matrices, each (N, K); column k is user k's channel
    beta: np.ndarray  # (L, K) linear large-scale gains


def place_network(cfg: NetworkConfig, rng: np.random.Generator) -> Layout:
    """Drop L APs equally spaced on the ring and K users uniformly in the disk.

    Uniformity is over the disk *area*: radius = r_max * sqrt(u).
    """
    angles = 2.0 * np.pi * np.arange(cfg.L) / cfg.L
    ap = cfg.ap_ring_radius * np.stack([np.cos(angles), np.sin(angles)], axis=1)

    r = cfg.user_disk_radius * np.sqrt(rng.random(cfg.K))
    phi = 2.0 * np.pi * rng.random(cfg.K)
    users = np.stack([r * np.cos(phi), r * np.sin(phi)], axis=1)
    return Layout(ap_positions=ap, user_positions=users)


def pathloss_db(d: float | np.ndarray) -> float | np.ndarray:
    """Large-scale channel gain in dB at distance d meters (d clamped at 1 m)."""
    d = np.maximum(d, MIN_DISTANCE_M)
    if np.any(d <= 0):
        raise ConfigError("non-positive distance")
    return _PL_OFFSET_DB - _PL_SLOPE * np.log10(d)


def draw_channels(cfg: NetworkConfig, layout: Layout,
                  rng: np.random.Generator) -> ChannelRealization:
    """Draw H_l with i.i.d. CN(0, beta_kl) entries per user column.

    Antennas are uncorrelated (scaled-identity spatial covariance).
    """
    d = np.linalg.norm(layout.ap_positions[:, None, :]
                       - layout.user_positions[None, :, :], axis=2)  # (L, K)
    beta = 10.0 ** (pathloss_db(d) / 10.0)
    H = []
    for l in range(cfg.L):
        Hl = complex_normal(rng, (cfg.N, cfg.K)) * np.sqrt(beta[l])[None, :]
        H.append(Hl)
    return ChannelRealization(H=H, beta=beta)
