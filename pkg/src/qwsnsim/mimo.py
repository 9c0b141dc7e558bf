"""Complex-matrix MIMO capacity: log-det kernel and TRS-scaled variants.

MIMO capacities here are spectral efficiencies (bit/s/Hz) with noise
normalized to unit power inside the formula; absolute-noise scenarios are
handled by pre-scaling the channel matrix. Power is split equally across
transmit antennas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import TrsGain
from .errors import EmptyUserSetError, NotHermitianError, NotPositiveDefiniteError

# Max elementwise asymmetry tolerated before a matrix is declared non-Hermitian;
# guards against silently factoring a non-Hermitian product.
HERMITIAN_ATOL = 1e-10

# Desk-scale simulator with dense factorization; anything larger is a mistake.
MAX_DIM = 64


@dataclass(frozen=True)
class MimoChannel:
    """One MIMO link: channel matrix H (n_rx x n_tx) and total transmit power."""

    h: np.ndarray
    total_power_w: float

    def __post_init__(self):
        h = np.asarray(self.h, dtype=complex)
        if h.ndim != 2 or h.shape[0] < 1 or h.shape[1] < 1:
            raise ValueError(f"channel matrix must be 2-D and non-empty, got shape {h.shape}")
        if max(h.shape) > MAX_DIM:
            raise ValueError(f"channel matrix dimension exceeds {MAX_DIM}: {h.shape}")
        if not np.all(np.isfinite(h)):
            raise ValueError("channel matrix entries must be finite")
        if self.total_power_w < 0:
            raise ValueError(f"total_power_w must be >= 0, got {self.total_power_w}")
        object.__setattr__(self, "h", h)

    @property
    def n_tx(self) -> int:
        return self.h.shape[1]

    @property
    def n_rx(self) -> int:
        return self.h.shape[0]


def hermitian_logdet(m: np.ndarray) -> float:
    """log2(det(M)) of a Hermitian positive-definite matrix.

    Uses an in-place Cholesky factorization and accumulates log2 of the
    (necessarily positive) pivots, so the determinant never overflows.
    Raises NotHermitianError / NotPositiveDefiniteError otherwise.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    n = a.shape[0]
    if n > MAX_DIM:
        raise ValueError(f"matrix dimension exceeds {MAX_DIM}: {n}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    asym = np.max(np.abs(a - a.conj().T)) if n else 0.0
    if asym > HERMITIAN_ATOL:
        raise NotHermitianError(f"max asymmetry {asym:.3e} exceeds {HERMITIAN_ATOL:.0e}")

    lower = np.zeros((n, n), dtype=complex)
    log2det = 0.0
    for j in range(n):
        pivot = a[j, j].real - np.vdot(lower[j, :j], lower[j, :j]).real
        if not pivot > 0:
            raise NotPositiveDefiniteError(f"pivot {pivot:.3e} at column {j}")
        log2det += math.log2(pivot)
        lower[j, j] = math.sqrt(pivot)
        if j + 1 < n:
            lower[j + 1 :, j] = (
                a[j + 1 :, j] - lower[j + 1 :, :j] @ lower[j, :j].conj()
            ) / lower[j, j]
    return log2det


def mimo_capacity(ch: MimoChannel) -> float:
    """log2 det(I + (P / n_tx) * H * H^H), in bit/s/Hz."""
    return mimo_capacity_trs(ch, TrsGain(1.0))


def mimo_capacity_trs(ch: MimoChannel, gain: TrsGain) -> float:
    """MIMO capacity with the TRS gain boosting the SNR term inside the det.

    Unlike the scalar links (where the gain multiplies the capacity itself),
    the MIMO form places gamma on the signal term: log2 det(I + gamma*(P/n_tx)*H*H^H).
    """
    gram = ch.h @ ch.h.conj().T
    scale = gain.gamma * (ch.total_power_w / ch.n_tx)
    return hermitian_logdet(np.eye(ch.n_rx, dtype=complex) + scale * gram)


def multiuser_mimo_total(channels: Sequence[MimoChannel], gain: TrsGain) -> float:
    """Sum of per-user TRS MIMO capacities."""
    if len(channels) == 0:
        raise EmptyUserSetError("multi-user total requires at least one user")
    return sum(mimo_capacity_trs(ch, gain) for ch in channels)
