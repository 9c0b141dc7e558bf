"""Scalar channel models: Shannon capacity, fading, and TRS gain.

Everything works in plain SI units (Hz, W, bit/s); dB conversion, if any,
belongs to the caller. All functions are pure; randomness enters only through
an explicitly passed ``numpy.random.Generator``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .numeric import stable_mean

_LN2 = math.log(2.0)


class FadingKind(Enum):
    AWGN = "awgn"
    RAYLEIGH = "rayleigh"
    RICIAN = "rician"


@dataclass(frozen=True)
class LinkBudget:
    """Bandwidth and power levels of one directed link.

    Noise must be strictly positive: a noiseless link would have infinite
    capacity, which the downstream time/energy formulas cannot represent.
    """

    bandwidth_hz: float
    signal_power_w: float
    noise_power_w: float
    interference_power_w: float = 0.0

    def __post_init__(self):
        if not self.bandwidth_hz > 0:
            raise ValueError(f"bandwidth_hz must be > 0, got {self.bandwidth_hz}")
        if self.signal_power_w < 0:
            raise ValueError(f"signal_power_w must be >= 0, got {self.signal_power_w}")
        if not self.noise_power_w > 0:
            raise ValueError(f"noise_power_w must be > 0, got {self.noise_power_w}")
        if self.interference_power_w < 0:
            raise ValueError(
                f"interference_power_w must be >= 0, got {self.interference_power_w}"
            )


@dataclass(frozen=True)
class FadingSpec:
    """Statistical fading model of a link.

    ``mean_power`` is the mean of |h|^2 (defaults to normalized fading, 1.0);
    ``k_factor`` is the Rician LOS-to-scatter power ratio and is only allowed
    for the Rician kind.
    """

    kind: FadingKind
    mean_power: float = 1.0
    k_factor: float | None = None

    def __post_init__(self):
        if self.kind is not FadingKind.AWGN and not self.mean_power > 0:
            raise ValueError(f"mean_power must be > 0, got {self.mean_power}")
        if self.kind is FadingKind.RICIAN:
            if self.k_factor is None:
                raise ValueError("Rician fading requires a k_factor")
            if self.k_factor < 0:
                raise ValueError(f"k_factor must be >= 0, got {self.k_factor}")
        elif self.k_factor is not None:
            raise ValueError(f"k_factor is only valid for Rician fading, got kind={self.kind}")

    @staticmethod
    def awgn() -> "FadingSpec":
        return FadingSpec(FadingKind.AWGN)

    @staticmethod
    def rayleigh(mean_power: float = 1.0) -> "FadingSpec":
        return FadingSpec(FadingKind.RAYLEIGH, mean_power=mean_power)

    @staticmethod
    def rician(k_factor: float, mean_power: float = 1.0) -> "FadingSpec":
        return FadingSpec(FadingKind.RICIAN, mean_power=mean_power, k_factor=k_factor)


@dataclass(frozen=True)
class FadingDraw:
    """One realized squared fading magnitude |h|^2."""

    h_squared: float

    def __post_init__(self):
        if self.h_squared < 0:
            raise ValueError(f"h_squared must be >= 0, got {self.h_squared}")


@dataclass(frozen=True)
class TrsGain:
    """Multiplicative TRS improvement factor applied to a link.

    gamma = 1 is the explicit "TRS off" identity.
    """

    gamma: float

    def __post_init__(self):
        if not self.gamma >= 1.0:
            raise ValueError(f"gamma must be >= 1, got {self.gamma}")


TRS_OFF = TrsGain(1.0)


def _capacity(bandwidth_hz, signal_w, noise_w, interference_w):
    # log1p keeps full precision for tiny SNR (sweeps routinely hit SNR < 1e-8).
    snr = signal_w / (noise_w + interference_w)
    return bandwidth_hz * np.log1p(snr) / _LN2


def shannon_capacity(link: LinkBudget) -> float:
    """Capacity B * log2(1 + S / (N + I)) of a link, in bit/s."""
    return float(
        _capacity(
            link.bandwidth_hz,
            link.signal_power_w,
            link.noise_power_w,
            link.interference_power_w,
        )
    )


def faded_capacity(link: LinkBudget, draw: FadingDraw) -> float:
    """Capacity of the link with its signal power scaled by the fading draw."""
    return float(
        _capacity(
            link.bandwidth_hz,
            link.signal_power_w * draw.h_squared,
            link.noise_power_w,
            link.interference_power_w,
        )
    )


def faded_capacity_samples(link: LinkBudget, h_squared: np.ndarray) -> np.ndarray:
    """Vectorized faded capacity over an array of |h|^2 draws."""
    return _capacity(
        link.bandwidth_hz,
        link.signal_power_w * np.asarray(h_squared, dtype=float),
        link.noise_power_w,
        link.interference_power_w,
    )


def apply_trs(capacity_bps: float, gain: TrsGain) -> float:
    """Scale a capacity by the TRS gain: C_trs = gamma * C."""
    if capacity_bps < 0:
        raise ValueError(f"capacity must be >= 0, got {capacity_bps}")
    return gain.gamma * capacity_bps


def sample_h_squared(spec: FadingSpec, rng: np.random.Generator, size=None):
    """Draw |h|^2 value(s) from the fading distribution.

    Returns a float when ``size`` is None, otherwise an ndarray. AWGN is the
    degenerate draw |h|^2 = 1 and consumes no randomness. Rayleigh |h|^2 is
    exponential with mean ``mean_power``. Rician h is built as a real LOS
    component sqrt(K*omega/(K+1)) plus circular complex Gaussian scatter of
    total variance omega/(K+1), so E[|h|^2] = omega for every K.
    """
    if spec.kind is FadingKind.AWGN:
        return 1.0 if size is None else np.ones(size)
    if spec.kind is FadingKind.RAYLEIGH:
        out = rng.exponential(spec.mean_power, size=size)
        return float(out) if size is None else out
    k = spec.k_factor
    omega = spec.mean_power
    los = math.sqrt(k * omega / (k + 1.0))
    sigma = math.sqrt(omega / (2.0 * (k + 1.0)))
    re = los + sigma * rng.standard_normal(size)
    im = sigma * rng.standard_normal(size)
    out = re * re + im * im
    return float(out) if size is None else out


def sample_fading(spec: FadingSpec, rng: np.random.Generator) -> FadingDraw:
    """Draw one fading realization."""
    return FadingDraw(h_squared=sample_h_squared(spec, rng))


def ergodic_capacity(
    link: LinkBudget, spec: FadingSpec, n_samples: int, rng: np.random.Generator
) -> float:
    """Monte-Carlo mean of the faded capacity over ``n_samples`` draws."""
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    h2 = sample_h_squared(spec, rng, size=n_samples)
    caps = _capacity(
        link.bandwidth_hz,
        link.signal_power_w * h2,
        link.noise_power_w,
        link.interference_power_w,
    )
    return stable_mean(caps)
