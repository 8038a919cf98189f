"""Per-modality link model: Shannon-rate delays and Gamma fading gains.

Each modality travels on its own flat-fading channel. A link is fully
described by its payload size in bits and its linear SNR; the achievable
rate is ``bandwidth * log2(1 + snr)`` and delays follow by division.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "InfiniteBandwidthError",
    "LinkSpec",
    "FadingModel",
    "db_to_linear",
    "linear_to_db",
    "transmission_time",
    "required_bandwidth",
    "sample_gain",
]


class InfiniteBandwidthError(ValueError):
    """A zero-second deadline cannot be met at any finite bandwidth."""


def db_to_linear(value_db: float) -> float:
    """Convert a power ratio from dB to linear scale."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    """Convert a positive linear power ratio to dB."""
    if value <= 0:
        raise ValueError(f"ratio must be positive, got {value}")
    return 10.0 * math.log10(value)


@dataclass(frozen=True)
class LinkSpec:
    """One modality's payload size (bits) and linear SNR.

    ``snr_linear`` already folds transmit power and noise density into a
    single dimensionless ratio.
    """

    data_size: int
    snr_linear: float

    def __post_init__(self) -> None:
        if self.data_size < 1:
            raise ValueError(f"data_size must be at least 1 bit, got {self.data_size}")
        if not (self.snr_linear > 0 and math.isfinite(self.snr_linear)):
            raise ValueError(
                f"snr_linear must be positive and finite, got {self.snr_linear}"
            )

    @property
    def spectral_efficiency(self) -> float:
        """Achievable bits per second per Hz: log2(1 + snr)."""
        return math.log2(1.0 + self.snr_linear)


@dataclass(frozen=True)
class FadingModel:
    """Gamma-distributed squared channel gain, shape-scale parameterization.

    The defaults (shape 0.5, scale 2) give unit mean, so scaling by a
    power-over-noise factor yields the mean SNR directly.
    """

    shape: float = 0.5
    scale: float = 2.0

    def __post_init__(self) -> None:
        if self.shape <= 0:
            raise ValueError(f"shape must be positive, got {self.shape}")
        if self.scale <= 0:
            raise ValueError(f"scale must be positive, got {self.scale}")

    @property
    def mean(self) -> float:
        return self.shape * self.scale

    @property
    def variance(self) -> float:
        return self.shape * self.scale**2


def transmission_time(link: LinkSpec, bandwidth: float) -> float:
    """Seconds needed to deliver the payload over the given bandwidth (Hz).

    Strictly decreasing in bandwidth and strictly increasing in payload
    size. Zero or negative bandwidth is a domain error; callers that want
    "never arrives" semantics for an unfunded link handle that themselves.
    """
    if bandwidth <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    return link.data_size / (bandwidth * link.spectral_efficiency)


def required_bandwidth(link: LinkSpec, deadline: float) -> float:
    """Minimum bandwidth (Hz) that delivers the payload within the deadline.

    Exact algebraic inverse of :func:`transmission_time`. A deadline of
    exactly zero raises :class:`InfiniteBandwidthError` so that allocation
    code can mark the corresponding quality threshold as infeasible.
    """
    if deadline < 0:
        raise ValueError(f"deadline must be non-negative, got {deadline}")
    if deadline == 0:
        raise InfiniteBandwidthError(
            f"zero deadline for {link.data_size} bits needs unbounded bandwidth"
        )
    return link.data_size / (deadline * link.spectral_efficiency)


def sample_gain(rng: np.random.Generator, model: FadingModel = FadingModel()) -> float:
    """Draw one squared-gain sample; deterministic for a fixed generator state."""
    return float(rng.gamma(model.shape, model.scale))
