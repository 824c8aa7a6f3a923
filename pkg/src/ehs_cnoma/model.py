"""System constants, distance to variance mapping, Rayleigh gain sampler."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _philox


@dataclass(frozen=True)
class SystemParams:
    """Scalar constants of the downlink.

    rho is the linear transmit SNR (the CLI converts dB). alpha is the
    time-switching fraction, delta the power-splitting fraction, eta the
    energy conversion efficiency. p_n and p_f are the power coefficients of
    the near-user and far-user symbols and must sum to p_total. d1 and d2
    are normalized distances from the base station to the near and far
    user, v is the path loss exponent, r1..r3 are target rates in
    bits/s/Hz.
    """

    rho: float
    alpha: float = 0.3
    delta: float = 0.3
    eta: float = 0.7
    p_n: float = 0.1
    p_f: float = 0.9
    p_total: float = 1.0
    d1: float = 0.5
    d2: float = 1.0
    v: float = 2.0
    r1: float = 1.0
    r2: float = 1.0
    r3: float = 1.0
    sigma_sq: float = 1.0
    t_total: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.rho) or self.rho < 0.0:
            raise ValueError(f"rho must be finite and >= 0, got {self.rho}")
        if not 0.0 < self.p_n < self.p_f:
            raise ValueError(f"need 0 < p_n < p_f, got p_n={self.p_n}, p_f={self.p_f}")
        if not math.isclose(self.p_n + self.p_f, self.p_total, rel_tol=1e-12, abs_tol=1e-12):
            raise ValueError(
                f"p_n + p_f must equal p_total, got {self.p_n + self.p_f} vs p_total={self.p_total}"
            )
        for name in ("alpha", "delta"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value}")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")
        if not 0.0 < self.d1 < self.d2:
            raise ValueError(f"need 0 < d1 < d2, got d1={self.d1}, d2={self.d2}")
        for name in ("r1", "r2", "r3"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.v < 0.0:
            raise ValueError(f"v must be >= 0, got {self.v}")
        if self.sigma_sq <= 0.0:
            raise ValueError(f"sigma_sq must be > 0, got {self.sigma_sq}")
        if self.t_total <= 0.0:
            raise ValueError(f"t_total must be > 0, got {self.t_total}")


@dataclass(frozen=True)
class ChannelVariances:
    """Mean squared channel gains of the three links."""

    lambda_ccu: float
    lambda_ceu: float
    lambda_relay: float

    def __post_init__(self):
        for name in ("lambda_ccu", "lambda_ceu", "lambda_relay"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the squared gains: near-user, far-user, relay link."""

    g_ccu: float
    g_ceu: float
    g_relay: float

    def __post_init__(self):
        for name in ("g_ccu", "g_ceu", "g_relay"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")


def variances_from_distances(params: SystemParams) -> ChannelVariances:
    """Map distances to gain variances: d^(-v), with the relay spanning d2 - d1.

    Collinear geometry, so the far-user link has unit variance at d2 = 1.
    """
    if params.d2 <= params.d1:
        raise ValueError(f"need d1 < d2, got d1={params.d1}, d2={params.d2}")
    return ChannelVariances(
        lambda_ccu=params.d1 ** -params.v,
        lambda_ceu=params.d2 ** -params.v,
        lambda_relay=(params.d2 - params.d1) ** -params.v,
    )


def sample_gains(
    varz: ChannelVariances, seed: int, start: int, stop: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Exponential gains for trials [start, stop), one counter block per trial.

    Lane 0 feeds the near-user gain, lane 1 the far-user gain, lane 2 the
    relay gain; inversion of the exponential CDF keeps every draw a pure
    function of (seed, trial index).
    """
    u = _philox.uniform_lanes(seed, start, stop, lanes=3)
    return (
        -varz.lambda_ccu * np.log1p(-u[:, 0]),
        -varz.lambda_ceu * np.log1p(-u[:, 1]),
        -varz.lambda_relay * np.log1p(-u[:, 2]),
    )


def sample_realization(varz: ChannelVariances, seed: int, trial_index: int) -> ChannelRealization:
    """Draw the three squared gains for one trial, bit-reproducibly."""
    if trial_index < 0:
        raise ValueError(f"trial_index must be >= 0, got {trial_index}")
    g_ccu, g_ceu, g_relay = sample_gains(varz, seed, trial_index, trial_index + 1)
    return ChannelRealization(float(g_ccu[0]), float(g_ceu[0]), float(g_relay[0]))
