"""Conjugate beta-binomial machinery.

Every density and marginal likelihood here is returned on the natural-log
scale. Linear-scale values underflow quickly: the joint posterior density of
the replication study at (0.5, 0.5) is already around 1e-6, and more data
pushes it past the double range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .rng import RngStream
from .special import log_beta_function, log_gamma

__all__ = [
    "BetaParams",
    "BinomialObservation",
    "DomainError",
    "update_posterior",
    "log_beta_pdf",
    "log_beta_binomial_pmf",
    "sample_beta",
    "joint_log_pdf",
]


class DomainError(ValueError):
    """A parameter value lies outside the open unit interval."""


@dataclass(frozen=True)
class BetaParams:
    """Shape pair of a Beta distribution. Shapes are real and strictly positive."""

    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)):
                raise TypeError(f"Beta shape {name} must be a real number, got {value!r}")
            value = float(value)
            if not math.isfinite(value) or value <= 0.0:
                raise ValueError(f"Beta shape {name} must be finite and > 0, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)

    def __str__(self) -> str:
        return f"Beta({self.alpha:g}, {self.beta:g})"


@dataclass(frozen=True)
class BinomialObservation:
    """``successes`` out of ``trials`` for one measure."""

    successes: int
    trials: int

    def __post_init__(self):
        for name in ("successes", "trials"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise TypeError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if not 0 <= self.successes <= self.trials:
            raise ValueError(
                f"need 0 <= successes <= trials, got successes={self.successes}, trials={self.trials}"
            )

    @property
    def failures(self) -> int:
        return self.trials - self.successes


def update_posterior(prior: BetaParams, obs: BinomialObservation) -> BetaParams:
    """Conjugate update: Beta(a, b) with x of n successes gives Beta(a + x, b + n - x)."""
    return BetaParams(prior.alpha + obs.successes, prior.beta + obs.failures)


def _check_unit_open(theta):
    arr = np.asarray(theta, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise DomainError(f"density evaluation requires 0 < theta < 1, got {theta!r}")
    return arr


def log_beta_pdf(params: BetaParams, theta):
    """Log density of ``Beta(params)`` at ``theta``.

    ``theta`` may be a scalar or an array; every element must lie strictly
    inside (0, 1). Returns a float for scalar input.
    """
    arr = _check_unit_open(theta)
    a, b = params.alpha, params.beta
    out = -log_beta_function(a, b)
    # Skip the log term when its exponent is zero so Beta(1, .) stays exact.
    if a != 1.0:
        out = out + (a - 1.0) * np.log(arr)
    if b != 1.0:
        out = out + (b - 1.0) * np.log1p(-arr)
    if arr.ndim == 0:
        return float(out)
    return np.broadcast_to(out, arr.shape).astype(float)


def log_beta_binomial_pmf(prior: BetaParams, obs: BinomialObservation) -> float:
    """Log marginal likelihood ``ln[C(n, x) B(a + x, b + n - x) / B(a, b)]``."""
    x, n = obs.successes, obs.trials
    log_choose = log_gamma(n + 1) - log_gamma(x + 1) - log_gamma(n - x + 1)
    post = update_posterior(prior, obs)
    return log_choose + log_beta_function(post.alpha, post.beta) - log_beta_function(prior.alpha, prior.beta)


def sample_beta(params: BetaParams, count: int, stream: RngStream) -> np.ndarray:
    """Draw ``count`` independent Beta variates from ``stream``.

    Uses numpy's ``Generator.beta``: Joehnk's rejection method when both
    shapes are at most 1, otherwise the ratio ``X / (X + Y)`` of two
    Marsaglia-Tsang gamma variates. Both are exact and consume only the
    stream's bit generator, so the output is a pure function of the stream
    identity, the shapes and ``count``.
    """
    if isinstance(count, bool) or int(count) != count or count < 1:
        raise ValueError(f"count must be a positive integer, got {count!r}")
    return stream.generator.beta(params.alpha, params.beta, size=int(count))


def joint_log_pdf(params: Sequence[BetaParams], theta: Sequence[float]) -> float:
    """Sum of per-coordinate log densities for independent Beta coordinates."""
    if len(params) != len(theta):
        raise ValueError(f"dimension mismatch: {len(params)} Beta parameters but theta has length {len(theta)}")
    if not params:
        raise ValueError("need at least one coordinate")
    return float(sum(log_beta_pdf(p, t) for p, t in zip(params, theta)))
