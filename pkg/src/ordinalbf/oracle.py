"""Reference computations for validating the Monte Carlo engine.

Nothing here touches the sampling path. Densities use ``math.lgamma``
rather than the package's Lanczos routine, and the regularized incomplete
beta function is evaluated by its continued fraction, so agreement with the
engine is evidence rather than tautology.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy import integrate

from .betabinom import BetaParams
from .constraints import ConstraintSet

__all__ = [
    "OracleError",
    "regularized_incomplete_beta",
    "log_regularized_incomplete_beta",
    "exact_pairwise_order_prob",
    "log_pairwise_order_prob",
    "exact_interval_prob",
    "grid_order_prob",
    "exact_bf_er_pairwise",
    "CF_MAX_ITERATIONS",
    "CF_TOLERANCE",
    "QUAD_EPSABS",
    "QUAD_EPSREL",
]

CF_MAX_ITERATIONS = 10_000
CF_TOLERANCE = 1e-15
QUAD_EPSABS = 1e-13
QUAD_EPSREL = 1e-11
# Accepted error of the pairwise probability; quadrature above this raises.
PAIRWISE_TOLERANCE = 1e-8

_TINY = 1e-300


class OracleError(RuntimeError):
    """A reference computation failed to reach its documented accuracy."""

    def __init__(self, message: str, achieved: float | None = None):
        self.achieved = achieved
        super().__init__(message if achieved is None else f"{message} (achieved error estimate {achieved:.3g})")


def _log_beta_fn(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _log_pdf(p: BetaParams, t):
    t = np.asarray(t, dtype=float)
    return (p.alpha - 1.0) * np.log(t) + (p.beta - 1.0) * np.log1p(-t) - _log_beta_fn(p.alpha, p.beta)


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for I_x(a, b), modified Lentz evaluation."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, CF_MAX_ITERATIONS + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < CF_TOLERANCE:
            return h
    raise OracleError(
        f"incomplete beta continued fraction did not converge in {CF_MAX_ITERATIONS} iterations "
        f"for a={a}, b={b}, x={x}",
        achieved=abs(delta - 1.0),
    )


def log_regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """``log I_x(a, b)``, accurate deep into the lower tail."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return -math.inf
    if x == 1.0:
        return 0.0
    log_front = a * math.log(x) + b * math.log1p(-x) - _log_beta_fn(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return log_front + math.log(_beta_cf(a, b, x)) - math.log(a)
    upper = math.exp(log_front + math.log(_beta_cf(b, a, 1.0 - x)) - math.log(b))
    return math.log1p(-upper) if upper < 1.0 else -math.inf


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """``I_x(a, b)``, the CDF of Beta(a, b) at ``x``."""
    return math.exp(log_regularized_incomplete_beta(a, b, x))


def _breakpoints(*params: BetaParams) -> list[float]:
    pts = set()
    for p in params:
        mean = p.alpha / (p.alpha + p.beta)
        sd = math.sqrt(p.alpha * p.beta / ((p.alpha + p.beta) ** 2 * (p.alpha + p.beta + 1.0)))
        for z in (-10, -6, -3, -1, 0, 1, 3, 6, 10):
            t = mean + z * sd
            if 0.0 < t < 1.0:
                pts.add(round(t, 15))
    return sorted(pts)


def log_pairwise_order_prob(a: BetaParams, b: BetaParams) -> tuple[float, float]:
    """``log P(theta_a < theta_b)`` and an absolute error bound on the log.

    Integrates ``pdf_b(t) * I_t(a)`` over (0, 1) with scipy's adaptive
    QUADPACK routine, after scaling by the integrand's maximum so that
    probabilities far below the double range still come out as finite logs.
    """

    def log_integrand(t: float) -> float:
        if t <= 0.0 or t >= 1.0:
            return -math.inf
        return float(_log_pdf(b, t)) + log_regularized_incomplete_beta(a.alpha, a.beta, t)

    grid = np.concatenate([np.linspace(0.0, 1.0, 4097)[1:-1], _breakpoints(a, b)])
    values = np.array([log_integrand(t) for t in grid])
    peak = int(np.argmax(values))
    log_scale = float(values[peak])
    if not math.isfinite(log_scale):
        raise OracleError(f"integrand vanishes on the evaluation grid for {a} vs {b}")

    points = sorted(set(_breakpoints(a, b)) | {float(grid[peak])})
    value, abserr = integrate.quad(
        lambda t: math.exp(log_integrand(t) - log_scale),
        0.0,
        1.0,
        points=points,
        epsabs=QUAD_EPSABS,
        epsrel=QUAD_EPSREL,
        limit=1000,
    )
    if value <= 0.0:
        raise OracleError(f"quadrature returned a non-positive mass for {a} vs {b}", achieved=abserr)
    log_err = abserr / value
    prob = math.exp(log_scale) * value
    if log_err > 1e-8 and abserr * math.exp(log_scale) > PAIRWISE_TOLERANCE:
        raise OracleError(f"quadrature for P({a} < {b}) did not converge", achieved=abserr * math.exp(log_scale))
    if prob > 1.0 + PAIRWISE_TOLERANCE:
        raise OracleError(f"quadrature for P({a} < {b}) exceeds one", achieved=prob - 1.0)
    return log_scale + math.log(value), log_err


def exact_pairwise_order_prob(a: BetaParams, b: BetaParams) -> float:
    """``P(theta_a < theta_b)`` for independent Beta variates, absolute error below 1e-8."""
    if a == b:
        return 0.5
    log_p, _ = log_pairwise_order_prob(a, b)
    return min(1.0, math.exp(log_p))


def exact_interval_prob(p: BetaParams, lo: float, hi: float) -> float:
    """``P(lo < theta < hi)`` for ``theta ~ Beta(p)``."""
    if not 0.0 <= lo <= hi <= 1.0:
        raise ValueError(f"need 0 <= lo <= hi <= 1, got ({lo}, {hi})")
    lower = regularized_incomplete_beta(p.alpha, p.beta, lo)
    upper = regularized_incomplete_beta(p.alpha, p.beta, hi)
    return upper - lower


def grid_order_prob(params: Sequence[BetaParams], cs: ConstraintSet, resolution: int) -> float:
    """Brute-force mass of the restricted region on a ``resolution ** K`` grid.

    Each axis is cut into equal cells and a cell counts when its centre
    satisfies every relation. A counted cell contributes its exact
    probability mass, the product of per-axis CDF differences, so singular
    densities such as Beta(0.5, 0.5) are handled and the empty constraint set
    returns 1. Only cells cut by the region boundary are misclassified, which
    gives an O(1/resolution) error (the tie diagonal is always excluded).
    Only ``K <= 3`` is accepted.
    """
    k = len(params)
    if k != cs.k:
        raise ValueError(f"dimension mismatch: {k} Beta parameters for a constraint set over k={cs.k}")
    if k > 3:
        raise ValueError(f"grid oracle refuses K={k} > 3 (cost grows as resolution**K)")
    if resolution < 100:
        raise ValueError(f"resolution must be >= 100, got {resolution}")

    centres = (np.arange(resolution) + 0.5) / resolution
    edges = np.arange(resolution + 1) / resolution
    weights = []
    for p in params:
        cdf = np.array([regularized_incomplete_beta(p.alpha, p.beta, e) for e in edges])
        weights.append(np.diff(cdf))

    if not cs.relations:
        return float(np.prod([w.sum() for w in weights]))
    if k == 2:
        grid = np.meshgrid(centres, centres, indexing="ij")
        mask = np.ones((resolution, resolution), dtype=bool)
        for i, j in cs.relations:
            mask &= grid[i] < grid[j]
        return float(weights[0] @ (mask @ weights[1]))

    # k == 3: sweep the first axis, vectorise the other two.
    second, third = np.meshgrid(centres, centres, indexing="ij")
    plane = np.outer(weights[1], weights[2])
    total = 0.0
    for idx, first in enumerate(centres):
        axes = (np.full_like(second, first), second, third)
        mask = np.ones_like(second, dtype=bool)
        for i, j in cs.relations:
            mask &= axes[i] < axes[j]
        total += weights[0][idx] * float(plane[mask].sum())
    return total


def exact_bf_er_pairwise(
    priors: Sequence[BetaParams], posteriors: Sequence[BetaParams], cs: ConstraintSet
) -> float:
    """Exact ``log BF_er`` for two parameters and one order relation."""
    if cs.k != 2 or len(cs.relations) != 1 or len(priors) != 2 or len(posteriors) != 2:
        raise ValueError("exact_bf_er_pairwise needs K=2 with exactly one relation")
    (i, j), = cs.relations
    if priors[i] == priors[j]:
        log_prior = math.log(0.5)
    else:
        log_prior, _ = log_pairwise_order_prob(priors[i], priors[j])
    if posteriors[i] == posteriors[j]:
        log_post = math.log(0.5)
    else:
        log_post, _ = log_pairwise_order_prob(posteriors[i], posteriors[j])
    return log_prior - log_post
