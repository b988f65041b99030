"""Bayes factors for point-null and order-constrained hypotheses.

Hypotheses are labelled ``"e"`` (encompassing, unconstrained), ``"r"``
(order-restricted) and ``"0"`` (point null). Every estimate carries an
explicit ``(numerator, denominator)`` direction so inverted ratios are
impossible to confuse; ``estimate.label`` gives e.g. ``"BF_r0"``.

Monte Carlo work is split into chunks of ``chunk_size`` draws. Chunk ``c`` of
the prior leg reads substream ``(0, c)`` of the seed, chunk ``c`` of the
posterior leg reads ``(1, c)``, and chunk counts are combined by integer
addition. Results are therefore bit-identical for any worker count.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .betabinom import BetaParams, BinomialObservation, joint_log_pdf, sample_beta, update_posterior
from .constraints import ConstraintSet, PointNull, satisfies, validate
from .rng import RngStream

__all__ = [
    "DegenerateCountError",
    "SaturationWarning",
    "McSettings",
    "BayesFactorEstimate",
    "proportion_in_region",
    "count_in_region",
    "encompassing_bf",
    "savage_dickey_bf",
    "compose",
    "mc_standard_error",
    "unit_bf",
    "PRIOR_LEG",
    "POSTERIOR_LEG",
]

PRIOR_LEG = 0
POSTERIOR_LEG = 1
DEFAULT_SAMPLES = 1_000_000
DEFAULT_CHUNK_SIZE = 1 << 16

ENCOMPASSING_MC = "encompassing_mc"
SAVAGE_DICKEY = "savage_dickey"
COMPOSED = "composed"


class DegenerateCountError(ArithmeticError):
    """No prior or no posterior draw fell inside the restricted region."""

    def __init__(self, prior_count: int, prior_samples: int, posterior_count: int, posterior_samples: int):
        self.prior_count = prior_count
        self.prior_samples = prior_samples
        self.posterior_count = posterior_count
        self.posterior_samples = posterior_samples
        super().__init__(
            f"Bayes factor undefined: {prior_count}/{prior_samples} prior draws and "
            f"{posterior_count}/{posterior_samples} posterior draws satisfy the restriction. "
            "Increase the number of prior/posterior samples or reformulate the constraint."
        )


class SaturationWarning(RuntimeWarning):
    """Every draw of a leg satisfied the restriction; its standard-error term is dropped."""


@dataclass(frozen=True)
class McSettings:
    prior_samples: int = DEFAULT_SAMPLES
    posterior_samples: int = DEFAULT_SAMPLES
    seed: int = 4491
    chunk_size: int = DEFAULT_CHUNK_SIZE

    def __post_init__(self):
        for name in ("prior_samples", "posterior_samples", "chunk_size"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


@dataclass(frozen=True)
class BayesFactorEstimate:
    """A Bayes factor on the log scale with its provenance.

    ``mc_log_se`` is ``None`` for exact (analytic) values. For Monte Carlo
    estimates the prior and posterior region counts are kept so that
    ``log_bf == log(p_prior_hat) - log(p_post_hat)`` can be re-derived.
    """

    log_bf: float
    direction: tuple[str, str]
    method: str
    mc_log_se: float | None = None
    p_prior_hat: float | None = None
    p_post_hat: float | None = None
    prior_count: int | None = None
    posterior_count: int | None = None
    prior_samples: int | None = None
    posterior_samples: int | None = None
    seed: int | None = None

    @property
    def exact(self) -> bool:
        return self.mc_log_se is None

    @property
    def bf(self) -> float:
        """Linear Bayes factor; ``inf`` when it exceeds the double range (see ``overflow``)."""
        try:
            return math.exp(self.log_bf)
        except OverflowError:
            return math.inf

    @property
    def overflow(self) -> bool:
        return math.isinf(self.bf)

    @property
    def label(self) -> str:
        return f"BF_{self.direction[0]}{self.direction[1]}"

    def inverse(self) -> "BayesFactorEstimate":
        """The reciprocal Bayes factor with swapped direction."""
        return replace(self, log_bf=-self.log_bf, direction=(self.direction[1], self.direction[0]))


def unit_bf(numerator: str, denominator: str) -> BayesFactorEstimate:
    """The exact Bayes factor 1, the identity for :func:`compose`."""
    return BayesFactorEstimate(0.0, (numerator, denominator), SAVAGE_DICKEY)


def _chunk_sizes(n_samples: int, chunk_size: int) -> list[int]:
    full, rest = divmod(n_samples, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def _count_chunk(params: Sequence[BetaParams], cs: ConstraintSet, size: int, stream: RngStream) -> int:
    draws = np.empty((len(params), size))
    for k, p in enumerate(params):
        draws[k] = sample_beta(p, size, stream)
    return int(np.count_nonzero(satisfies(cs, draws)))


def count_in_region(
    params: Sequence[BetaParams],
    cs: ConstraintSet,
    n_samples: int,
    stream: RngStream,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    workers: int = 1,
) -> int:
    """Number of ``n_samples`` joint draws that satisfy ``cs``.

    Chunk ``c`` draws from ``stream.substream(c)``; within a chunk the
    coordinates are drawn in index order.
    """
    if len(params) != cs.k:
        raise ValueError(f"dimension mismatch: {len(params)} Beta parameters for a constraint set over k={cs.k}")
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    jobs = list(enumerate(_chunk_sizes(n_samples, chunk_size)))

    def run(job):
        index, size = job
        return _count_chunk(params, cs, size, stream.substream(index))

    if workers <= 1 or len(jobs) == 1:
        return sum(map(run, jobs))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(run, jobs))


def proportion_in_region(
    params: Sequence[BetaParams],
    cs: ConstraintSet,
    n_samples: int,
    stream: RngStream,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    workers: int = 1,
) -> tuple[float, int]:
    """Monte Carlo estimate of the probability mass of the restricted region.

    Returns ``(p_hat, count)`` with ``p_hat = count / n_samples``.
    """
    count = count_in_region(params, cs, n_samples, stream, chunk_size, workers)
    return count / n_samples, count


def mc_standard_error(p_prior_hat: float, prior_samples: int, p_post_hat: float, posterior_samples: int) -> float:
    """Delta-method standard error of ``log(p_prior_hat / p_post_hat)``.

    ``sqrt((1 - p1) / (I p1) + (1 - p2) / (J p2))`` for independent binomial
    proportions. Undefined when either proportion is 0 or 1.
    """
    for name, p in (("p_prior_hat", p_prior_hat), ("p_post_hat", p_post_hat)):
        if not 0.0 < p < 1.0:
            raise ValueError(f"{name} must lie strictly inside (0, 1) for a finite standard error, got {p}")
    return math.sqrt(
        (1.0 - p_prior_hat) / (prior_samples * p_prior_hat) + (1.0 - p_post_hat) / (posterior_samples * p_post_hat)
    )


def _leg_variance(p: float, n: int) -> float:
    if p >= 1.0:
        return 0.0
    return (1.0 - p) / (n * p)


def _check_dims(priors: Sequence[BetaParams], data: Sequence[BinomialObservation], k: int) -> None:
    if len(priors) != k or len(data) != k:
        raise ValueError(f"dimension mismatch: {len(priors)} priors and {len(data)} observations for k={k}")


def encompassing_bf(
    priors: Sequence[BetaParams],
    data: Sequence[BinomialObservation],
    cs: ConstraintSet,
    mc: McSettings = McSettings(),
    workers: int = 1,
) -> BayesFactorEstimate:
    """Encompassing-prior estimate of ``BF_er``.

    The Bayes factor of the unconstrained model against the order-restricted
    one equals the prior mass of the restricted region divided by its
    posterior mass; both masses are estimated by the fraction of independent
    draws that satisfy ``cs``. Use ``.inverse()`` for ``BF_re``.

    Raises
    ------
    DegenerateCountError
        If no prior or no posterior draw lands inside the region.
    """
    _check_dims(priors, data, cs.k)
    validate(cs)
    posteriors = [update_posterior(p, x) for p, x in zip(priors, data)]
    root = RngStream(mc.seed)
    prior_count = count_in_region(
        priors, cs, mc.prior_samples, root.substream(PRIOR_LEG), mc.chunk_size, workers
    )
    post_count = count_in_region(
        posteriors, cs, mc.posterior_samples, root.substream(POSTERIOR_LEG), mc.chunk_size, workers
    )
    if prior_count == 0 or post_count == 0:
        raise DegenerateCountError(prior_count, mc.prior_samples, post_count, mc.posterior_samples)

    p_prior = prior_count / mc.prior_samples
    p_post = post_count / mc.posterior_samples
    if p_prior == 1.0 or p_post == 1.0:
        warnings.warn(
            f"every draw satisfied the restriction (prior {prior_count}/{mc.prior_samples}, "
            f"posterior {post_count}/{mc.posterior_samples}); the saturated leg contributes no standard error",
            SaturationWarning,
            stacklevel=2,
        )
        se = math.sqrt(_leg_variance(p_prior, mc.prior_samples) + _leg_variance(p_post, mc.posterior_samples))
    else:
        se = mc_standard_error(p_prior, mc.prior_samples, p_post, mc.posterior_samples)

    return BayesFactorEstimate(
        log_bf=math.log(p_prior) - math.log(p_post),
        direction=("e", "r"),
        method=ENCOMPASSING_MC,
        mc_log_se=se,
        p_prior_hat=p_prior,
        p_post_hat=p_post,
        prior_count=prior_count,
        posterior_count=post_count,
        prior_samples=mc.prior_samples,
        posterior_samples=mc.posterior_samples,
        seed=mc.seed,
    )


def savage_dickey_bf(
    priors: Sequence[BetaParams],
    data: Sequence[BinomialObservation],
    point: PointNull,
) -> BayesFactorEstimate:
    """Analytic Savage-Dickey ``BF_e0``: prior density over posterior density at the null point."""
    _check_dims(priors, data, point.k)
    posteriors = [update_posterior(p, x) for p, x in zip(priors, data)]
    log_bf = joint_log_pdf(priors, point.values) - joint_log_pdf(posteriors, point.values)
    return BayesFactorEstimate(log_bf=log_bf, direction=("e", "0"), method=SAVAGE_DICKEY)


def compose(bf_a_over_b: BayesFactorEstimate, bf_b_over_c: BayesFactorEstimate) -> BayesFactorEstimate:
    """Chain two Bayes factors sharing a hypothesis: ``BF_ac = BF_ab * BF_bc``.

    Log values add; standard errors add in quadrature, with exact legs
    contributing zero. The result is exact only if both legs are.
    """
    a, b = bf_a_over_b.direction
    b2, c = bf_b_over_c.direction
    if b != b2:
        raise ValueError(
            f"cannot compose {bf_a_over_b.label} with {bf_b_over_c.label}: "
            f"denominator {b!r} does not match numerator {b2!r}"
        )
    if bf_a_over_b.exact and bf_b_over_c.exact:
        se = None
    else:
        se = math.hypot(bf_a_over_b.mc_log_se or 0.0, bf_b_over_c.mc_log_se or 0.0)
    seed = bf_a_over_b.seed if bf_a_over_b.seed is not None else bf_b_over_c.seed
    return BayesFactorEstimate(
        log_bf=bf_a_over_b.log_bf + bf_b_over_c.log_bf,
        direction=(a, c),
        method=COMPOSED,
        mc_log_se=se,
        seed=seed,
    )
