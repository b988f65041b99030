import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from ordinalbf import (
    BetaParams,
    BinomialObservation,
    DomainError,
    RngStream,
    joint_log_pdf,
    log_beta_binomial_pmf,
    log_beta_pdf,
    sample_beta,
    update_posterior,
)

import golden

shapes = st.floats(min_value=0.1, max_value=200, allow_nan=False)


@st.composite
def observations(draw, max_n=60):
    n = draw(st.integers(0, max_n))
    return BinomialObservation(draw(st.integers(0, n)), n)


class TestTypes:
    @pytest.mark.parametrize("a,b", [(0, 1), (1, 0), (-1, 2), (math.inf, 1), (math.nan, 1)])
    def test_beta_params_rejects(self, a, b):
        with pytest.raises(ValueError):
            BetaParams(a, b)

    def test_beta_params_stores_reals(self):
        p = BetaParams(1, 2)
        assert isinstance(p.alpha, float) and p == BetaParams(1.0, 2.0)

    @pytest.mark.parametrize("x,n", [(-1, 3), (4, 3), (0, -1)])
    def test_observation_rejects(self, x, n):
        with pytest.raises(ValueError):
            BinomialObservation(x, n)

    def test_observation_rejects_float(self):
        with pytest.raises(TypeError):
            BinomialObservation(1.5, 3)


class TestUpdatePosterior:
    def test_paper_cases(self):
        assert update_posterior(BetaParams(1, 1), BinomialObservation(24, 52)) == BetaParams(25, 29)
        assert update_posterior(BetaParams(1, 1), BinomialObservation(41, 52)) == BetaParams(42, 12)

    def test_no_data(self):
        p = BetaParams(2.5, 7)
        assert update_posterior(p, BinomialObservation(0, 0)) == p

    @given(a=shapes, b=shapes, o1=observations(), o2=observations())
    def test_chained_equals_pooled(self, a, b, o1, o2):
        prior = BetaParams(a, b)
        chained = update_posterior(update_posterior(prior, o1), o2)
        pooled = update_posterior(prior, BinomialObservation(o1.successes + o2.successes, o1.trials + o2.trials))
        if a.is_integer() and b.is_integer():
            assert chained == pooled
        else:
            assert chained.alpha == pytest.approx(pooled.alpha, rel=1e-15)
            assert chained.beta == pytest.approx(pooled.beta, rel=1e-15)

    def test_chained_equals_pooled_integers_exact(self):
        prior = BetaParams(1, 1)
        assert update_posterior(update_posterior(prior, BinomialObservation(41, 52)), BinomialObservation(25, 29)) == BetaParams(67, 16)


class TestLogBetaPdf:
    def test_uniform(self):
        assert log_beta_pdf(BetaParams(1, 1), 0.5) == 0.0

    def test_linear(self):
        assert log_beta_pdf(BetaParams(2, 1), 0.5) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("key", sorted(golden.LOG_PDF))
    def test_golden(self, key):
        a, b, t = key
        assert log_beta_pdf(BetaParams(a, b), t) == pytest.approx(golden.LOG_PDF[key], rel=1e-13, abs=1e-13)

    @pytest.mark.parametrize("theta", [0.0, 1.0, -0.1, 1.5])
    def test_domain(self, theta):
        with pytest.raises(DomainError):
            log_beta_pdf(BetaParams(2, 3), theta)

    def test_vectorised(self):
        t = np.array([0.1, 0.5, 0.9])
        got = log_beta_pdf(BetaParams(3, 4), t)
        assert got.shape == (3,)
        assert got[1] == pytest.approx(log_beta_pdf(BetaParams(3, 4), 0.5))

    @pytest.mark.parametrize("a", [0.5, 1, 2, 25, 42, 100])
    @pytest.mark.parametrize("b", [0.5, 1, 2, 25, 42, 100])
    def test_normalisation(self, a, b):
        p = BetaParams(a, b)
        mode = min(max((a - 1) / (a + b - 2), 0.01), 0.99) if a + b > 2 else 0.5
        total, _ = integrate.quad(lambda t: math.exp(log_beta_pdf(p, t)), 0, 1, points=[mode], limit=200)
        assert total == pytest.approx(1.0, abs=1e-6)

    @given(a=shapes, b=shapes, obs=observations())
    @settings(max_examples=60)
    def test_conjugacy(self, a, b, obs):
        prior = BetaParams(a, b)
        post = update_posterior(prior, obs)
        grid = np.linspace(0.05, 0.95, 19)

        def log_unnorm(t):
            return log_beta_pdf(prior, t) + obs.successes * math.log(t) + obs.failures * math.log1p(-t)

        const = log_beta_pdf(post, grid[0]) - log_unnorm(grid[0])
        for t in grid[1:]:
            lhs = log_beta_pdf(post, t)
            rhs = log_unnorm(t) + const
            assert math.exp(lhs - rhs) == pytest.approx(1.0, rel=1e-10)


class TestBetaBinomialPmf:
    def test_empty_data(self):
        assert log_beta_binomial_pmf(BetaParams(1, 1), BinomialObservation(0, 0)) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("n", [1, 5, 52])
    def test_uniform_prior(self, n):
        for x in range(n + 1):
            got = log_beta_binomial_pmf(BetaParams(1, 1), BinomialObservation(x, n))
            assert got == pytest.approx(-math.log(n + 1), rel=1e-12)

    def test_exact_rational(self):
        # C(2,1) B(3,3) / B(2,2) with B(p, q) = (p-1)!(q-1)!/(p+q-1)!
        def beta_fn(p, q):
            return Fraction(math.factorial(p - 1) * math.factorial(q - 1), math.factorial(p + q - 1))

        exact = 2 * beta_fn(3, 3) / beta_fn(2, 2)
        assert exact == Fraction(2, 5)
        assert math.exp(log_beta_binomial_pmf(BetaParams(2, 2), BinomialObservation(1, 2))) == pytest.approx(0.4, rel=1e-13)

    @pytest.mark.parametrize("a,b", [(1, 1), (0.5, 0.5), (2, 7), (42, 12), (25, 29)])
    @pytest.mark.parametrize("n", [0, 1, 10, 29, 50])
    def test_sums_to_one(self, a, b, n):
        total = sum(math.exp(log_beta_binomial_pmf(BetaParams(a, b), BinomialObservation(x, n))) for x in range(n + 1))
        assert total == pytest.approx(1.0, abs=1e-10)


class TestSampling:
    def test_deterministic(self):
        p = BetaParams(25, 29)
        a = sample_beta(p, 100, RngStream(1234))
        b = sample_beta(p, 100, RngStream(1234))
        assert np.array_equal(a, b)
        assert not np.array_equal(a, sample_beta(p, 100, RngStream(1235)))

    @pytest.mark.parametrize("a,b", [(1, 1), (42, 12)])
    def test_mean(self, a, b):
        n = 10**6
        draws = sample_beta(BetaParams(a, b), n, RngStream(7))
        mean = a / (a + b)
        sd = math.sqrt(a * b / ((a + b) ** 2 * (a + b + 1)))
        assert abs(draws.mean() - mean) < 3 * sd / math.sqrt(n)

    @pytest.mark.parametrize("a,b", [(1, 1), (0.5, 0.5), (25, 29), (42, 12)])
    def test_decile_cdf(self, a, b):
        n = 10**6
        draws = np.sort(sample_beta(BetaParams(a, b), n, RngStream(99)))
        for q in np.linspace(0.1, 0.9, 9):
            x = special.betaincinv(a, b, q)
            cdf = special.betainc(a, b, x)
            emp = np.searchsorted(draws, x) / n
            assert abs(emp - cdf) < 3 * math.sqrt(cdf * (1 - cdf) / n)

    def test_count_validation(self):
        with pytest.raises(ValueError):
            sample_beta(BetaParams(1, 1), 0, RngStream(1))


class TestJointLogPdf:
    def test_uniform(self):
        assert joint_log_pdf([BetaParams(1, 1)] * 2, [0.5, 0.5]) == 0.0

    def test_single(self):
        p = BetaParams(3, 9)
        assert joint_log_pdf([p], [0.2]) == log_beta_pdf(p, 0.2)

    def test_additivity_golden(self):
        got = joint_log_pdf([BetaParams(42, 12), BetaParams(25, 29)], [0.5, 0.5])
        want = golden.LOG_PDF[(42.0, 12.0, 0.5)] + golden.LOG_PDF[(25.0, 29.0, 0.5)]
        assert got == pytest.approx(want, rel=1e-13)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            joint_log_pdf([BetaParams(1, 1)], [0.5, 0.5])
