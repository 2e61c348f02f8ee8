import math
import tracemalloc

import numpy as np
import pytest

from ple_estimation import EstimatorFactory, EstimatorMethod
from ple_estimation.estimators import tls_closed_form, tls_cost, tls_roots, tls_svd
from ple_estimation.estimators.tls import NEGATIVE_CORRELATION
from ple_estimation.exceptions import InsufficientSamplesError


class TestTlsClosedForm:
    """Tests for the closed-form TLS estimate."""

    def test_single_pair(self, make_samples):
        """Test ΔP = -10, L̂ = -2 gives η = 2.4 and γ̂ = 5."""
        report = tls_closed_form(make_samples([-10.0], [-2.0]))
        assert report.eta == pytest.approx(2.4)
        assert report.gamma_hat == pytest.approx(5.0)
        assert report.method == EstimatorMethod.TLS_CLOSED
        assert report.sample_count == 1
        assert not report.degenerate

    @pytest.mark.parametrize("gamma", [0.5, 2.0, 6.0])
    def test_noise_free_exact(self, make_rank_samples, rng, gamma):
        """Test ΔP = γ·L̂ recovers γ."""
        samples = make_rank_samples(20, gamma, 0.0, rng)
        report = tls_closed_form(samples)
        assert report.gamma_hat == pytest.approx(gamma, rel=1e-12)

    def test_orthogonal_is_degenerate(self, make_samples):
        """Test L̂ᵀΔP = 0 is flagged instead of estimated."""
        report = tls_closed_form(make_samples([2.0, -1.0], [-1.0, -2.0]))
        assert report.degenerate
        assert report.gamma_hat is None
        assert report.reason

    def test_zero_power_differences(self, make_samples):
        """Test ΔP = 0 everywhere is flagged."""
        assert tls_closed_form(make_samples([0.0, 0.0], [-1.0, -2.0])).degenerate

    def test_empty_samples(self, make_samples):
        """Test an empty sample set raises."""
        with pytest.raises(InsufficientSamplesError):
            tls_closed_form(make_samples([], []))

    def test_linear_memory(self, make_samples, rng):
        """Test the closed form allocates nothing proportional to N²."""
        n = 1_000_000
        l_hat = -rng.random(n) * 10.0
        samples = make_samples(3.0 * l_hat + rng.normal(0.0, 1.0, n), l_hat)
        tracemalloc.start()
        try:
            report = tls_closed_form(samples)
            _, peak = tracemalloc.get_traced_memory()
        finally:
            tracemalloc.stop()
        assert report.gamma_hat == pytest.approx(3.0, rel=0.05)
        assert peak < 1_000_000


class TestTlsRoots:
    """Tests for the stationary points of the TLS cost."""

    @pytest.mark.parametrize("eta", [-50.0, -2.4, -1e-3, 0.0, 1e-3, 2.4, 50.0, 1e6])
    def test_product_is_minus_one(self, eta):
        """Test γ̂₁·γ̂₂ = -1."""
        positive, negative = tls_roots(eta)
        assert positive > 0 > negative
        assert positive * negative == pytest.approx(-1.0, abs=1e-12)

    def test_positive_root_minimises_cost(self, make_rank_samples):
        """Test the returned root has the smaller cost on realistic data."""
        gen = np.random.default_rng(4)
        for _ in range(200):
            n_hat = int(gen.integers(3, 30))
            samples = make_rank_samples(n_hat, gen.uniform(2, 6), gen.uniform(0.5, 12), gen)
            report = tls_closed_form(samples)
            if report.degenerate:
                continue
            positive, negative = tls_roots(report.eta)
            assert positive * negative == pytest.approx(-1.0, abs=1e-12)
            if report.reason is None:
                assert tls_cost(samples, positive) <= tls_cost(samples, negative)

    def test_random_corpus_minimises_or_flags(self, make_samples):
        """Test on Normal data the root minimises the cost, or the report says why not."""
        gen = np.random.default_rng(17)
        flagged = 0
        for _ in range(1000):
            n = int(gen.integers(1, 501))
            samples = make_samples(gen.normal(size=n), gen.normal(size=n))
            report = tls_closed_form(samples)
            assert not report.degenerate
            positive, negative = tls_roots(report.eta)
            assert report.gamma_hat == positive
            j_pos, j_neg = tls_cost(samples, positive), tls_cost(samples, negative)
            if float(samples.l_hat @ samples.delta_p) > 0:
                assert report.reason is None
                assert j_pos <= j_neg * (1.0 + 1e-12)
            else:
                flagged += 1
                assert report.reason == NEGATIVE_CORRELATION
                assert j_pos >= j_neg * (1.0 - 1e-12)
        assert 350 < flagged < 650

    def test_negative_correlation_flagged_by_both_solvers(self, make_samples):
        """Test anti-correlated data keeps γ̂ > 0 and sets the reason in both solvers."""
        l_hat = np.array([-1.0, -2.0, -3.0, -4.0])
        samples = make_samples(-2.0 * l_hat + np.array([0.1, -0.1, 0.05, 0.0]), l_hat)
        closed = tls_closed_form(samples)
        svd = tls_svd(samples)
        assert not closed.degenerate and not svd.degenerate
        assert closed.reason == svd.reason == NEGATIVE_CORRELATION
        assert closed.gamma_hat == pytest.approx(svd.gamma_hat, rel=1e-9)
        assert closed.gamma_hat == pytest.approx(0.5, rel=0.05)

    def test_cost_vanishes_on_exact_line(self, make_samples):
        """Test J(γ) = 0 for a noise-free system."""
        samples = make_samples([-6.0, -9.0], [-2.0, -3.0])
        assert tls_cost(samples, 3.0) == pytest.approx(0.0)
        assert tls_cost(samples, 1.0) > 0


class TestTlsSvd:
    """Tests for the SVD TLS estimate."""

    def test_exact_system(self, make_samples):
        """Test ΔP = 3·L̂ gives γ̂ = 3."""
        l_hat = np.array([-1.0, -2.5, -4.0])
        report = tls_svd(make_samples(3.0 * l_hat, l_hat))
        assert report.gamma_hat == pytest.approx(3.0, rel=1e-10)
        assert report.eta is None
        assert report.method == EstimatorMethod.TLS_SVD

    def test_single_pair(self, make_samples):
        """Test one pair is fitted exactly."""
        assert tls_svd(make_samples([-10.0], [-2.0])).gamma_hat == pytest.approx(5.0)

    def test_orthogonal_is_degenerate(self, make_samples):
        """Test equal singular values are flagged as a tie."""
        report = tls_svd(make_samples([2.0, -1.0], [-1.0, -2.0]))
        assert report.degenerate
        assert "singular" in report.reason

    def test_rank_zero(self, make_samples):
        """Test an all-zero matrix is flagged."""
        report = tls_svd(make_samples([0.0, 0.0], [0.0, 0.0]))
        assert report.degenerate

    def test_agrees_with_closed_form(self, noisy_samples):
        """Test SVD and closed form solve the same problem."""
        svd = tls_svd(noisy_samples)
        closed = tls_closed_form(noisy_samples)
        assert svd.gamma_hat == pytest.approx(closed.gamma_hat, rel=1e-9)

    def test_oracle_corpus(self, make_rank_samples):
        """Test agreement on many random sample sets, including N = 1."""
        gen = np.random.default_rng(2024)
        compared = 0
        for _ in range(1000):
            n_hat = int(gen.integers(2, 33))
            samples = make_rank_samples(n_hat, gen.uniform(0.5, 6.0), gen.uniform(0.0, 12.0), gen)
            svd = tls_svd(samples)
            closed = tls_closed_form(samples)
            if svd.degenerate or closed.degenerate:
                continue
            assert svd.gamma_hat == pytest.approx(closed.gamma_hat, rel=1e-9)
            compared += 1
        assert compared > 900

    def test_positive_when_anticorrelated(self, make_samples):
        """Test the slope is sign-normalised to the positive root."""
        l_hat = np.array([-1.0, -2.0, -3.0])
        report = tls_svd(make_samples(-2.0 * l_hat, l_hat))
        assert report.gamma_hat == pytest.approx(0.5)
        assert report.gamma_hat == pytest.approx(tls_closed_form(make_samples(-2.0 * l_hat, l_hat)).gamma_hat)


class TestTlsEstimators:
    """Tests for the estimator classes."""

    def test_factory_estimators_match_functions(self, noisy_samples):
        """Test the classes delegate to the functions."""
        assert (
            EstimatorFactory.create("tls").estimate(noisy_samples).gamma_hat
            == tls_closed_form(noisy_samples).gamma_hat
        )
        assert (
            EstimatorFactory.create("tls_svd").estimate(noisy_samples).gamma_hat
            == tls_svd(noisy_samples).gamma_hat
        )

    def test_estimate_is_plausible(self, noisy_samples):
        """Test a realistic noisy set gives a positive finite estimate."""
        report = tls_closed_form(noisy_samples)
        assert report.gamma_hat > 0
        assert math.isfinite(report.gamma_hat)
