import math

import numpy as np
import pytest

from ple_estimation import ChannelParams, DeploymentField, RssObservation, SpaceConfig
from ple_estimation.channel import calibrate_sensitivity, observe_neighborhood
from ple_estimation.estimators import tls_closed_form
from ple_estimation.exceptions import (
    InsufficientSamplesError,
    InvalidArgumentError,
    UnsupportedDimensionError,
)
from ple_estimation.geometry import deploy_uniform
from ple_estimation.regress import (
    build_samples,
    filter_angular,
    l_hat,
    pair_delta_p,
    pair_indices,
    rank_rss,
)


def observations(values):
    return [
        RssObservation(node_index=i, rss_db=v, true_distance=float(i + 1))
        for i, v in enumerate(values)
    ]


class TestRankRss:
    """Tests for RSS ranking."""

    def test_strongest_first(self):
        """Test ranks follow descending power."""
        ranked = rank_rss(observations([-70.0, -50.0, -60.0]))
        np.testing.assert_array_equal(ranked.rss_db, [-50.0, -60.0, -70.0])
        np.testing.assert_array_equal(ranked.ranks, [1, 2, 3])
        np.testing.assert_array_equal(ranked.source_indices, [1, 2, 0])
        assert ranked.n_hat == 3

    def test_ties_keep_input_order(self):
        """Test equal powers are ranked in input order."""
        ranked = rank_rss(observations([-60.0, -50.0, -60.0, -60.0]))
        np.testing.assert_array_equal(ranked.source_indices, [1, 0, 2, 3])

    def test_too_few_observations(self):
        """Test a single observation cannot be ranked."""
        with pytest.raises(InsufficientSamplesError) as exc_info:
            rank_rss(observations([-60.0]))
        assert exc_info.value.required == 2
        assert exc_info.value.actual == 1


class TestPairQuantities:
    """Tests for ΔP and L̂."""

    def test_l_hat_values(self):
        """Test L̂ = (10/d)·log10(i/j)."""
        assert l_hat(1, 2, 2) == pytest.approx(5.0 * math.log10(0.5))
        assert l_hat(1, 10, 1) == pytest.approx(-10.0)
        assert l_hat(1, 1000, 3) == pytest.approx(-10.0)

    def test_l_hat_vectorised(self):
        """Test array ranks give an array."""
        values = l_hat(np.array([1, 2]), np.array([4, 4]), 2)
        np.testing.assert_allclose(values, [5.0 * math.log10(0.25), 5.0 * math.log10(0.5)])

    def test_l_hat_additive(self):
        """Test L̂(i, j) + L̂(j, k) = L̂(i, k) for chained ranks."""
        for d in (1, 2, 3):
            for i, j, k in [(1, 2, 3), (3, 6, 12), (2, 9, 40), (5, 7, 100)]:
                assert l_hat(i, j, d) + l_hat(j, k, d) == pytest.approx(l_hat(i, k, d), abs=1e-12)

    def test_l_hat_invalid(self):
        """Test ranks below one and unsupported dimensions are rejected."""
        with pytest.raises(InvalidArgumentError):
            l_hat(0, 2, 2)
        with pytest.raises(UnsupportedDimensionError):
            l_hat(1, 2, 4)

    def test_pair_delta_p(self):
        """Test ΔP is the weaker power minus the stronger."""
        ranked = rank_rss(observations([-50.0, -62.5, -55.0]))
        assert pair_delta_p(ranked, 1, 3) == pytest.approx(-12.5)
        with pytest.raises(InvalidArgumentError):
            pair_delta_p(ranked, 2, 2)
        with pytest.raises(InvalidArgumentError):
            pair_delta_p(ranked, 1, 4)


class TestBuildSamples:
    """Tests for pair sample construction."""

    def test_all_pairs_lexicographic(self):
        """Test every pair i < j appears once, in lexicographic order."""
        ranked = rank_rss(observations([-40.0, -45.0, -52.0, -61.0, -70.0]))
        samples = build_samples(ranked, d=2)
        assert samples.sample_count == math.comb(5, 2)
        assert samples.rank_pairs[:4].tolist() == [[1, 2], [1, 3], [1, 4], [1, 5]]
        assert samples.rank_pairs[-1].tolist() == [4, 5]
        for (i, j), dp, lh in zip(samples.rank_pairs, samples.delta_p, samples.l_hat):
            assert dp == pytest.approx(pair_delta_p(ranked, int(i), int(j)))
            assert lh == pytest.approx(l_hat(int(i), int(j), 2))

    def test_signs(self):
        """Test ΔP and L̂ are both non-positive for ranked powers."""
        ranked = rank_rss(observations(list(np.linspace(-40.0, -90.0, 12))))
        samples = build_samples(ranked, d=2)
        assert np.all(samples.delta_p <= 0)
        assert np.all(samples.l_hat < 0)

    def test_two_nodes(self):
        """Test the smallest valid neighbourhood gives one pair."""
        samples = build_samples(rank_rss(observations([-50.0, -60.0])), d=2)
        assert samples.sample_count == 1
        assert samples.delta_p[0] == pytest.approx(-10.0)

    def test_max_pairs(self):
        """Test subsampling keeps the requested number of pairs in order."""
        ranked = rank_rss(observations(list(np.linspace(-40.0, -90.0, 30))))
        a = build_samples(ranked, d=2, max_pairs=50, rng=1)
        b = build_samples(ranked, d=2, max_pairs=50, rng=1)
        assert a.sample_count == 50
        np.testing.assert_array_equal(a.rank_pairs, b.rank_pairs)
        keys = a.rank_pairs[:, 0] * 100 + a.rank_pairs[:, 1]
        assert np.all(np.diff(keys) > 0)

    def test_pair_indices_match_lexicographic_order(self):
        """Test flat indices map onto the same pairs np.triu_indices lists."""
        for n in (2, 3, 7, 40):
            i_idx, j_idx = np.triu_indices(n, k=1)
            i, j = pair_indices(np.arange(i_idx.size), n)
            np.testing.assert_array_equal(i, i_idx)
            np.testing.assert_array_equal(j, j_idx)

    def test_pair_indices_large_neighbourhood(self):
        """Test the last pairs of a 50 000 node neighbourhood are mapped exactly."""
        n = 50_000
        total = n * (n - 1) // 2
        i, j = pair_indices([0, n - 2, n - 1, total - 2, total - 1], n)
        assert i.tolist() == [0, 0, 1, n - 3, n - 2]
        assert j.tolist() == [1, n - 1, 2, n - 1, n - 1]

    def test_pair_indices_out_of_range(self):
        """Test indices past C(n, 2) are rejected."""
        with pytest.raises(InvalidArgumentError):
            pair_indices([3], 3)

    def test_samples_are_read_only(self):
        """Test pair samples cannot be modified."""
        samples = build_samples(rank_rss(observations([-50.0, -60.0, -65.0])), d=2)
        with pytest.raises(ValueError):
            samples.delta_p[0] = 0.0


class TestFilterAngular:
    """Tests for angular windows."""

    def _field(self, d, positions):
        space = SpaceConfig(dimension=d, field_radius=10.0, density=0.1)
        return DeploymentField(origin=np.zeros(d), positions=positions, space=space)

    def test_sector_2d(self):
        """Test a quarter-turn sector keeps nodes within ±45 degrees, boundary included."""
        field = self._field(2, [[1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [-1.0, 0.0], [1.0, -0.5]])
        obs = observations([-50.0, -51.0, -52.0, -53.0, -54.0])
        kept = filter_angular(obs, field, math.pi / 2, bearing=[1.0, 0.0])
        assert sorted(kept.node_index.tolist()) == [0, 1, 4]

    def test_cone_3d(self):
        """Test a 3-D window keeps nodes within the cone half-angle."""
        field = self._field(3, [[0.0, 0.0, 1.0], [1.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 0.0, -1.0]])
        obs = observations([-50.0, -51.0, -52.0, -53.0])
        kept = filter_angular(obs, field, math.pi / 4, bearing=[0.0, 0.0, 1.0])
        assert sorted(kept.node_index.tolist()) == [0, 1]

    def test_full_angle_keeps_everything(self):
        """Test the full window is the identity."""
        field = self._field(2, [[1.0, 0.0], [-1.0, 0.0]])
        kept = filter_angular(observations([-50.0, -55.0]), field, 2 * math.pi, bearing=[0.0, 1.0])
        assert len(kept) == 2

    def test_half_plane(self):
        """Test φ = π about +x keeps exactly the nodes with positive x."""
        space = SpaceConfig(dimension=2, field_radius=50.0, density=0.05)
        field = deploy_uniform(space, seed=8)
        obs = observations(list(np.linspace(-40.0, -90.0, field.n_nodes)))
        kept = filter_angular(obs, field, math.pi, bearing=[1.0, 0.0])
        expected = np.flatnonzero(field.positions[:, 0] > 0)
        assert sorted(kept.node_index.tolist()) == expected.tolist()

    def test_estimate_on_window_is_consistent(self):
        """Test a noise-free quarter sector still yields γ̂ close to γ."""
        params = ChannelParams(ple=3.0, shadow_sigma=0.0)
        params = params.model_copy(
            update={"rx_sensitivity_dbm": calibrate_sensitivity(params, 200.0)}
        )
        field = deploy_uniform(SpaceConfig(dimension=2, field_radius=250.0, density=0.02), seed=3)
        heard = observe_neighborhood(field, params, gen=4)
        window = filter_angular(heard, field, math.pi / 2, bearing=[0.0, 1.0])
        assert len(window) == pytest.approx(len(heard) / 4, rel=0.2)
        full = tls_closed_form(build_samples(rank_rss(heard), d=2))
        sector = tls_closed_form(build_samples(rank_rss(window), d=2))
        assert full.gamma_hat == pytest.approx(3.0, rel=0.2)
        assert sector.gamma_hat == pytest.approx(3.0, rel=0.2)

    def test_one_dimension_unsupported(self):
        """Test angular windows are undefined on a line."""
        field = self._field(1, [[1.0], [-1.0]])
        with pytest.raises(UnsupportedDimensionError):
            filter_angular(observations([-50.0, -55.0]), field, math.pi, bearing=[1.0])


class TestWorkedExample:
    """Tests on a twelve-neighbour worked example."""

    def test_rank_ratio(self):
        """Test L̂ for ranks 3 and 6 in two dimensions."""
        assert l_hat(3, 6, 2) == pytest.approx(-1.505, abs=5e-4)

    def test_twelve_neighbours_give_66_pairs(self):
        """Test n̂ = 12 gives C(12, 2) pair samples."""
        ranked = rank_rss(observations(list(np.linspace(-45.0, -95.0, 12))))
        assert build_samples(ranked, d=2).sample_count == 66
