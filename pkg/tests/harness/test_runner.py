import numpy as np
import pytest

from ple_estimation.exceptions import InvalidArgumentError
from ple_estimation.harness import AsyncTrialRunner, TrialRunner, make_runner, trial_generator


def draw(gen, index):
    return index, float(gen.standard_normal())


class TestTrialGenerator:
    """Tests for per-trial seeding."""

    def test_reproducible(self):
        """Test the same key gives the same stream."""
        a = trial_generator(7, (1, 2), 3).random(4)
        b = trial_generator(7, (1, 2), 3).random(4)
        np.testing.assert_array_equal(a, b)

    def test_distinct_keys(self):
        """Test seed, cell and trial index all change the stream."""
        base = trial_generator(7, (1, 2), 3).random()
        assert trial_generator(8, (1, 2), 3).random() != base
        assert trial_generator(7, (2, 1), 3).random() != base
        assert trial_generator(7, (1, 2), 4).random() != base

    def test_negative_seed(self):
        """Test negative seed material is rejected."""
        with pytest.raises(InvalidArgumentError):
            trial_generator(-1, (), 0)


class TestTrialRunner:
    """Tests for the sequential runner."""

    def test_ordered_results(self):
        """Test results come back in trial order."""
        results = TrialRunner(seed=1).run(draw, 5, (0,))
        assert [index for index, _ in results] == [0, 1, 2, 3, 4]

    def test_trial_independent_of_count(self):
        """Test a trial's draws do not depend on how many trials ran."""
        short = TrialRunner(seed=1).run(draw, 3)
        long = TrialRunner(seed=1).run(draw, 10)
        assert long[:3] == short

    def test_invalid_trials(self):
        """Test zero trials are rejected."""
        with pytest.raises(InvalidArgumentError):
            TrialRunner().run(draw, 0)


class TestAsyncTrialRunner:
    """Tests for the threaded runner."""

    async def test_arun_matches_sequential(self):
        """Test threaded results equal sequential results."""
        threaded = await AsyncTrialRunner(seed=9, concurrency=4).arun(draw, 20, (2, 1))
        assert threaded == TrialRunner(seed=9).run(draw, 20, (2, 1))

    def test_run_wrapper(self):
        """Test the blocking wrapper returns ordered results."""
        results = AsyncTrialRunner(seed=9, concurrency=3).run(draw, 8)
        assert results == TrialRunner(seed=9).run(draw, 8)

    async def test_run_inside_event_loop_raises(self):
        """Test the blocking wrapper refuses to run inside a running loop and points at arun."""
        runner = AsyncTrialRunner(seed=9, concurrency=2)
        with pytest.raises(RuntimeError, match="arun"):
            runner.run(draw, 4)
        assert await runner.arun(draw, 4) == TrialRunner(seed=9).run(draw, 4)

    def test_invalid_concurrency(self):
        """Test concurrency below one is rejected."""
        with pytest.raises(InvalidArgumentError):
            AsyncTrialRunner(concurrency=0)

    async def test_invalid_trials(self):
        """Test zero trials are rejected."""
        with pytest.raises(InvalidArgumentError):
            await AsyncTrialRunner().arun(draw, 0)

    def test_make_runner(self):
        """Test the runner type follows the concurrency."""
        assert type(make_runner(0, 1)) is TrialRunner
        runner = make_runner(5, 3)
        assert isinstance(runner, AsyncTrialRunner)
        assert runner.concurrency == 3
        assert runner.seed == 5
