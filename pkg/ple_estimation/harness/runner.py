"""
Trial runners.

Every trial gets its own generator, seeded from
``SeedSequence([seed, *cell_key, trial_index])``. A trial's draws do not
depend on the other trials or on the thread count.
Results always come back ordered by trial index.
"""

from __future__ import annotations

import asyncio
import logging
from typing import Callable, List, Sequence, TypeVar

import numpy as np

from ..exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)

T = TypeVar("T")

TrialFn = Callable[[np.random.Generator, int], T]


def trial_generator(seed: int, cell_key: Sequence[int], trial_index: int) -> np.random.Generator:
    """Generator for one trial of one sweep cell."""
    entropy = [int(seed), *(int(k) for k in cell_key), int(trial_index)]
    if any(value < 0 for value in entropy):
        raise InvalidArgumentError(f"Seed material must be non-negative, got {entropy}")
    return np.random.default_rng(np.random.SeedSequence(entropy))


class TrialRunner:
    """
    Runs the trials of a sweep cell one after another.

    Usage:
        runner = TrialRunner(seed=7)
        results = runner.run(trial_fn, trials=500, cell_key=(0, 3))
    """

    def __init__(self, seed: int = 0) -> None:
        self.seed = seed

    def run(self, fn: TrialFn, trials: int, cell_key: Sequence[int] = ()) -> List[T]:
        """
        Run ``trials`` calls of ``fn(generator, trial_index)``.

        Returns:
            Results ordered by trial index
        """
        if trials < 1:
            raise InvalidArgumentError(f"trials must be at least 1, got {trials}")
        return [fn(trial_generator(self.seed, cell_key, i), i) for i in range(trials)]


class AsyncTrialRunner(TrialRunner):
    """
    Runs trials on worker threads, at most ``concurrency`` at a time.

    Usage:
        runner = AsyncTrialRunner(seed=7, concurrency=4)
        results = await runner.arun(trial_fn, trials=500)
    """

    def __init__(self, seed: int = 0, concurrency: int = 4) -> None:
        super().__init__(seed)
        if concurrency < 1:
            raise InvalidArgumentError(f"concurrency must be at least 1, got {concurrency}")
        self.concurrency = concurrency

    async def arun(self, fn: TrialFn, trials: int, cell_key: Sequence[int] = ()) -> List[T]:
        if trials < 1:
            raise InvalidArgumentError(f"trials must be at least 1, got {trials}")
        semaphore = asyncio.Semaphore(self.concurrency)

        async def one(index: int):
            async with semaphore:
                gen = trial_generator(self.seed, cell_key, index)
                return await asyncio.to_thread(fn, gen, index)

        return list(await asyncio.gather(*(one(i) for i in range(trials))))

    def run(self, fn: TrialFn, trials: int, cell_key: Sequence[int] = ()) -> List[T]:
        """
        Blocking wrapper around :meth:`arun` for synchronous callers.

        Raises:
            RuntimeError: when called from a running event loop; await ``arun`` there
        """
        try:
            asyncio.get_running_loop()
        except RuntimeError:
            return asyncio.run(self.arun(fn, trials, cell_key))
        raise RuntimeError(
            "AsyncTrialRunner.run cannot block inside a running event loop; await arun() instead"
        )


def make_runner(seed: int, concurrency: int = 1) -> TrialRunner:
    """Sequential runner for ``concurrency == 1``, threaded otherwise."""
    if concurrency > 1:
        return AsyncTrialRunner(seed=seed, concurrency=concurrency)
    return TrialRunner(seed=seed)
