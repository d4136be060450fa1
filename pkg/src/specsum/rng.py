"""Counter-based random number streams.

Every stochastic component draws from a stream keyed by (seed, *indices)
so that results are reproducible regardless of evaluation order or
thread count.  Streams with distinct keys are statistically independent.
"""

import numpy as np

__all__ = ["stream"]


def stream(seed: int, *indices: int) -> np.random.Generator:
    """Return a Generator keyed by a seed plus an index tuple.

    Args:
        seed (int): Base seed for the experiment or estimator.
        *indices (int): Sub-stream indices (call index, repetition
            index, probe index, ...).

    Returns:
        np.random.Generator: Independent generator for this key.
    """
    key = [int(seed) & 0x7FFFFFFFFFFFFFFF, *(int(i) & 0x7FFFFFFFFFFFFFFF for i in indices)]
    return np.random.default_rng(np.random.SeedSequence(key))
