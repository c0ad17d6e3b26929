"""
Seeded random streams. Every stochastic routine takes its own generator so
runs never share mutable random state.
"""
import numpy as np

RNG_ALGORITHM = "numpy.PCG64"

MAX_SEED = 2**64 - 1


def make_rng(seed: int) -> np.random.Generator:
    """Return an isolated PCG64 generator for an unsigned 64-bit seed."""
    if not 0 <= int(seed) <= MAX_SEED:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(int(seed)))
