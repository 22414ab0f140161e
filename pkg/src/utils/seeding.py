"""
Seed derivation for reproducible random streams.

Every stream is a Philox generator keyed by the master seed plus a tuple of
integer coordinates (stream tag, chunk or batch index, ...), so results do
not depend on the order or the process in which streams are consumed.
"""
import hashlib
from typing import Union

import numpy as np

Key = Union[int, str]


def stable_int(value: Key, bits: int = 32) -> int:
    """Map a tag to a fixed non-negative integer."""
    if isinstance(value, (int, np.integer)):
        return int(value)
    digest = hashlib.sha256(str(value).encode("utf-8")).hexdigest()
    return int(digest, 16) % (1 << bits)


def seed_sequence(master_seed: int, *key: Key) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(master_seed), spawn_key=tuple(stable_int(k) for k in key))


def rng_for(master_seed: int, *key: Key) -> np.random.Generator:
    """Counter-based generator for one (master_seed, key...) coordinate."""
    return np.random.Generator(np.random.Philox(seed_sequence(master_seed, *key)))
