"""
Binary symmetric channel simulation.

Bit vectors are numpy uint8 arrays; every call draws from a caller-owned
numpy Generator so simulations replay exactly from their seeds.
"""
import numpy as np

from src.exceptions import ContractError


def bsc_transmit(x: np.ndarray, crossover: float, rng: np.random.Generator) -> np.ndarray:
    """
    Flip each bit of x independently with probability crossover.

    Args:
        x: Bit array (any shape)
        crossover: Flip probability, 0 <= crossover <= 1/2
        rng: Random stream

    Returns:
        New uint8 array of the same shape
    """
    if not 0.0 <= crossover <= 0.5:
        raise ContractError(f"BSC crossover must lie in [0, 1/2], got {crossover}")
    x = np.asarray(x, dtype=np.uint8)
    if crossover == 0.0:
        return x.copy()
    flips = rng.random(x.shape) < crossover
    return x ^ flips.astype(np.uint8)


def bsc_weights(weights: np.ndarray, length: int, crossover: float, rng: np.random.Generator) -> np.ndarray:
    """
    Output weights for inputs of the given weights, without materializing bits.

    A weight-w input of length `length` leaves BSC(crossover) with weight
    Bin(w, 1-crossover) + Bin(length-w, crossover).
    """
    weights = np.asarray(weights, dtype=np.int64)
    if np.any(weights < 0) or np.any(weights > length):
        raise ContractError("Input weights must lie in [0, length]")
    kept = rng.binomial(weights, 1.0 - crossover)
    added = rng.binomial(length - weights, crossover)
    return kept + added
