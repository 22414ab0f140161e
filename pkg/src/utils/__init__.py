"""Utilities package."""
from .logger import setup_logging
from .seeding import rng_for, seed_sequence, stable_int

__all__ = ["setup_logging", "rng_for", "seed_sequence", "stable_int"]
