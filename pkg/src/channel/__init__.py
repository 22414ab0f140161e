"""Channel simulation and exact observation laws."""
from .bsc import bsc_transmit, bsc_weights
from .laws import (
    WeightLaw,
    MicroDistribution,
    bin_conv,
    binom_logpmf,
    weight_logpmf,
    weight_window,
    tv_product_bernoulli,
    ensemble_avg_p1,
    exact_p1_micro,
    p0_micro,
    ensemble_p1_micro,
    tv_micro,
    popcount_table,
    words_to_indices,
)

__all__ = [
    "bsc_transmit",
    "bsc_weights",
    "WeightLaw",
    "MicroDistribution",
    "bin_conv",
    "binom_logpmf",
    "weight_logpmf",
    "weight_window",
    "tv_product_bernoulli",
    "ensemble_avg_p1",
    "exact_p1_micro",
    "p0_micro",
    "ensemble_p1_micro",
    "tv_micro",
    "popcount_table",
    "words_to_indices",
]
