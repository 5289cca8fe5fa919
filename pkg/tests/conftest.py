from __future__ import annotations

import math

import numpy as np
import pytest

from hiddenclique import (
    SplitMix64,
    derive_seed,
    generate_planted,
    iterate_once,
    iterate_once_variant,
)
from hiddenclique.graph import _pack_bool

#: seeds for every Monte Carlo family, derived from one master so a single
#: number replays the whole suite
MASTER_SEED = 0

LARGE_N = 40_000
LARGE_TRIALS = 100


def mc_seed(family: int, index: int) -> int:
    return derive_seed(MASTER_SEED, family, index)


@pytest.fixture(scope="session")
def background_40k_stats():
    """Per-seed statistics over 100 instances of the n=40000 background model.

    For each seed this computes (a) the count of first-half vertices whose
    degree into the second half clears a one-sigma-in-units threshold, for
    the concentration band test, and (b) the sample and survivor sizes of
    one thresholding iteration at the published knobs (alpha=0.3728,
    beta=0.72). Instances are generated once and reduced immediately.
    """
    n = LARGE_N
    half = n // 2
    a = 1.0
    threshold = half / 2.0 + a * math.sqrt(half) / 2.0
    first_half = np.arange(half, dtype=np.int64)
    rows = []
    mask = np.zeros(n, dtype=bool)
    mask[half:] = True
    second_words = _pack_bool(mask, n)
    for i in range(LARGE_TRIALS):
        inst = generate_planted(n, 0, 0.5, 1.0, mc_seed(8, i))
        degs = inst.graph._degrees_into(first_half, second_words)
        band_count = int((degs >= threshold).sum())

        outcome = iterate_once(inst.graph, 0.3728, 0.72, SplitMix64(mc_seed(9, i)))
        rows.append(
            {
                "band_count": band_count,
                "sample_size": len(outcome.sample),
                "survivors": outcome.n_next,
            }
        )
        del inst, outcome
    return rows


@pytest.fixture(scope="session")
def variant_40k_stats():
    """Refined-sample sizes over 100 planted n=40000 instances (c=1.4).

    Each row records |S| and |S~| for one variant iteration at the
    published knobs (alpha=0.8, beta=2.3, eta=1.2); S~ is recomputed from
    the returned sample by its defining threshold.
    """
    n = LARGE_N
    k = round(1.4 * math.sqrt(n))
    alpha, beta, eta = 0.8, 2.3, 1.2
    rows = []
    for i in range(LARGE_TRIALS):
        inst = generate_planted(n, k, 0.5, 1.0, mc_seed(10, i))
        outcome = iterate_once_variant(
            inst.graph, alpha, beta, eta, SplitMix64(mc_seed(11, i))
        )
        sample_ids = outcome.sample.indices()
        s = sample_ids.size
        d_in_sample = inst.graph._degrees_into(sample_ids, outcome.sample.words)
        refined = int((d_in_sample >= s / 2.0 + eta * math.sqrt(s) / 2.0).sum())
        rows.append({"sample_size": s, "refined_size": refined})
        del inst, outcome
    return rows
