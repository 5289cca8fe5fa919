"""Concentration bands at n=40000, 100 seeds each (shared session fixtures)."""

from __future__ import annotations

import math

import pytest

from hiddenclique import rates_basic, rates_variant

from conftest import LARGE_N, LARGE_TRIALS


@pytest.mark.slow
def test_iterate_survivor_count_band(background_40k_stats):
    # survivors of one iteration at (alpha=0.3728, beta=0.72) concentrate
    # around tau*n; the stated six-sigma-scale band must hold 98 of 100 seeds
    tau = rates_basic(0.3728, 0.72, 1.65).tau
    center = tau * LARGE_N
    band = 6.0 * math.sqrt(LARGE_N)
    inside = sum(
        abs(row["survivors"] - center) <= band for row in background_40k_stats
    )
    print(f"survivor band: {inside}/{LARGE_TRIALS} inside {center:.0f}±{band:.0f}")
    assert inside >= 98


@pytest.mark.slow
def test_variant_refined_sample_band(variant_40k_stats):
    # |S~| concentrates around gamma*n; the allowed deviation is
    # 6*|S|^(3/4) per the martingale-rate bound
    gamma = rates_variant(0.8, 2.3, 1.2, 1.4).gamma
    center = gamma * LARGE_N
    inside = 0
    for row in variant_40k_stats:
        band = 6.0 * row["sample_size"] ** 0.75
        inside += abs(row["refined_size"] - center) <= band
    print(f"refined-sample band: {inside}/{LARGE_TRIALS} inside {center:.0f}")
    assert inside >= 95


@pytest.mark.slow
def test_sample_size_concentrates(background_40k_stats):
    # |S| itself is Binomial(n, alpha); five sigmas cover 100 seeds
    alpha = 0.3728
    center = alpha * LARGE_N
    band = 5.0 * math.sqrt(LARGE_N * alpha * (1 - alpha))
    inside = sum(
        abs(row["sample_size"] - center) <= band for row in background_40k_stats
    )
    assert inside >= 98
