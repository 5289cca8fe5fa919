from __future__ import annotations

import numpy as np
import pytest

from hiddenclique import SplitMix64, derive_seed, mix64

from oracles import splitmix_reference

# published reference outputs of SplitMix64 for seed 0
SEED0_REFERENCE = (0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F)


def test_seed_zero_reference_sequence():
    rng = SplitMix64(0)
    assert tuple(rng.next_u64() for _ in range(3)) == SEED0_REFERENCE


def test_matches_definition_for_other_seeds():
    for seed in (1, 42, 2**63, (1 << 64) - 1):
        rng = SplitMix64(seed)
        assert [rng.next_u64() for _ in range(10)] == splitmix_reference(seed, 10)


def test_vectorized_floats_equal_scalar_stream():
    a, b = SplitMix64(987), SplitMix64(987)
    scalar = [a.next_float() for _ in range(100)]
    vector = b.floats(100)
    assert np.array_equal(np.array(scalar), vector)
    assert a.position == b.position == 100


def test_floats_resume_mid_stream():
    full = SplitMix64(5).floats(7)
    rng = SplitMix64(5)
    first = rng.floats(3)
    rest = rng.floats(4)
    assert np.array_equal(first, full[:3])
    assert np.array_equal(rest, full[3:])


def test_floats_in_unit_interval():
    us = SplitMix64(0).floats(10_000)
    assert us.min() >= 0.0 and us.max() < 1.0


def test_next_below_range_and_determinism():
    rng = SplitMix64(3)
    draws = [rng.next_below(7) for _ in range(200)]
    assert all(0 <= d < 7 for d in draws)
    replay = SplitMix64(3)
    assert draws == [replay.next_below(7) for _ in range(200)]


def test_mix64_matches_finalizer_definition():
    # mix64(seed + GOLDEN) is by construction output 0 of the stream
    for seed in (0, 17, 2**40):
        assert mix64((seed + 0x9E3779B97F4A7C15) % 2**64) == splitmix_reference(seed, 1)[0]


def test_derive_seed_is_pure_and_spread():
    assert derive_seed(0, 0, 0) == derive_seed(0, 0, 0)
    seen = {derive_seed(0, cell, trial) for cell in range(8) for trial in range(8)}
    assert len(seen) == 64  # no collisions across a small grid


def test_derive_seed_reference_chain():
    # independent scalar re-derivation of the documented chain
    def ref(master, *ixs):
        s = master
        for ix in ixs:
            s = (s + (ix + 1) * 0x9E3779B97F4A7C15) % 2**64
            z = s
            z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) % 2**64
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) % 2**64
            s = (z ^ (z >> 31)) % 2**64
        return s

    assert derive_seed(123, 4, 5) == ref(123, 4, 5)
    assert derive_seed(0, 0) == ref(0, 0)


def test_negative_count_rejected():
    with pytest.raises(ValueError):
        SplitMix64(0).floats(-1)
    with pytest.raises(ValueError):
        SplitMix64(0).next_below(0)
