import numpy as np
import pytest

from auvplan import rng


def test_same_key_same_stream():
    a = rng.substream(42, rng.DOMAIN_MUTATION, 3, 7).random(16)
    b = rng.substream(42, rng.DOMAIN_MUTATION, 3, 7).random(16)
    assert np.array_equal(a, b)


def test_streams_differ_across_path_and_domain():
    base = rng.substream(42, rng.DOMAIN_MUTATION, 3, 7).random(16)
    for other in (
        rng.substream(42, rng.DOMAIN_MUTATION, 3, 8),
        rng.substream(42, rng.DOMAIN_MUTATION, 4, 7),
        rng.substream(42, rng.DOMAIN_OBSTACLE, 3, 7),
        rng.substream(43, rng.DOMAIN_MUTATION, 3, 7),
    ):
        assert not np.array_equal(base, other.random(16))


def test_adjacent_counters_do_not_overlap():
    # streams must be independent, not shifted copies of one another
    a = rng.substream(5, rng.DOMAIN_OBSTACLE, 0, 0).random(64)
    b = rng.substream(5, rng.DOMAIN_OBSTACLE, 0, 1).random(64)
    assert not np.isin(np.round(a, 12), np.round(b, 12)).any()


def test_gaussian_draws_deterministic():
    a = rng.substream(9, rng.DOMAIN_OBSTACLE, 1, 2).normal(0, 20, size=8)
    b = rng.substream(9, rng.DOMAIN_OBSTACLE, 1, 2).normal(0, 20, size=8)
    assert np.array_equal(a, b)


def test_path_depth_limited():
    with pytest.raises(ValueError):
        rng.substream(1, rng.DOMAIN_INIT, 1, 2, 3, 4)
