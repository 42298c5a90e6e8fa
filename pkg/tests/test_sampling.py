from __future__ import annotations

from collections import Counter

import numpy as np
import pytest

from engine.errors import MTooLargeError, NonPositiveError
from engine.flsim.sampling import sample_participants, stream, stream_seed


def test_full_participation_selects_everyone():
    assert sample_participants(5, 5, stream(0, "sampling", 1)) == (0, 1, 2, 3, 4)


def test_selection_is_sorted_and_unique():
    chosen = sample_participants(100, 20, stream(3, "sampling", 7))
    assert len(chosen) == 20
    assert list(chosen) == sorted(set(chosen))
    assert all(0 <= c < 100 for c in chosen)


def test_same_stream_same_selection():
    a = sample_participants(50, 10, stream(42, "sampling", 3))
    b = sample_participants(50, 10, stream(42, "sampling", 3))
    assert a == b


def test_uniform_inclusion_frequency():
    rng = stream(0, "sampling", 0)
    counts: Counter = Counter()
    draws = 10_000
    for _ in range(draws):
        counts.update(sample_participants(10, 2, rng))
    for client in range(10):
        assert counts[client] / draws == pytest.approx(0.2, abs=0.02)


def test_too_many_participants():
    with pytest.raises(MTooLargeError):
        sample_participants(3, 4, stream(0, "sampling", 1))


def test_zero_participants():
    with pytest.raises(NonPositiveError):
        sample_participants(3, 0, stream(0, "sampling", 1))


def test_named_streams_are_independent_and_stable():
    assert stream_seed(0, "shuffle", 1, 2) == stream_seed(0, "shuffle", 1, 2)
    assert stream_seed(0, "shuffle", 1, 2) != stream_seed(0, "shuffle", 1, 3)
    assert stream_seed(0, "shuffle", 1) != stream_seed(0, "sampling", 1)
    assert stream_seed(0, "init") != stream_seed(1, "init")
    a = stream(5, "sampling", 1).random(4)
    b = stream(5, "sampling", 2).random(4)
    assert not np.array_equal(a, b)
