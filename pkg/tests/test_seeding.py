import numpy as np

from tempomine.seeding import stream_rng, stream_seed_sequence


def test_same_key_reproduces():
    a = stream_rng(7, "masking", 3).random(8)
    b = stream_rng(7, "masking", 3).random(8)
    assert np.array_equal(a, b)


def test_streams_are_distinct():
    draws = {
        name: stream_rng(0, name, 0).random()
        for name in ("masking", "sampling", "init", "shuffle", "split")
    }
    assert len(set(draws.values())) == len(draws)


def test_ordinals_are_distinct():
    a = stream_rng(0, "masking", 0).random()
    b = stream_rng(0, "masking", 1).random()
    assert a != b


def test_seed_changes_stream():
    a = stream_rng(0, "init", 0).random()
    b = stream_rng(1, "init", 0).random()
    assert a != b


def test_omitted_ordinal_is_its_own_stream():
    # No ordinal means "the stream itself"; ordinal 0 is the first
    # member of the per-record family. They must not collide.
    assert stream_rng(5, "init").random() == stream_rng(5, "init").random()
    assert stream_rng(5, "init").random() != stream_rng(5, "init", 0).random()


def test_seed_sequence_spawnable():
    ss = stream_seed_sequence(3, "shuffle", 2)
    children = ss.spawn(2)
    assert len(children) == 2


def test_frozen_first_draw():
    # Pin the exact first draw so accidental reseeding schemes show up
    # as loud failures rather than silent dataset drift.
    got = stream_rng(0, "masking", 0).random()
    assert got == 0.024217875111165243
