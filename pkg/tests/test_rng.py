import numpy as np
import pytest

from ordinalbf import RngStream


def test_substream_identity():
    a = RngStream(42).substream(1, 3).generator.random(5)
    b = RngStream(42, (1, 3)).generator.random(5)
    assert np.array_equal(a, b)


def test_substreams_differ():
    root = RngStream(42)
    draws = [root.substream(i).generator.random(4) for i in range(3)]
    assert not np.array_equal(draws[0], draws[1])
    assert not np.array_equal(RngStream(42).generator.random(4), draws[0])


def test_creation_order_irrelevant():
    root = RngStream(7)
    late = root.substream(5).generator.random(3)
    root.substream(0).generator.random(1000)
    assert np.array_equal(late, RngStream(7).substream(5).generator.random(3))


@pytest.mark.parametrize("seed", [-1, 2**64])
def test_seed_range(seed):
    with pytest.raises(ValueError):
        RngStream(seed)


def test_full_u64_seed():
    RngStream(2**64 - 1).generator.random()
