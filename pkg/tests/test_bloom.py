import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliqueperc.bloom import BloomFilter, bit_positions, hash_pair, optimal_bits, optimal_hashes


def test_sizing():
    assert optimal_bits(1, 0.01) == 64
    n = 1000
    m = optimal_bits(n, 0.01)
    assert m == math.ceil(n * math.log(100) / math.log(2) ** 2)
    assert optimal_hashes(m, n) == 7


def test_hashes_are_deterministic_and_nonnegative():
    a1, b1 = hash_pair(np.arange(1000))
    a2, b2 = hash_pair(np.arange(1000))
    assert np.array_equal(a1, a2) and np.array_equal(b1, b2)
    assert (a1 >= 0).all() and (b1 >= 0).all()
    assert len(np.unique(a1)) == 1000


def test_probe_stride_never_zero():
    h1, h2 = hash_pair(np.arange(5000))
    pos = bit_positions(h1, h2, 97, 5)
    assert (pos >= 0).all() and (pos < 97).all()
    assert (np.diff(pos, axis=1) != 0).all()


def test_bad_fpr():
    for f in (0.0, 1.0, -0.1):
        with pytest.raises(ValueError):
            BloomFilter(10, f)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 2**40), min_size=1, max_size=300), st.sampled_from([0.001, 0.01, 0.1, 0.5]))
def test_no_false_negatives(keys, fpr):
    bf = BloomFilter.from_keys(keys, fpr)
    assert bf.contains_many(keys).all()
    assert all(k in bf for k in keys[:20])


def test_scalar_and_vector_queries_agree():
    bf = BloomFilter.from_keys(np.arange(0, 500, 3), 0.05)
    q = np.arange(2000)
    vec = bf.contains_many(q)
    assert [int(x) in bf for x in q[:300]] == vec[:300].tolist()


def test_measured_fpr_near_target():
    bf = BloomFilter.from_keys(np.arange(5000), 0.01)
    probes = np.arange(10**6, 10**6 + 200_000)
    rate = bf.contains_many(probes).mean()
    assert rate <= 0.02
    assert bf.expected_fpr <= 0.011
