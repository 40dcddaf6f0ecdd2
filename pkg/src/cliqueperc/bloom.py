"""Bloom filters over integer keys, double hashing on two 63-bit splitmix64 hashes."""
from __future__ import annotations

import math

import numpy as np

from .kernels import bloom_contains

_SEED_A = np.uint64(0x9E3779B97F4A7C15)
_SEED_B = np.uint64(0xD1B54A32D192ED03)


def _splitmix64(x: np.ndarray) -> np.ndarray:
    # uint64 array arithmetic wraps silently, which is what we want here
    z = x + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def hash_pair(keys) -> tuple[np.ndarray, np.ndarray]:
    """Two independent non-negative int64 hashes per key."""
    x = np.asarray(keys).astype(np.uint64).reshape(-1)
    a = _splitmix64(x ^ _SEED_A) >> np.uint64(1)
    b = _splitmix64(x ^ _SEED_B) >> np.uint64(1)
    return a.astype(np.int64), b.astype(np.int64)


def optimal_bits(n: int, fpr: float) -> int:
    return max(64, math.ceil(n * math.log(1.0 / fpr) / math.log(2) ** 2))


def optimal_hashes(m: int, n: int) -> int:
    return max(1, round(m / max(n, 1) * math.log(2)))


def bit_positions(h1: np.ndarray, h2: np.ndarray, m: int, h: int) -> np.ndarray:
    a = h1 % m
    b = 1 + h2 % (m - 1)
    return (a[:, None] + np.arange(h, dtype=np.int64)[None, :] * b[:, None]) % m


class BloomFilter:
    """Fixed-size filter sized for ``capacity`` keys at false-positive rate ``fpr``."""

    def __init__(self, capacity: int, fpr: float = 0.01):
        if not 0.0 < fpr < 1.0:
            raise ValueError("fpr must lie in (0, 1)")
        self.capacity = capacity
        self.fpr = fpr
        self.m = optimal_bits(capacity, fpr)
        self.hash_count = optimal_hashes(self.m, capacity)
        self.bits = np.zeros((self.m + 7) // 8, dtype=np.uint8)
        self.inserted = 0

    @classmethod
    def from_keys(cls, keys, fpr: float = 0.01) -> "BloomFilter":
        keys = np.asarray(keys).reshape(-1)
        bf = cls(len(keys), fpr)
        bf.add_many(keys)
        return bf

    def add_many(self, keys) -> None:
        h1, h2 = hash_pair(keys)
        pos = bit_positions(h1, h2, self.m, self.hash_count).reshape(-1)
        np.bitwise_or.at(self.bits, pos >> 3, (1 << (pos & 7)).astype(np.uint8))
        self.inserted += len(h1)

    def add(self, key: int) -> None:
        self.add_many([key])

    def contains_many(self, keys) -> np.ndarray:
        h1, h2 = hash_pair(keys)
        pos = bit_positions(h1, h2, self.m, self.hash_count)
        return (((self.bits[pos >> 3] >> (pos & 7)) & 1) == 1).all(axis=1)

    def __contains__(self, key: int) -> bool:
        h1, h2 = hash_pair([key])
        return bool(bloom_contains(self.bits, 0, self.m, self.hash_count, h1[0], h2[0]))

    @property
    def expected_fpr(self) -> float:
        n = max(self.inserted, 1)
        return (1.0 - math.exp(-self.hash_count * n / self.m)) ** self.hash_count
