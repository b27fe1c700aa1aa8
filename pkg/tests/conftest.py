"""Shared brute-force oracles, independent of the library's algorithms."""

import numpy as np
import pytest

from lcsim import Sequence


def is_subsequence(sub, sup) -> bool:
    """Two-pointer containment check."""
    it = iter(sup)
    return all(any(s == t for t in it) for s in sub)


def brute_lcs(a, b) -> int:
    """LCS length by enumerating every subsequence of the shorter input."""
    a, b = (tuple(a), tuple(b)) if len(a) <= len(b) else (tuple(b), tuple(a))
    n = len(a)
    assert n <= 16, "oracle is exponential; keep inputs tiny"
    best = 0
    for mask in range(1 << n):
        size = mask.bit_count()
        if size <= best:
            continue
        cand = [a[i] for i in range(n) if mask >> i & 1]
        if is_subsequence(cand, b):
            best = size
    return best


def brute_lcs_multi(seqs) -> int:
    """Multi-sequence LCS by enumerating subsequences of the first input."""
    first = tuple(seqs[0])
    rest = [tuple(s) for s in seqs[1:]]
    n = len(first)
    assert n <= 16
    best = 0
    for mask in range(1 << n):
        size = mask.bit_count()
        if size <= best:
            continue
        cand = [first[i] for i in range(n) if mask >> i & 1]
        if all(is_subsequence(cand, other) for other in rest):
            best = size
    return best


def seq(symbols, k) -> Sequence:
    return Sequence(np.asarray(list(symbols), dtype=np.int64), k)


def seq_str(text, k=2) -> Sequence:
    return Sequence(np.array([int(ch) for ch in text], dtype=np.int64), k)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
