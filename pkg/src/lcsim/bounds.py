"""Exact counting bounds on the limiting LCS rate of m random words.

The chain: the number F(n, l, k) of length-n words over a k-letter
alphabet containing a fixed length-l word as a subsequence depends only
on l,

    F(n, l, k) = sum_{j=l..n} C(n, j) (k - 1)^(n - j),

an extension of the counting argument of Chvatal & Sankoff ("An
upper-bound technique for lengths of common subsequences", 1983 ed.
volume on time warps).  Summing F^m over all k^l candidate words bounds
the number g of m-tuples whose common subsequence reaches length l, and
Stirling asymptotics of that bound collapse to the rate function

    H_k(t) = k^(t/m - 1) (k - 1)^(1 - t) / (t^t (1 - t)^(1 - t)).

H_k crosses 1 exactly once on [1/k, 1); the root V_k is an upper bound on
the limiting ratio E[LC_n]/n for m independent uniform words.  All counts
use exact big integers; H_k is evaluated in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .core import Sequence, lcs_multi
from .errors import LcsimError, ResourceLimitError, ValidationError

__all__ = [
    "BoundResult",
    "count_containing",
    "count_upper",
    "g_upper_G",
    "brute_g",
    "h_k_theta",
    "solve_vk",
    "bounds_table",
    "KNOWN_LOWER_BOUNDS_K2",
    "BRUTE_TUPLE_BUDGET",
]

BRUTE_TUPLE_BUDGET = 10_000_000

# Published lower bounds on the limiting rate for uniform binary words,
# m = 2..10 sequences; from Kiwi & Soto, "On a speculated relation between
# Chvatal-Sankoff constants of several sequences" (Combin. Probab. Comput.
# 18, 2009).  Reference data, not computed here.
KNOWN_LOWER_BOUNDS_K2 = {
    2: 0.781281,
    3: 0.704473,
    4: 0.661274,
    5: 0.636022,
    6: 0.617761,
    7: 0.602493,
    8: 0.594016,
    9: 0.587900,
    10: 0.570155,
}


@dataclass(frozen=True)
class BoundResult:
    """Root of H_k = 1 with solver diagnostics."""

    k: int
    m: int
    v_k: float
    iterations: int
    residual: float


def _check_nlk(n: int, ell: int, k: int) -> None:
    if k < 2:
        raise ValidationError(f"alphabet size must be >= 2, got {k}")
    if n < 0:
        raise ValidationError(f"n must be nonnegative, got {n}")
    if not 0 <= ell <= n:
        raise ValidationError(f"need 0 <= ell <= n, got ell={ell}, n={n}")


def count_containing(n: int, ell: int, k: int) -> int:
    """Exact number of length-n words over k letters containing a fixed
    length-ell word as a subsequence (independent of which word)."""
    _check_nlk(n, ell, k)
    return sum(math.comb(n, j) * (k - 1) ** (n - j) for j in range(ell, n + 1))


def count_upper(n: int, ell: int, k: int) -> int:
    """The closed-form majorant ``n * C(n, ell) * (k-1)**(n-ell)``.

    Valid (and only accepted) for ``ell >= n/k``, where the summand of
    :func:`count_containing` is nonincreasing in j.
    """
    _check_nlk(n, ell, k)
    if ell * k < n:
        raise ValidationError(f"bound requires ell >= n/k, got ell={ell}, n={n}, k={k}")
    return n * math.comb(n, ell) * (k - 1) ** (n - ell)


def g_upper_G(n: int, ell: int, k: int, m: int) -> int:
    """Exact value of G = sum over all k^ell words of F^m.

    Because F depends on the fixed word only through its length, the sum
    collapses to ``k**ell * F**m``.
    """
    _check_nlk(n, ell, k)
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    return k**ell * count_containing(n, ell, k) ** m


def brute_g(n: int, ell: int, k: int, m: int, budget: int = BRUTE_TUPLE_BUDGET) -> int:
    """Exhaustive count of m-tuples of length-n words with common
    subsequence length >= ell.

    Enumerates all ``k**(m*n)`` tuples, so the budget guard refuses
    anything beyond desk scale.
    """
    _check_nlk(n, ell, k)
    if m < 2:
        raise ValidationError(f"m must be >= 2, got {m}")
    tuples = k ** (m * n)
    if tuples > budget:
        raise ResourceLimitError(
            f"enumeration needs {tuples} tuples, budget is {budget}"
        )
    words = [Sequence(np.array(w, dtype=np.int64), k) for w in product(range(k), repeat=n)]
    count = 0
    for combo in product(words, repeat=m):
        if lcs_multi(combo) >= ell:
            count += 1
    return count


def h_k_theta(theta: float, k: int, m: int) -> float:
    """The rate function H_k(theta), evaluated in log space."""
    if not 0.0 < theta < 1.0:
        raise ValidationError(f"theta must be in (0, 1), got {theta}")
    if k < 2:
        raise ValidationError(f"alphabet size must be >= 2, got {k}")
    if m < 2:
        raise ValidationError(f"m must be >= 2, got {m}")
    return math.exp(_log_h(theta, k, m))


def _log_h(theta: float, k: int, m: int) -> float:
    t = float(theta)
    return (
        (t / m - 1.0) * math.log(k)
        + (1.0 - t) * math.log(k - 1)
        - t * math.log(t)
        - (1.0 - t) * math.log(1.0 - t)
    )


def solve_vk(k: int, m: int, tol: float = 1e-10, max_iter: int = 200) -> BoundResult:
    """The unique root of H_k(theta) = 1 on [1/k, 1) by bisection.

    The bracket endpoints have opposite signs of log H (H(1/k) =
    k^(1/(mk)) > 1 and H -> k^(-(m-1)/m) < 1 as theta -> 1), so plain
    bisection converges unconditionally; no derivative is needed.
    """
    if k < 2:
        raise ValidationError(f"alphabet size must be >= 2, got {k}")
    if m < 2:
        raise ValidationError(f"m must be >= 2, got {m}")
    if not tol > 0:
        raise ValidationError(f"tol must be positive, got {tol}")
    lo = 1.0 / k
    hi = 1.0 - 1e-13
    f_lo = _log_h(lo, k, m)
    f_hi = _log_h(hi, k, m)
    if not (f_lo > 0 > f_hi):
        raise LcsimError(
            f"root bracket failed for k={k}, m={m}: log H = {f_lo}, {f_hi}"
        )
    iterations = 0
    while hi - lo > tol and iterations < max_iter:
        mid = 0.5 * (lo + hi)
        if _log_h(mid, k, m) > 0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    root = 0.5 * (lo + hi)
    return BoundResult(
        k=k,
        m=m,
        v_k=root,
        iterations=iterations,
        residual=abs(h_k_theta(root, k, m) - 1.0),
    )


def bounds_table(k: int, m_min: int, m_max: int, tol: float = 1e-10):
    """Upper bounds for m in [m_min, m_max], with published lower bounds
    attached where known (binary alphabet, m up to 10).

    Returns ``[(m, upper, lower_or_None), ...]``.
    """
    if m_min < 2:
        raise ValidationError(f"m_min must be >= 2, got {m_min}")
    if m_max < m_min:
        raise ValidationError(f"need m_max >= m_min, got {m_min}..{m_max}")
    rows = []
    for m in range(m_min, m_max + 1):
        upper = solve_vk(k, m, tol=tol).v_k
        lower = KNOWN_LOWER_BOUNDS_K2.get(m) if k == 2 else None
        rows.append((m, upper, lower))
    return rows
