"""Exact longest-common-subsequence engines.

Three interchangeable length computations are provided:

* :func:`lcs_dp` — the classic quadratic dynamic program, kept as the
  reference oracle for the fast path.
* :func:`lcs_wmmm` — the O(NP) edit-distance band algorithm of Wu, Manber,
  Myers and Miller ("An O(NP) sequence comparison algorithm", Inf. Process.
  Lett. 35, 1990).  P is the number of deletions in the shortest
  insert/delete edit script, so nearly-identical inputs are compared in
  near-linear time.  For adversarial inputs (P proportional to n) the band
  degenerates to quadratic work, so the default engine monitors its own
  progress and restarts with a bit-parallel row algorithm (Allison & Dix
  1986; Crochemore et al. 2001) once the band provably costs more.  Both
  engines are exact and return identical lengths.
* :func:`lcs_multi` — an m-dimensional dynamic program for the common
  subsequence of three or more sequences, guarded by an explicit cell
  budget.

All functions are pure and hold no module state; the numba kernels release
the GIL so callers may fan out across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import ResourceLimitError, ValidationError

__all__ = [
    "Sequence",
    "lcs_dp",
    "lcs_wmmm",
    "lcs_multi",
    "lcs_backtrack",
    "BACKTRACK_MAX_LEN",
    "MULTI_CELL_BUDGET",
]

# Full-table backtracking is quadratic in memory; keep it for witnesses only.
BACKTRACK_MAX_LEN = 2000

# Default cap on the number of DP cells lcs_multi may allocate.
MULTI_CELL_BUDGET = 10_000_000


def _symbol_dtype(alphabet_size: int):
    if alphabet_size <= 1 << 8:
        return np.uint8
    if alphabet_size <= 1 << 16:
        return np.uint16
    return np.int64


@dataclass(frozen=True)
class Sequence:
    """A word over the alphabet {0, 1, ..., alphabet_size - 1}.

    ``symbols`` is stored as a read-only numpy array of the smallest
    unsigned dtype that fits the alphabet.  Empty sequences are allowed.
    """

    symbols: np.ndarray
    alphabet_size: int

    def __post_init__(self):
        k = self.alphabet_size
        if not isinstance(k, (int, np.integer)) or k < 2:
            raise ValidationError(f"alphabet_size must be an integer >= 2, got {k!r}")
        arr = np.asarray(self.symbols)
        if arr.ndim != 1:
            raise ValidationError("symbols must be one-dimensional")
        if arr.size and (arr.min() < 0 or arr.max() >= k):
            raise ValidationError(
                f"symbols must lie in [0, {k}); found range "
                f"[{arr.min()}, {arr.max()}]"
            )
        arr = np.ascontiguousarray(arr, dtype=_symbol_dtype(k))
        arr.setflags(write=False)
        object.__setattr__(self, "symbols", arr)
        object.__setattr__(self, "alphabet_size", int(k))

    def __len__(self) -> int:
        return int(self.symbols.shape[0])

    @classmethod
    def from_string(cls, text: str, alphabet: str) -> "Sequence":
        """Decode ``text`` using the positional alphabet string.

        ``alphabet="ACGT"`` maps A->0, C->1, G->2, T->3.
        """
        if len(set(alphabet)) != len(alphabet) or len(alphabet) < 2:
            raise ValidationError(
                "alphabet must contain at least two distinct characters"
            )
        lookup = {ch: i for i, ch in enumerate(alphabet)}
        try:
            codes = [lookup[ch] for ch in text]
        except KeyError as exc:
            raise ValidationError(
                f"character {exc.args[0]!r} not in alphabet {alphabet!r}"
            ) from None
        return cls(np.array(codes, dtype=np.int64), len(alphabet))

    def to_string(self, alphabet: str) -> str:
        if len(alphabet) < self.alphabet_size:
            raise ValidationError(
                f"alphabet string of length {len(alphabet)} cannot render "
                f"symbols over {self.alphabet_size} letters"
            )
        return "".join(alphabet[s] for s in self.symbols)


def _require_same_alphabet(*seqs: Sequence) -> int:
    sizes = {s.alphabet_size for s in seqs}
    if len(sizes) != 1:
        raise ValidationError(f"alphabet sizes differ: {sorted(sizes)}")
    return sizes.pop()


@njit(cache=True, nogil=True)
def _dp_length(a, b):
    # Two rolling rows; O(len(a) * len(b)) time, O(len(b)) memory.
    n = a.shape[0]
    m = b.shape[0]
    prev = np.zeros(m + 1, np.int64)
    cur = np.zeros(m + 1, np.int64)
    for i in range(n):
        ai = a[i]
        for j in range(m):
            if b[j] == ai:
                cur[j + 1] = prev[j] + 1
            else:
                v = prev[j + 1]
                w = cur[j]
                cur[j + 1] = v if v >= w else w
        tmp = prev
        prev = cur
        cur = tmp
    return prev[m]


@njit(cache=True, nogil=True)
def _onp_edit_distance(a, b, p_cap):
    # Wu-Manber-Myers-Miller band algorithm.  Requires len(a) <= len(b).
    # Returns the insert/delete-only edit distance D = delta + 2P where
    # P is the deletion count of the shortest edit script, or -1 if P
    # would exceed p_cap (used by the adaptive engine to bail out).
    m = a.shape[0]
    n = b.shape[0]
    delta = n - m
    offset = m + 1
    fp = np.full(m + n + 3, np.int64(-1))
    p = -1
    while True:
        p += 1
        if p > p_cap:
            return -1
        for k in range(-p, delta):
            y = fp[k - 1 + offset] + 1
            y2 = fp[k + 1 + offset]
            if y2 > y:
                y = y2
            x = y - k
            while x < m and y < n and a[x] == b[y]:
                x += 1
                y += 1
            fp[k + offset] = y
        for k in range(delta + p, delta - 1, -1):
            y = fp[k - 1 + offset] + 1
            y2 = fp[k + 1 + offset]
            if y2 > y:
                y = y2
            x = y - k
            while x < m and y < n and a[x] == b[y]:
                x += 1
                y += 1
            fp[k + offset] = y
        if fp[delta + offset] == n:
            return delta + 2 * p


@njit(cache=True, nogil=True)
def _bitparallel_length(a, b, k):
    # Bit-vector LCS row recurrence (Allison & Dix).  Row state R marks
    # the columns where the DP row increments; per input symbol:
    #   x = match_mask | R;  R' = x & ~(x - ((R << 1) | 1))
    # carried across 64-bit words.  Returns popcount(R) = LCS length.
    n = a.shape[0]
    m = b.shape[0]
    nwords = (m + 63) >> 6
    one = np.uint64(1)
    zero = np.uint64(0)
    pm = np.zeros((k, nwords), np.uint64)
    for j in range(m):
        pm[b[j], j >> 6] |= one << np.uint64(j & 63)
    row = np.zeros(nwords, np.uint64)
    for i in range(n):
        c = a[i]
        carry = one
        borrow = zero
        for w in range(nwords):
            rw = row[w]
            xw = pm[c, w] | rw
            yw = (rw << one) | carry
            carry = rw >> np.uint64(63)
            d1 = xw - yw
            b1 = one if xw < yw else zero
            d = d1 - borrow
            b2 = one if d1 < borrow else zero
            borrow = b1 | b2
            row[w] = xw & ~d
    total = zero
    for w in range(nwords):
        x = row[w]
        x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
        x = (x & np.uint64(0x3333333333333333)) + (
            (x >> np.uint64(2)) & np.uint64(0x3333333333333333)
        )
        x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
        total += (x * np.uint64(0x0101010101010101)) >> np.uint64(56)
    return total


@njit(cache=True, nogil=True)
def _dp_table(a, b):
    n = a.shape[0]
    m = b.shape[0]
    table = np.zeros((n + 1, m + 1), np.int32)
    for i in range(n):
        ai = a[i]
        for j in range(m):
            if b[j] == ai:
                table[i + 1, j + 1] = table[i, j] + 1
            else:
                v = table[i, j + 1]
                w = table[i + 1, j]
                table[i + 1, j + 1] = v if v >= w else w
    return table


@njit(cache=True, nogil=True)
def _multi_length(flat, offsets, dims_plus1, strides):
    m = dims_plus1.shape[0]
    total = 1
    for t in range(m):
        total *= dims_plus1[t]
    table = np.zeros(total, np.int32)
    idx = np.zeros(m, np.int64)
    diag_shift = 0
    for t in range(m):
        diag_shift += strides[t]
    for f in range(total):
        interior = True
        for t in range(m):
            if idx[t] == 0:
                interior = False
                break
        if interior:
            sym = flat[offsets[0] + idx[0] - 1]
            equal = True
            for t in range(1, m):
                if flat[offsets[t] + idx[t] - 1] != sym:
                    equal = False
                    break
            if equal:
                table[f] = table[f - diag_shift] + 1
            else:
                best = np.int32(0)
                for t in range(m):
                    v = table[f - strides[t]]
                    if v > best:
                        best = v
                table[f] = best
        # odometer step
        for t in range(m - 1, -1, -1):
            idx[t] += 1
            if idx[t] < dims_plus1[t]:
                break
            idx[t] = 0
    return table[total - 1]


def lcs_dp(a: Sequence, b: Sequence) -> int:
    """LCS length by the textbook dynamic program.

    Quadratic time; intended as the correctness oracle and for inputs up
    to a couple of thousand symbols.
    """
    _require_same_alphabet(a, b)
    if len(a) == 0 or len(b) == 0:
        return 0
    return int(_dp_length(a.symbols, b.symbols))


def _band_p_cap(short_len: int, long_len: int) -> int:
    # The band performs roughly p^2 + p*(delta+2) snake probes up to
    # deletion count p.  Per unit time the bit-parallel path retires
    # about six times as many word-steps as the band retires probes, so
    # capping the probes at words/6 means a bail-out-plus-restart costs
    # at most about one extra fallback run.
    words = (long_len + 63) // 64
    budget = short_len * words // 6
    delta = long_len - short_len
    disc = (delta + 3) * (delta + 3) + 4 * budget
    return max(64, (math.isqrt(disc) - (delta + 3)) // 2)


def lcs_wmmm(a: Sequence, b: Sequence, engine: str = "auto") -> int:
    """LCS length via the O(NP) band algorithm.

    Agrees with :func:`lcs_dp` on every input.  With D' the
    insert/delete-only edit distance, the length is
    ``(len(a) + len(b) - D') / 2``.

    ``engine`` selects the realization: ``"band"`` forces the O(NP)
    band, ``"bitparallel"`` forces the bit-vector row algorithm, and
    ``"auto"`` (default) runs the band with a work cap and falls back to
    the bit-vector path when the edit distance is large enough that the
    band would be the slower of the two.
    """
    _require_same_alphabet(a, b)
    if engine not in ("auto", "band", "bitparallel"):
        raise ValidationError(f"unknown engine {engine!r}")
    if len(a) == 0 or len(b) == 0:
        return 0
    x, y = (a, b) if len(a) <= len(b) else (b, a)
    if engine != "bitparallel":
        p_cap = len(x) + 1 if engine == "band" else _band_p_cap(len(x), len(y))
        d = int(_onp_edit_distance(x.symbols, y.symbols, p_cap))
        if d >= 0:
            return (len(a) + len(b) - d) // 2
    return int(_bitparallel_length(x.symbols, y.symbols, x.alphabet_size))


def lcs_multi(seqs, cell_budget: int = MULTI_CELL_BUDGET) -> int:
    """Exact common-subsequence length of ``m >= 2`` sequences.

    Allocates the full product DP table, so the product of
    ``len(s) + 1`` over the inputs must stay within ``cell_budget``
    (raises :class:`ResourceLimitError` otherwise).
    """
    seqs = list(seqs)
    if len(seqs) < 2:
        raise ValidationError(f"need at least 2 sequences, got {len(seqs)}")
    _require_same_alphabet(*seqs)
    if any(len(s) == 0 for s in seqs):
        return 0
    cells = math.prod(len(s) + 1 for s in seqs)
    if cells > cell_budget:
        raise ResourceLimitError(
            f"DP table needs {cells} cells, budget is {cell_budget}; "
            "shrink the inputs or raise cell_budget"
        )
    dtype = _symbol_dtype(seqs[0].alphabet_size)
    flat = np.concatenate([s.symbols.astype(dtype) for s in seqs])
    lens = np.array([len(s) for s in seqs], dtype=np.int64)
    offsets = np.concatenate(([0], np.cumsum(lens)[:-1])).astype(np.int64)
    dims_plus1 = lens + 1
    strides = np.empty_like(dims_plus1)
    strides[-1] = 1
    for t in range(len(seqs) - 2, -1, -1):
        strides[t] = strides[t + 1] * dims_plus1[t + 1]
    return int(_multi_length(flat, offsets, dims_plus1, strides))


def lcs_backtrack(a: Sequence, b: Sequence) -> Sequence:
    """One optimal common subsequence (a witness).

    Keeps the full DP table, so both inputs are capped at
    ``BACKTRACK_MAX_LEN`` symbols.
    """
    k = _require_same_alphabet(a, b)
    if max(len(a), len(b)) > BACKTRACK_MAX_LEN:
        raise ResourceLimitError(
            f"backtracking is limited to sequences of length "
            f"{BACKTRACK_MAX_LEN}; got {len(a)} and {len(b)}"
        )
    if len(a) == 0 or len(b) == 0:
        return Sequence(np.empty(0, dtype=np.int64), k)
    table = _dp_table(a.symbols, b.symbols)
    out = []
    i, j = len(a), len(b)
    while i > 0 and j > 0:
        if a.symbols[i - 1] == b.symbols[j - 1]:
            out.append(int(a.symbols[i - 1]))
            i -= 1
            j -= 1
        elif table[i - 1, j] >= table[i, j - 1]:
            i -= 1
        else:
            j -= 1
    out.reverse()
    return Sequence(np.array(out, dtype=np.int64), k)
