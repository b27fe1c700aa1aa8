"""Seeded random-word generation and insertion constructions.

Randomness is counter-based: :class:`RngHandle` names a Philox stream by
``(master_seed, stream_id)``, so replicate ``i`` of any experiment can own
stream ``base + i`` and produce identical output no matter how work is
scheduled across threads or runs.

The insertion constructions build correlated word pairs: a shared word Z
is cut into ``s`` contiguous pieces and spliced between the ``s + 1``
segments of a host word, either identically into both outputs or routed
piecewise at random (``MixtureSpec``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from .core import Sequence, _symbol_dtype
from .errors import ValidationError

__all__ = [
    "RNG_ALGORITHM",
    "RngHandle",
    "DistributionSpec",
    "MixtureSpec",
    "gen_iid",
    "insert_segments",
    "gen_alt_common",
    "gen_alt_mixture",
    "default_segment_count",
    "IidPairSource",
    "SharedInsertPairSource",
    "MixturePairSource",
]

# Recorded in every manifest so outputs name the generator that made them.
RNG_ALGORITHM = "philox4x64"

_U64 = 1 << 64


@dataclass(frozen=True)
class RngHandle:
    """A named, reproducible random stream.

    Equal ``(master_seed, stream_id)`` pairs yield bit-identical output on
    any host and under any thread count; the pair is used directly as the
    Philox key.
    """

    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name, value in (("master_seed", self.master_seed), ("stream_id", self.stream_id)):
            if not isinstance(value, (int, np.integer)) or not 0 <= value < _U64:
                raise ValidationError(f"{name} must be an integer in [0, 2**64), got {value!r}")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=[self.master_seed, self.stream_id]))

    def stream(self, offset: int) -> "RngHandle":
        """The handle ``offset`` streams after this one (same master seed)."""
        return RngHandle(self.master_seed, self.stream_id + offset)


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngHandle):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise ValidationError(f"rng must be an RngHandle or numpy Generator, got {type(rng).__name__}")


@dataclass(frozen=True)
class DistributionSpec:
    """An i.i.d. letter distribution over {0, ..., k-1}."""

    probs: tuple

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        if len(probs) < 2:
            raise ValidationError("need at least two letter probabilities")
        if min(probs) < 0:
            raise ValidationError(f"probabilities must be nonnegative: {probs}")
        total = sum(probs)
        if abs(total - 1.0) > 1e-12:
            raise ValidationError(f"probabilities sum to {total!r}, expected 1")
        object.__setattr__(self, "probs", probs)

    @property
    def k(self) -> int:
        return len(self.probs)

    @classmethod
    def uniform(cls, k: int) -> "DistributionSpec":
        if k < 2:
            raise ValidationError(f"alphabet size must be >= 2, got {k}")
        return cls((1.0 / k,) * k)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        # Inverse-CDF lookup; forcing the last cumulative weight to 1
        # keeps float round-off from ever emitting symbol k.
        cum = np.cumsum(self.probs)
        cum[-1] = 1.0
        u = rng.random(n)
        return np.searchsorted(cum, u, side="right").astype(_symbol_dtype(self.k))


@dataclass(frozen=True)
class MixtureSpec:
    """Routing probabilities for one shared piece: both / X only / Y only / neither."""

    p_both: float
    p_x_only: float
    p_y_only: float
    p_neither: float

    def __post_init__(self):
        probs = self.as_tuple()
        if min(probs) < 0:
            raise ValidationError(f"mixture probabilities must be nonnegative: {probs}")
        total = sum(probs)
        if abs(total - 1.0) > 1e-12:
            raise ValidationError(f"mixture probabilities sum to {total!r}, expected 1")

    def as_tuple(self) -> tuple:
        return (float(self.p_both), float(self.p_x_only), float(self.p_y_only), float(self.p_neither))


def gen_iid(n: int, dist: DistributionSpec, rng) -> Sequence:
    """A length-``n`` word with symbols drawn independently from ``dist``."""
    if n < 0:
        raise ValidationError(f"length must be nonnegative, got {n}")
    gen = _as_generator(rng)
    return Sequence(dist.sample(n, gen), dist.k)


def insert_segments(z: Sequence, x: Sequence, s: int) -> Sequence:
    """Splice ``z`` into ``x`` as ``s`` contiguous pieces.

    ``z`` is cut into ``s`` near-equal contiguous pieces and ``x`` into
    ``s + 1``; the result interleaves them
    ``x1 z1 x2 z2 ... zs x(s+1)``.  When the division is uneven the
    leading pieces carry the extra symbol, so piece sizes differ by at
    most one.  Restricted to the x-positions the output is exactly ``x``,
    and to the z-positions exactly ``z``.
    """
    if z.alphabet_size != x.alphabet_size:
        raise ValidationError(
            f"alphabet sizes differ: {z.alphabet_size} vs {x.alphabet_size}"
        )
    if s < 1:
        raise ValidationError(f"segment count must be >= 1, got {s}")
    if len(z) < s:
        raise ValidationError(f"cannot cut {len(z)} symbols into {s} pieces")
    if len(x) < s + 1:
        raise ValidationError(f"cannot cut {len(x)} symbols into {s + 1} segments")
    z_pieces = np.array_split(z.symbols, s)
    x_pieces = np.array_split(x.symbols, s + 1)
    parts = []
    for i in range(s):
        parts.append(x_pieces[i])
        parts.append(z_pieces[i])
    parts.append(x_pieces[s])
    return Sequence(np.concatenate(parts), x.alphabet_size)


def gen_alt_common(n: int, m_len: int, s: int, rng, alphabet_size: int = 4):
    """A correlated pair: independent uniform hosts sharing one inserted word.

    Draws hosts X', Y' of length ``m_len`` and a shared word Z of length
    ``n - m_len``, all i.i.d. uniform, and splices Z identically into
    both hosts.  Both outputs have length exactly ``n`` and Z is a common
    subsequence of the pair by construction.
    """
    if not 0 < m_len < n:
        raise ValidationError(f"need 0 < m_len < n, got m_len={m_len}, n={n}")
    gen = _as_generator(rng)
    dist = DistributionSpec.uniform(alphabet_size)
    x_host = gen_iid(m_len, dist, gen)
    y_host = gen_iid(m_len, dist, gen)
    z = gen_iid(n - m_len, dist, gen)
    return insert_segments(z, x_host, s), insert_segments(z, y_host, s)


def gen_alt_mixture(n: int, m_len: int, s: int, mix: MixtureSpec, rng, alphabet_size: int = 4):
    """Like :func:`gen_alt_common`, but each piece of Z is routed at random.

    Each of the ``s`` pieces lands in both outputs, in X only, in Y only,
    or in neither, with the :class:`MixtureSpec` probabilities.  Dropped
    pieces are not replaced, so output lengths are ``m_len`` plus the
    routed mass and the two outputs generally differ in length (and stay
    below the nominal ``n`` unless every piece routes to both).
    """
    if not 0 < m_len < n:
        raise ValidationError(f"need 0 < m_len < n, got m_len={m_len}, n={n}")
    gen = _as_generator(rng)
    dist = DistributionSpec.uniform(alphabet_size)
    x_host = gen_iid(m_len, dist, gen)
    y_host = gen_iid(m_len, dist, gen)
    z = gen_iid(n - m_len, dist, gen)
    if s < 1:
        raise ValidationError(f"segment count must be >= 1, got {s}")
    if len(z) < s:
        raise ValidationError(f"cannot cut {len(z)} symbols into {s} pieces")
    if m_len < s + 1:
        raise ValidationError(f"cannot cut {m_len} symbols into {s + 1} segments")
    cum = np.cumsum(mix.as_tuple())
    cum[-1] = 1.0
    routes = np.searchsorted(cum, gen.random(s), side="right")
    z_pieces = np.array_split(z.symbols, s)
    x_segs = np.array_split(x_host.symbols, s + 1)
    y_segs = np.array_split(y_host.symbols, s + 1)
    x_parts = []
    y_parts = []
    for i in range(s):
        x_parts.append(x_segs[i])
        y_parts.append(y_segs[i])
        if routes[i] == 0 or routes[i] == 1:
            x_parts.append(z_pieces[i])
        if routes[i] == 0 or routes[i] == 2:
            y_parts.append(z_pieces[i])
    x_parts.append(x_segs[s])
    y_parts.append(y_segs[s])
    return (
        Sequence(np.concatenate(x_parts), alphabet_size),
        Sequence(np.concatenate(y_parts), alphabet_size),
    )


# Mixture-routing experiments are insensitive to the piece count; 100
# pieces keeps individual pieces long enough to matter.
DEFAULT_MIXTURE_SEGMENTS = 100


def default_segment_count(n: int, m_len: int) -> int:
    """Default piece count for the identically-shared insert construction.

    A constant piece count, clamped to the inserted length, reproduces
    the published detection-power ladder across insert sizes; rules
    proportional to the inserted length do not (measured: they push the
    non-rejection rate to 0 or 1 on the interior of the ladder).
    """
    return max(1, min(70, n - m_len))


@dataclass(frozen=True)
class IidPairSource:
    """Independent uniform/biased word pairs of a common length."""

    n: int
    dist: DistributionSpec

    name: ClassVar[str] = "iid-pair"

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError(f"length must be nonnegative, got {self.n}")

    def sample(self, rng):
        gen = _as_generator(rng)
        return gen_iid(self.n, self.dist, gen), gen_iid(self.n, self.dist, gen)

    def describe(self) -> dict:
        return {"generator": self.name, "n": self.n, "probs": list(self.dist.probs)}


@dataclass(frozen=True)
class SharedInsertPairSource:
    """Pairs built by :func:`gen_alt_common`."""

    n: int
    m_len: int
    segments: int
    alphabet_size: int = 4

    name: ClassVar[str] = "shared-insert-pair"

    def __post_init__(self):
        if not 0 < self.m_len < self.n:
            raise ValidationError(
                f"need 0 < m_len < n, got m_len={self.m_len}, n={self.n}"
            )

    def sample(self, rng):
        return gen_alt_common(self.n, self.m_len, self.segments, rng, self.alphabet_size)

    def describe(self) -> dict:
        return {
            "generator": self.name,
            "n": self.n,
            "m_len": self.m_len,
            "segments": self.segments,
            "alphabet_size": self.alphabet_size,
        }


@dataclass(frozen=True)
class MixturePairSource:
    """Pairs built by :func:`gen_alt_mixture`."""

    n: int
    m_len: int
    segments: int
    mix: MixtureSpec
    alphabet_size: int = 4

    name: ClassVar[str] = "mixture-insert-pair"

    def __post_init__(self):
        if not 0 < self.m_len < self.n:
            raise ValidationError(
                f"need 0 < m_len < n, got m_len={self.m_len}, n={self.n}"
            )

    def sample(self, rng):
        return gen_alt_mixture(
            self.n, self.m_len, self.segments, self.mix, rng, self.alphabet_size
        )

    def describe(self) -> dict:
        return {
            "generator": self.name,
            "n": self.n,
            "m_len": self.m_len,
            "segments": self.segments,
            "mix": list(self.mix.as_tuple()),
            "alphabet_size": self.alphabet_size,
        }
