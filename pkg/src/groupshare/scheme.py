"""The two dealer/participant schemes.

All-or-nothing sharing of a bit column: the dealer XOR-splits the secret
column into one share column per participant and publishes, for each
participant, a column of group words over that participant's private
platform group; a word equal to 1 encodes bit 1, a word not equal to 1
encodes bit 0.  Only the holder of the matching presentation can read the
bits, and XOR of all decoded columns recovers the secret.

Threshold variant: the secret is a residue mod p, split with a random
polynomial; each participant's polynomial value is binary-encoded into a
word column the same way, and any t decoded values interpolate back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Sequence

from .freegroup import Word
from .shamir import PrimeModulus, SharePoint, poly_eval, random_polynomial
from .smallcancel import (
    ONE_SIXTH,
    Presentation,
    dehn_is_trivial,
    make_nontrivial_word,
    make_trivial_word,
)

__all__ = [
    "BitColumn",
    "WordColumn",
    "WordParams",
    "SessionConfig",
    "split_secret",
    "encode_column",
    "decode_column",
    "recover_secret_nn",
    "int_to_column",
    "column_to_int",
    "deal_nn",
    "deal_tn",
    "recover_share",
]

# A bit column is a fixed-width tuple of 0/1 ints.
BitColumn = tuple[int, ...]


@dataclass(frozen=True)
class WordColumn:
    """Column of k words; ``group_hint`` names the participant whose
    presentation decodes it (1-based)."""

    words: tuple[Word, ...]
    group_hint: int


@dataclass(frozen=True)
class WordParams:
    """Randomness knobs for share-word construction.

    Trivial words multiply ``factors`` conjugated relators with conjugators
    of length drawn from [min_conj, max_conj]; the defaults leave enough
    entropy that dealing many secrets through one group never repeats a
    word in practice.
    """

    min_factors: int = 2
    max_factors: int = 3
    min_conj: int = 3
    max_conj: int = 7

    def __post_init__(self) -> None:
        if not 1 <= self.min_factors <= self.max_factors:
            raise ValueError("bad factor range")
        if not 0 <= self.min_conj <= self.max_conj:
            raise ValueError("bad conjugator range")


@dataclass(frozen=True)
class SessionConfig:
    """Public session parameters (made public by design; only the
    presentations and the dealt polynomial stay private)."""

    n: int
    t: int
    k: int
    p: PrimeModulus | None = None
    rank: int = 3
    relator_count: int = 3
    relator_length: int = 40
    lam: Fraction = ONE_SIXTH

    def __post_init__(self) -> None:
        if not 1 <= self.t <= self.n:
            raise ValueError("need 1 <= t <= n")
        if self.k < 1:
            raise ValueError("column width must be positive")
        if self.p is not None:
            if self.n >= self.p.p:
                raise ValueError("need n < p so share indices stay distinct")
            if self.k < self.p.p.bit_length():
                raise ValueError("column width cannot represent residues mod p")


def _check_bits(c: Sequence[int]) -> BitColumn:
    col = tuple(c)
    if any(b not in (0, 1) for b in col):
        raise ValueError("bit column entries must be 0 or 1")
    return col


def split_secret(c: Sequence[int], n: int, rng: Random) -> list[BitColumn]:
    """XOR-split ``c`` into n columns: n - 1 uniform, the last a correction."""
    col = _check_bits(c)
    if n < 2:
        raise ValueError("need at least 2 participants to split")
    shares = [tuple(rng.getrandbits(1) for _ in col) for _ in range(n - 1)]
    correction = list(col)
    for s in shares:
        correction = [a ^ b for a, b in zip(correction, s)]
    shares.append(tuple(correction))
    return shares


def encode_column(
    share: Sequence[int],
    g: Presentation,
    word_params: WordParams,
    rng: Random,
    group_hint: int = 0,
) -> WordColumn:
    """Encode share bits as words over ``g``: bit 1 becomes a word equal to
    1 in the group, bit 0 a word not equal to 1.

    Every entry first draws a trivial word from the session's construction
    distribution; a 0 bit then swaps it for a nontrivial word of the same
    length, so the published lengths carry no information about the bits.
    """
    col = _check_bits(share)
    words = []
    for bit in col:
        factors = rng.randrange(word_params.min_factors, word_params.max_factors + 1)
        conj = rng.randrange(word_params.min_conj, word_params.max_conj + 1)
        trivial = make_trivial_word(g, factors, conj, rng)
        if bit:
            words.append(trivial)
        else:
            words.append(make_nontrivial_word(g, len(trivial), rng))
    return WordColumn(tuple(words), group_hint=group_hint)


def decode_column(wc: WordColumn, g: Presentation) -> BitColumn:
    """Read the bits back by solving the word problem entry by entry."""
    return tuple(int(dehn_is_trivial(g, w).is_trivial) for w in wc.words)


def recover_secret_nn(columns: Sequence[Sequence[int]]) -> BitColumn:
    """Entrywise XOR of all n share columns."""
    if len(columns) < 2:
        raise ValueError("the all-participants scheme needs at least 2 columns")
    cols = [_check_bits(c) for c in columns]
    width = len(cols[0])
    if any(len(c) != width for c in cols):
        raise ValueError("column width mismatch")
    out = cols[0]
    for c in cols[1:]:
        out = tuple(a ^ b for a, b in zip(out, c))
    return out


def int_to_column(y: int, k: int) -> BitColumn:
    """Big-endian fixed-width binary representation."""
    if not 0 <= y < (1 << k):
        raise ValueError(f"{y} does not fit in {k} bits")
    return tuple((y >> (k - 1 - i)) & 1 for i in range(k))


def column_to_int(c: Sequence[int]) -> int:
    col = _check_bits(c)
    out = 0
    for bit in col:
        out = (out << 1) | bit
    return out


def deal_nn(
    secret: Sequence[int],
    groups: Sequence[Presentation],
    word_params: WordParams,
    rng: Random,
) -> list[WordColumn]:
    """All-participants dealing: split the secret column and encode each
    share over the matching participant's group."""
    shares = split_secret(secret, len(groups), rng)
    return [
        encode_column(share, g, word_params, rng, group_hint=j)
        for j, (share, g) in enumerate(zip(shares, groups), start=1)
    ]


def deal_tn(
    secret: int,
    cfg: SessionConfig,
    groups: Sequence[Presentation],
    rng: Random,
    word_params: WordParams | None = None,
) -> list[WordColumn]:
    """Threshold dealing: sample f of degree t - 1 with f(0) = secret and
    publish, for each participant j, the word-column encoding of f(j)."""
    if cfg.p is None:
        raise ValueError("threshold dealing needs a prime modulus in the config")
    if len(groups) != cfg.n:
        raise ValueError("one platform group per participant is required")
    if word_params is None:
        word_params = WordParams()
    p = cfg.p.p
    f = random_polynomial(secret, cfg.t, p, rng)
    columns = []
    for j in range(1, cfg.n + 1):
        y = poly_eval(f, j, p)
        columns.append(
            encode_column(int_to_column(y, cfg.k), groups[j - 1], word_params, rng, group_hint=j)
        )
    return columns


def recover_share(wc: WordColumn, g: Presentation, p: int) -> SharePoint:
    """Decode a word column into the participant's polynomial point."""
    value = column_to_int(decode_column(wc, g))
    if value >= p:
        raise ValueError(
            f"decoded value {value} is not a residue mod {p}: corrupted column "
            "or wrong participant group"
        )
    return SharePoint(wc.group_hint, value)
