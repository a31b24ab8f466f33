"""Exact arithmetic on freely reduced words over a finite generating set.

A letter is a nonzero integer: ``i`` stands for the generator ``x_i`` and
``-i`` for its inverse.  A word is a sequence of letters with no adjacent
cancelling pair; every :class:`Word` is reduced on construction and stays
reduced through all operations.

Internally a word is packed into a ``str`` (letter ``i`` maps to the code
point ``2*i`` for ``i > 0`` and ``-2*i + 1`` otherwise, so inversion is a
XOR with 1).  This makes subword scans and prefix matching run at C speed,
which the word-problem machinery leans on heavily.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from random import Random
from typing import Iterable, Iterator

__all__ = [
    "Alphabet",
    "Word",
    "reduce",
    "concat",
    "invert",
    "conjugate",
    "cyclically_reduce",
    "cyclic_permutations",
    "random_reduced_word",
    "parse_word",
    "serialize_word",
]


@dataclass(frozen=True)
class Alphabet:
    """Generating set ``x_1 .. x_rank`` of a free group."""

    rank: int

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError("alphabet rank must be at least 1")


# ---------------------------------------------------------------------------
# internal letter <-> char codec

def _char(letter: int) -> str:
    return chr(2 * letter) if letter > 0 else chr(-2 * letter + 1)


def _letter(ch: str) -> int:
    code = ord(ch)
    return code // 2 if code % 2 == 0 else -(code - 1) // 2


def _invert_chars(chars: str) -> str:
    return "".join(chr(ord(c) ^ 1) for c in reversed(chars))


def _merge_chars(a: str, b: str) -> str:
    """Concatenate two reduced strings, cancelling across the seam only."""
    cut = 0
    limit = min(len(a), len(b))
    while cut < limit and ord(a[-1 - cut]) ^ 1 == ord(b[cut]):
        cut += 1
    if cut:
        return a[:-cut] + b[cut:] if cut < len(a) else b[cut:]
    return a + b


def _reduce_chars(chars: Iterable[str]) -> str:
    stack: list[str] = []
    for c in chars:
        if stack and ord(stack[-1]) ^ 1 == ord(c):
            stack.pop()
        else:
            stack.append(c)
    return "".join(stack)


class Word:
    """A freely reduced word over an :class:`Alphabet`; immutable value."""

    __slots__ = ("alphabet", "chars")

    def __init__(self, alphabet: Alphabet, letters: Iterable[int] = ()):
        rank = alphabet.rank
        packed = []
        for letter in letters:
            if not isinstance(letter, int) or letter == 0 or abs(letter) > rank:
                raise ValueError(f"letter {letter!r} outside alphabet of rank {rank}")
            packed.append(_char(letter))
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "chars", _reduce_chars(packed))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Word is immutable")

    @property
    def letters(self) -> tuple[int, ...]:
        return tuple(_letter(c) for c in self.chars)

    def __len__(self) -> int:
        return len(self.chars)

    def __iter__(self) -> Iterator[int]:
        return (_letter(c) for c in self.chars)

    def __bool__(self) -> bool:
        return bool(self.chars)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.alphabet == other.alphabet and self.chars == other.chars

    def __hash__(self) -> int:
        return hash((self.alphabet, self.chars))

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __repr__(self) -> str:
        return f"Word({serialize_word(self)!r})"

    def inverse(self) -> "Word":
        return _from_chars(self.alphabet, _invert_chars(self.chars))

    def is_cyclically_reduced(self) -> bool:
        s = self.chars
        return not s or ord(s[0]) ^ 1 != ord(s[-1])


def _from_chars(alphabet: Alphabet, chars: str) -> Word:
    """Fast constructor for strings already known to be reduced."""
    w = Word.__new__(Word)
    object.__setattr__(w, "alphabet", alphabet)
    object.__setattr__(w, "chars", chars)
    return w


def _require_same_alphabet(a: Word, b: Word) -> None:
    if a.alphabet != b.alphabet:
        raise ValueError("words over different alphabets")


# ---------------------------------------------------------------------------
# operations

def reduce(alphabet: Alphabet, letters: Iterable[int]) -> Word:
    """Freely reduce a raw letter sequence into a :class:`Word`."""
    return Word(alphabet, letters)


def concat(a: Word, b: Word) -> Word:
    """Group product: reduced concatenation of ``a`` and ``b``."""
    _require_same_alphabet(a, b)
    return _from_chars(a.alphabet, _merge_chars(a.chars, b.chars))


def invert(w: Word) -> Word:
    return w.inverse()


def conjugate(w: Word, h: Word) -> Word:
    """``h^-1 w h``, reduced."""
    _require_same_alphabet(w, h)
    inv_h = _invert_chars(h.chars)
    return _from_chars(w.alphabet, _merge_chars(_merge_chars(inv_h, w.chars), h.chars))


def cyclically_reduce(w: Word) -> Word:
    s = w.chars
    lo, hi = 0, len(s)
    while hi - lo >= 2 and ord(s[lo]) ^ 1 == ord(s[hi - 1]):
        lo += 1
        hi -= 1
    return _from_chars(w.alphabet, s[lo:hi])


def cyclic_permutations(w: Word) -> frozenset[Word]:
    """All rotations of a cyclically reduced word, deduplicated."""
    if not w.is_cyclically_reduced():
        raise ValueError("word is not cyclically reduced")
    s = w.chars
    if not s:
        return frozenset((w,))
    return frozenset(_from_chars(w.alphabet, s[i:] + s[:i]) for i in range(len(s)))


def random_reduced_word(length: int, alphabet: Alphabet, rng: Random) -> Word:
    """Uniform non-backtracking word: first letter uniform over ``2m``
    choices, each later letter uniform over the ``2m - 1`` letters that do
    not cancel the previous one."""
    if length < 0:
        raise ValueError("length must be nonnegative")
    m = alphabet.rank
    out: list[str] = []
    if length:
        first = rng.randrange(2 * m)
        out.append(chr(first + 2))
        for _ in range(length - 1):
            forbidden = ord(out[-1]) ^ 1
            pick = rng.randrange(2 * m - 1) + 2
            if pick >= forbidden:
                pick += 1
            out.append(chr(pick))
    return _from_chars(alphabet, "".join(out))


_TOKEN = re.compile(r"x([0-9]+)(\^-1)?\Z")


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse ``"x1 x2^-1"`` style text; reduces the result."""
    letters = []
    for token in text.split():
        match = _TOKEN.match(token)
        if match is None:
            raise ValueError(f"malformed word token {token!r}")
        index = int(match.group(1))
        if index < 1 or index > alphabet.rank:
            raise ValueError(f"generator index {index} outside rank {alphabet.rank}")
        letters.append(-index if match.group(2) else index)
    return Word(alphabet, letters)


def serialize_word(w: Word) -> str:
    return " ".join(f"x{i}" if i > 0 else f"x{-i}^-1" for i in w)
