"""Small cancellation platform groups and the word problem.

A participant's long-term secret is a finite presentation whose word
problem Dehn's algorithm solves.  This module covers the whole platform
lifecycle: symmetrizing relator sets, measuring pieces, verifying the
metric condition C'(lambda), sampling random presentations that satisfy
C'(1/6), deciding triviality by Dehn reduction, and constructing words
that are (or provably are not) equal to the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from random import Random
from typing import Iterable

from .errors import BudgetExhausted
from .freegroup import (
    Alphabet,
    Word,
    _from_chars,
    _invert_chars,
    _merge_chars,
    cyclically_reduce,
    parse_word,
    random_reduced_word,
    serialize_word,
)

__all__ = [
    "Presentation",
    "SymmetrizedSet",
    "PieceReport",
    "CancellationReport",
    "DehnStep",
    "DehnTrace",
    "symmetrize",
    "max_piece",
    "check_small_cancellation",
    "random_platform_group",
    "dehn_is_trivial",
    "make_trivial_word",
    "make_trivial_word_certified",
    "make_nontrivial_word",
    "parse_presentation",
    "serialize_presentation",
]

ONE_SIXTH = Fraction(1, 6)


@dataclass(frozen=True)
class Presentation:
    """Group presentation: alphabet plus cyclically reduced relators."""

    alphabet: Alphabet
    relators: tuple[Word, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "relators", tuple(self.relators))
        for r in self.relators:
            if r.alphabet != self.alphabet:
                raise ValueError("relator over a different alphabet")
            if not r:
                raise ValueError("relator must be nonempty")
            if not r.is_cyclically_reduced():
                raise ValueError(f"relator {r!r} is not cyclically reduced")


@dataclass(frozen=True)
class SymmetrizedSet:
    """Relator set closed under inversion and cyclic permutation."""

    alphabet: Alphabet
    members: tuple[Word, ...]


@dataclass(frozen=True)
class PieceReport:
    """Longest common initial segment of two distinct symmetrized members."""

    piece: Word
    witness: tuple[Word, Word] | None


@dataclass(frozen=True)
class CancellationReport:
    lambda_bound: Fraction
    max_piece_ratio: Fraction
    witness: tuple[Word, Word] | None  # (piece, relator) achieving the max
    satisfied: bool


@dataclass(frozen=True)
class DehnStep:
    position: int
    replaced: Word
    replacement: Word
    relator: Word


@dataclass(frozen=True)
class DehnTrace:
    steps: tuple[DehnStep, ...]
    final_word: Word
    is_trivial: bool


# ---------------------------------------------------------------------------
# symmetrization and the metric condition

def _canonical_key(w: Word) -> tuple[int, str]:
    return (len(w.chars), w.chars)


def symmetrize(relators: Iterable[Word], alphabet: Alphabet | None = None) -> SymmetrizedSet:
    """Close a relator set under inversion and cyclic permutation.

    Inputs are cyclically reduced first; members come back deduplicated in
    a canonical (length, internal-lex) order.
    """
    relators = tuple(relators)
    if alphabet is None:
        if not relators:
            raise ValueError("cannot infer alphabet from an empty relator list")
        alphabet = relators[0].alphabet
    seen: set[str] = set()
    members: list[Word] = []
    for r in relators:
        if r.alphabet != alphabet:
            raise ValueError("relator over a different alphabet")
        core = cyclically_reduce(r)
        if not core:
            raise ValueError("empty relator")
        for base in (core.chars, _invert_chars(core.chars)):
            for i in range(len(base)):
                rot = base[i:] + base[:i]
                if rot not in seen:
                    seen.add(rot)
                    members.append(_from_chars(alphabet, rot))
    members.sort(key=_canonical_key)
    return SymmetrizedSet(alphabet, tuple(members))


def _lcp(a: str, b: str) -> int:
    n = min(len(a), len(b))
    i = 0
    while i < n and a[i] == b[i]:
        i += 1
    return i


def max_piece(s: SymmetrizedSet) -> PieceReport:
    """Longest word that is an initial segment of two distinct members.

    The maximum common prefix over all pairs is realized by some pair that
    is adjacent in lexicographic order, so one sorted pass suffices.
    """
    ordered = sorted(m.chars for m in s.members)
    best = 0
    piece_chars = ""
    witness: tuple[Word, Word] | None = None
    for a, b in zip(ordered, ordered[1:]):
        l = _lcp(a, b)
        if l > best:
            best = l
            piece_chars = a[:l]
            witness = (_from_chars(s.alphabet, a), _from_chars(s.alphabet, b))
    return PieceReport(_from_chars(s.alphabet, piece_chars), witness)


def check_small_cancellation(p: Presentation, lam: Fraction | str | int) -> CancellationReport:
    """Verify the condition C'(lam): every piece of a relator r from the
    symmetrized closure is shorter than lam * |r|."""
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise ValueError("lambda must lie strictly between 0 and 1")
    if not p.relators:
        return CancellationReport(lam, Fraction(0), None, True)
    ordered = sorted(m.chars for m in symmetrize(p.relators, p.alphabet).members)
    best = Fraction(0)
    witness: tuple[Word, Word] | None = None
    for a, b in zip(ordered, ordered[1:]):
        l = _lcp(a, b)
        if not l:
            continue
        for member in (a, b):
            ratio = Fraction(l, len(member))
            if ratio > best:
                best = ratio
                witness = (_from_chars(p.alphabet, member[:l]), _from_chars(p.alphabet, member))
    return CancellationReport(lam, best, witness, best < lam)


def _orbit_signature(w: Word) -> str:
    """Canonical representative of a word's cyclic-permutation-and-inverse orbit."""
    rotations = []
    for base in (w.chars, _invert_chars(w.chars)):
        rotations.extend(base[i:] + base[:i] for i in range(len(base)))
    return min(rotations)


def random_platform_group(
    rank: int,
    r_count: int,
    r_length: int,
    lam: Fraction | str | int = ONE_SIXTH,
    rng: Random | None = None,
    max_attempts: int = 1000,
) -> Presentation:
    """Rejection-sample a presentation satisfying C'(lam).

    Each attempt draws ``r_count`` cyclically reduced random words of
    length ``r_length`` whose symmetrized orbits are pairwise disjoint
    (presentations with equivalent relators are rejected as degenerate),
    then checks the cancellation condition.
    """
    lam = Fraction(lam)
    if rng is None:
        raise ValueError("an explicit rng is required")
    if r_length <= 6:
        raise ValueError("relator length must exceed 6")
    if r_count < 1 or max_attempts < 1:
        raise ValueError("r_count and max_attempts must be positive")
    alphabet = Alphabet(rank)
    for _ in range(max_attempts):
        words = []
        for _ in range(r_count):
            w = random_reduced_word(r_length, alphabet, rng)
            while not w.is_cyclically_reduced():
                w = random_reduced_word(r_length, alphabet, rng)
            words.append(w)
        signatures = {_orbit_signature(w) for w in words}
        if len(signatures) < r_count:
            continue
        candidate = Presentation(alphabet, tuple(words))
        if check_small_cancellation(candidate, lam).satisfied:
            return candidate
    raise BudgetExhausted(
        f"no C'({lam}) presentation found in {max_attempts} attempts "
        f"(rank={rank}, relators={r_count}, length={r_length})"
    )


# ---------------------------------------------------------------------------
# Dehn's algorithm

class _DehnIndex:
    """Per-presentation search structure for over-half relator prefixes.

    For every symmetrized member r the minimal replaceable prefix length is
    t = |r| // 2 + 1 (the least length strictly greater than |r| / 2).
    ``tables[t]`` maps each length-t prefix to the members it opens, and
    ``pattern`` is one alternation regex over all such prefixes, so the
    leftmost candidate position is found by a single C-level scan.
    """

    __slots__ = ("alphabet", "members", "tables", "thresholds", "pattern")

    def __init__(self, p: Presentation):
        self.alphabet = p.alphabet
        self.members = (
            symmetrize(p.relators, p.alphabet).members if p.relators else ()
        )
        tables: dict[int, dict[str, list[str]]] = {}
        for member in self.members:
            t = len(member.chars) // 2 + 1
            tables.setdefault(t, {}).setdefault(member.chars[:t], []).append(member.chars)
        self.tables = {
            t: {k: tuple(v) for k, v in table.items()} for t, table in tables.items()
        }
        self.thresholds = tuple(sorted(self.tables))
        keys = [k for t in self.thresholds for k in self.tables[t]]
        self.pattern = re.compile("|".join(map(re.escape, keys))) if keys else None


@lru_cache(maxsize=128)
def _dehn_index(p: Presentation) -> _DehnIndex:
    return _DehnIndex(p)


def dehn_is_trivial(p: Presentation, w: Word, verify_condition: bool = False) -> DehnTrace:
    """Decide whether ``w`` equals the identity by Dehn reduction.

    Repeatedly scan the freely reduced current word for a subword u such
    that some symmetrized relator factors as u * v with |u| > |r| / 2; if
    one exists, replace u by v^-1 (strictly shorter) and re-reduce.  The
    word is trivial exactly when it shrinks to the empty word.  Scanning is
    deterministic: leftmost starting position first, then the longest match
    there.  Completeness of the verdict relies on the presentation being
    C'(1/6), which callers assert (pass ``verify_condition=True`` to check).
    """
    if w.alphabet != p.alphabet:
        raise ValueError("word and presentation use different alphabets")
    if verify_condition and not check_small_cancellation(p, ONE_SIXTH).satisfied:
        raise ValueError("presentation does not satisfy C'(1/6)")
    index = _dehn_index(p)
    chars = w.chars
    steps: list[DehnStep] = []
    if index.pattern is not None:
        while True:
            hit = index.pattern.search(chars)
            if hit is None:
                break
            pos = hit.start()
            best_len = 0
            best_member = ""
            for t in index.thresholds:
                if pos + t > len(chars):
                    continue
                bucket = index.tables[t].get(chars[pos : pos + t])
                if not bucket:
                    continue
                for member in bucket:
                    length = t
                    cap = min(len(member), len(chars) - pos)
                    while length < cap and chars[pos + length] == member[length]:
                        length += 1
                    if length > best_len:
                        best_len, best_member = length, member
            replacement = _invert_chars(best_member[best_len:])
            steps.append(
                DehnStep(
                    position=pos,
                    replaced=_from_chars(p.alphabet, chars[pos : pos + best_len]),
                    replacement=_from_chars(p.alphabet, replacement),
                    relator=_from_chars(p.alphabet, best_member),
                )
            )
            shorter = _merge_chars(
                _merge_chars(chars[:pos], replacement), chars[pos + best_len :]
            )
            assert len(shorter) < len(chars)
            chars = shorter
    return DehnTrace(tuple(steps), _from_chars(p.alphabet, chars), not chars)


# ---------------------------------------------------------------------------
# constructing words equal / not equal to 1

def make_trivial_word_certified(
    p: Presentation,
    factor_count: int,
    conj_length: int,
    rng: Random,
    max_attempts: int = 1000,
) -> tuple[Word, tuple[tuple[int, int, Word], ...]]:
    """Like :func:`make_trivial_word` but also return the certificate:
    a tuple of (relator index, sign, conjugator) factors whose product
    ``prod h^-1 r^sign h`` reduces to the returned word."""
    if factor_count < 1:
        raise ValueError("factor_count must be at least 1")
    if conj_length < 0:
        raise ValueError("conj_length must be nonnegative")
    if not p.relators:
        raise ValueError("presentation has no relators")
    for _ in range(max_attempts):
        acc = ""
        certificate = []
        for _ in range(factor_count):
            idx = rng.randrange(len(p.relators))
            sign = 1 if rng.randrange(2) == 0 else -1
            h = random_reduced_word(conj_length, p.alphabet, rng)
            r_chars = p.relators[idx].chars
            if sign < 0:
                r_chars = _invert_chars(r_chars)
            factor = _merge_chars(_merge_chars(_invert_chars(h.chars), r_chars), h.chars)
            acc = _merge_chars(acc, factor)
            certificate.append((idx, sign, h))
        if acc:
            return _from_chars(p.alphabet, acc), tuple(certificate)
    raise BudgetExhausted(
        f"conjugate products collapsed to the identity {max_attempts} times in a row"
    )


def make_trivial_word(
    p: Presentation,
    factor_count: int,
    conj_length: int,
    rng: Random,
    max_attempts: int = 1000,
) -> Word:
    """Random nonempty product of conjugated relators; trivial by construction."""
    word, _ = make_trivial_word_certified(p, factor_count, conj_length, rng, max_attempts)
    return word


def make_nontrivial_word(p: Presentation, target_length: int, rng: Random) -> Word:
    """Random reduced word of exactly ``target_length`` letters containing no
    subword longer than half of any symmetrized relator.

    On a C'(1/6) presentation such a word cannot lie in the normal closure
    (any nonempty trivial word must contain an over-half relator piece), so
    Dehn reduction reports it nontrivial.  Built letter by letter, choosing
    uniformly among extensions that neither cancel nor complete a forbidden
    over-half prefix; raises if every extension is forbidden, which signals
    a degenerate presentation.
    """
    if target_length < 1:
        raise ValueError("target_length must be at least 1")
    index = _dehn_index(p)
    m = p.alphabet.rank
    all_codes = [chr(code) for code in range(2, 2 * m + 2)]
    out = ""
    for _ in range(target_length):
        forbidden = ord(out[-1]) ^ 1 if out else -1
        grown = len(out) + 1
        checks = [
            (index.tables[t], out[grown - t :]) for t in index.thresholds if grown >= t
        ]
        admissible = []
        for c in all_codes:
            if ord(c) == forbidden:
                continue
            for table, tail in checks:
                if tail + c in table:
                    break
            else:
                admissible.append(c)
        if not admissible:
            raise ValueError(
                "nontrivial word construction is stuck: every extension completes "
                "an over-half relator prefix (degenerate presentation)"
            )
        out += admissible[rng.randrange(len(admissible))]
    return _from_chars(p.alphabet, out)


# ---------------------------------------------------------------------------
# text format (the secure-channel payload)

def serialize_presentation(p: Presentation) -> str:
    lines = [f"generators {p.alphabet.rank}"]
    lines.extend(f"relator {serialize_word(r)}" for r in p.relators)
    return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> Presentation:
    """Parse the ``generators m`` / ``relator <word>`` format.

    Blank lines and lines starting with ``#`` are ignored.  Relators are
    cyclically reduced on input; a relator reducing to the empty word is an
    error.
    """
    alphabet: Alphabet | None = None
    relators: list[Word] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        keyword, _, rest = line.partition(" ")
        if keyword == "generators":
            if alphabet is not None:
                raise ValueError("duplicate generators line")
            try:
                alphabet = Alphabet(int(rest.strip()))
            except (TypeError, ValueError) as exc:
                raise ValueError(f"bad generators line {line!r}") from exc
        elif keyword == "relator":
            if alphabet is None:
                raise ValueError("relator line before generators line")
            word = cyclically_reduce(parse_word(rest, alphabet))
            if not word:
                raise ValueError("empty relator")
            relators.append(word)
        else:
            raise ValueError(f"unrecognized line {line!r}")
    if alphabet is None:
        raise ValueError("missing generators line")
    return Presentation(alphabet, tuple(relators))
