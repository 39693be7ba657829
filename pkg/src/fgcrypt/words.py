"""Freely reduced words over a finite generating alphabet.

A word is stored as a tuple of nonzero signed generator indices: ``+i``
stands for the i-th generator, ``-i`` for its inverse (1-based).  Every
``Word`` is freely reduced by construction; unreduced letter sequences only
exist transiently inside :func:`free_reduce`.  Words and alphabets are
immutable, so all operations here are pure and thread-safe.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

from .errors import AlphabetMismatchError, InvalidLetterError, WordSyntaxError

__all__ = [
    "Alphabet",
    "Letter",
    "Word",
    "free_reduce",
    "concat",
    "invert",
    "compare_words",
    "parse_word",
    "format_word",
    "generators",
]


@dataclass(frozen=True)
class Alphabet:
    """An ordered finite set of generator names; rank q = len(names)."""

    names: tuple[str, ...]

    def __post_init__(self):
        if isinstance(self.names, list):  # tolerate list input
            object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) < 1:
            raise ValueError("alphabet needs at least one generator")
        seen = set()
        for name in self.names:
            if not name:
                raise ValueError("generator names must be non-empty")
            if any(ch.isspace() for ch in name) or "^" in name or "|" in name:
                raise ValueError(f"invalid generator name {name!r}")
            if name.isdigit():
                raise ValueError(f"generator name {name!r} collides with exponents")
            if name in seen:
                raise ValueError(f"duplicate generator name {name!r}")
            seen.add(name)

    @property
    def rank(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        """1-based index of a generator name."""
        try:
            return self.names.index(name) + 1
        except ValueError:
            raise InvalidLetterError(f"unknown generator {name!r}") from None

    def generator(self, i: int) -> "Word":
        """The length-1 word x_i (1-based)."""
        if not 1 <= i <= self.rank:
            raise InvalidLetterError(f"generator index {i} out of range 1..{self.rank}")
        return Word._make(self, (i,))

    def identity(self) -> "Word":
        return Word._make(self, ())

    def parse(self, text: str) -> "Word":
        return parse_word(text, self)

    def __str__(self):
        return " ".join(self.names)


@dataclass(frozen=True)
class Letter:
    """A single generator symbol x_i (sign +1) or x_i^-1 (sign -1)."""

    index: int
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InvalidLetterError(f"letter sign must be +1 or -1, got {self.sign}")
        if self.index < 1:
            raise InvalidLetterError(f"letter index must be >= 1, got {self.index}")

    @classmethod
    def from_signed(cls, s: int) -> "Letter":
        return cls(abs(s), 1 if s > 0 else -1)

    def to_signed(self) -> int:
        return self.index * self.sign


LetterLike = Union[Letter, int]


def _as_signed(letter: LetterLike) -> int:
    if isinstance(letter, Letter):
        return letter.to_signed()
    if isinstance(letter, int):
        if letter == 0:
            raise InvalidLetterError("0 is not a letter")
        return letter
    raise InvalidLetterError(f"not a letter: {letter!r}")


class Word:
    """A freely reduced word.  Compare with ``<`` etc. for the ShortLex-style
    total order (length first, then x1 < x1^-1 < x2 < x2^-1 < ...)."""

    __slots__ = ("alphabet", "signed")

    alphabet: Alphabet
    signed: tuple[int, ...]

    def __init__(self, alphabet: Alphabet, letters: Iterable[LetterLike] = ()):
        object.__setattr__(self, "alphabet", alphabet)
        reduced = _reduce_signed(_as_signed(l) for l in letters)
        _check_range(reduced, alphabet)
        object.__setattr__(self, "signed", reduced)

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def _make(cls, alphabet: Alphabet, signed: tuple[int, ...]) -> "Word":
        """Internal: wrap an already-reduced, already-validated tuple."""
        w = object.__new__(cls)
        object.__setattr__(w, "alphabet", alphabet)
        object.__setattr__(w, "signed", signed)
        return w

    @property
    def letters(self) -> tuple[Letter, ...]:
        return tuple(Letter.from_signed(s) for s in self.signed)

    def __len__(self) -> int:
        return len(self.signed)

    def is_identity(self) -> bool:
        return not self.signed

    def inverse(self) -> "Word":
        return Word._make(self.alphabet, tuple(-s for s in reversed(self.signed)))

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        out = Word._make(self.alphabet, ())
        for _ in range(n):
            out = concat(out, self)
        return out

    def sort_key(self) -> tuple:
        return (len(self.signed), _rank_tuple(self.signed))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Word)
                and self.alphabet.names == other.alphabet.names
                and self.signed == other.signed)

    def __hash__(self) -> int:
        return hash((self.alphabet.names, self.signed))

    def __lt__(self, other: "Word") -> bool:
        return compare_words(self, other) < 0

    def __le__(self, other: "Word") -> bool:
        return compare_words(self, other) <= 0

    def __gt__(self, other: "Word") -> bool:
        return compare_words(self, other) > 0

    def __ge__(self, other: "Word") -> bool:
        return compare_words(self, other) >= 0

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


def _reduce_signed(seq: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for s in seq:
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def _check_range(signed: Sequence[int], alphabet: Alphabet) -> None:
    q = alphabet.rank
    for s in signed:
        if not 1 <= abs(s) <= q:
            raise InvalidLetterError(
                f"letter index {abs(s)} out of range 1..{q}")


def _rank_tuple(signed: Sequence[int]) -> tuple[int, ...]:
    # x1 < x1^-1 < x2 < x2^-1 < ...
    return tuple(2 * (abs(s) - 1) + (0 if s > 0 else 1) for s in signed)


def _same_alphabet(u: Word, v: Word) -> None:
    if u.alphabet.names != v.alphabet.names:
        raise AlphabetMismatchError(
            f"alphabet mismatch: {u.alphabet} vs {v.alphabet}")


def free_reduce(alphabet: Alphabet, raw: Iterable[LetterLike]) -> Word:
    """Reduce a raw letter sequence to its unique freely reduced form."""
    return Word(alphabet, raw)


def concat(u: Word, v: Word) -> Word:
    """Freely reduced product uv."""
    _same_alphabet(u, v)
    left = list(u.signed)
    right = v.signed
    i = 0
    n = len(right)
    while left and i < n and left[-1] == -right[i]:
        left.pop()
        i += 1
    return Word._make(u.alphabet, tuple(left) + right[i:])


def invert(u: Word) -> Word:
    return u.inverse()


def compare_words(u: Word, v: Word) -> int:
    """Total order: shorter first, ties letter-by-letter; returns -1/0/+1."""
    _same_alphabet(u, v)
    ku, kv = u.sort_key(), v.sort_key()
    if ku < kv:
        return -1
    if ku > kv:
        return 1
    return 0


def generators(alphabet: Alphabet) -> tuple[Word, ...]:
    return tuple(alphabet.generator(i) for i in range(1, alphabet.rank + 1))


# ---------------------------------------------------------------------------
# Textual form.  Grammar:  word := "1" | unit (" " unit)* ;
#                          unit := name ("^" nonzero-integer)?
# Canonical output merges runs of a letter into one unit, single spaces.
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\S+")


def parse_word(text: str, alphabet: Alphabet) -> Word:
    tokens = list(_TOKEN.finditer(text))
    if not tokens:
        raise WordSyntaxError("empty word text; identity is spelled '1'")
    if len(tokens) == 1 and tokens[0].group() == "1":
        return Word._make(alphabet, ())
    signed: list[int] = []
    for tok in tokens:
        unit = tok.group()
        pos = tok.start()
        if unit == "1":
            raise WordSyntaxError("'1' cannot be mixed with other units", pos)
        name, sep, exp_text = unit.partition("^")
        try:
            idx = alphabet.index(name)
        except InvalidLetterError:
            raise WordSyntaxError(f"unknown generator {name!r}", pos) from None
        if sep:
            try:
                exp = int(exp_text)
            except ValueError:
                raise WordSyntaxError(f"bad exponent {exp_text!r}", pos) from None
            if exp == 0:
                raise WordSyntaxError("exponent must be nonzero", pos)
        else:
            exp = 1
        letter = idx if exp > 0 else -idx
        signed.extend([letter] * abs(exp))
    reduced = _reduce_signed(signed)
    return Word._make(alphabet, reduced)


def format_word(w: Word) -> str:
    if not w.signed:
        return "1"
    parts: list[str] = []
    run_letter = w.signed[0]
    run_len = 1
    for s in w.signed[1:]:
        if s == run_letter:
            run_len += 1
        else:
            parts.append(_format_run(w.alphabet, run_letter, run_len))
            run_letter, run_len = s, 1
    parts.append(_format_run(w.alphabet, run_letter, run_len))
    return " ".join(parts)


def _format_run(alphabet: Alphabet, letter: int, count: int) -> str:
    name = alphabet.names[abs(letter) - 1]
    exp = count if letter > 0 else -count
    if exp == 1:
        return name
    return f"{name}^{exp}"
