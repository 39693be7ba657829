"""ElGamal-style key exchange over automorphism orbits.

Alice publishes f^n(a); Bob hides his message behind f^t of her key and
ships f^t(a) alongside; commuting powers make the pad cancel exactly.  The
matrix variant sends the first component through a faithful SL(2,Q)
representation instead.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Union

from .automorphisms import FactoredAutomorphism, parse_automorphism
from .errors import DecryptionError, PreconditionError, WordSyntaxError
from .matrices import Mat2Q, RepSpec, mat_inv, mat_mul, matrix_to_word, word_to_matrix
from .words import Alphabet, Word, concat, format_word, parse_word

__all__ = [
    "PubkeyParams",
    "CipherPair",
    "alice_keygen",
    "bob_encrypt",
    "alice_decrypt",
    "bob_encrypt_matrix",
    "alice_decrypt_matrix",
    "write_pair_file",
    "parse_pair_file",
    "parse_params_file",
]

DEFAULT_MAX_EXPONENT = 32


@dataclass(frozen=True)
class PubkeyParams:
    """Public data: the base word a != 1 and an automorphism f intended to
    have infinite order.  Infinite order is not decidable from the factors;
    construction warns when f^k is the identity for some k <= 12."""

    alphabet: Alphabet
    a: Word
    f: FactoredAutomorphism
    rep: Optional[RepSpec] = None
    max_exponent: int = DEFAULT_MAX_EXPONENT

    def __post_init__(self):
        if self.a.is_identity():
            raise PreconditionError("base word must not be the identity")
        if self.f.is_identity():
            raise PreconditionError("automorphism must not be the identity")
        if self.a.alphabet.names != self.alphabet.names:
            raise PreconditionError("base word alphabet differs")
        if self.f.alphabet.names != self.alphabet.names:
            raise PreconditionError("automorphism alphabet differs")
        g = self.f
        for k in range(2, 13):
            g = g.compose(self.f)
            if g.is_identity():
                warnings.warn(f"automorphism has finite order {k}; "
                              "the scheme expects infinite order", stacklevel=2)
                break

    def _check_exponent(self, n: int) -> None:
        if n < 1:
            raise PreconditionError("exponent must be >= 1")
        if n > self.max_exponent:
            raise PreconditionError(
                f"exponent {n} exceeds the configured cap {self.max_exponent}")


@dataclass(frozen=True)
class CipherPair:
    c1: Union[Word, Mat2Q]
    c2: Word


def alice_keygen(params: PubkeyParams, n: int) -> Word:
    """Alice's public element c = f^n(a)."""
    params._check_exponent(n)
    return params.f.power(n).apply(params.a)


def bob_encrypt(params: PubkeyParams, c: Word, m: Word, t: int) -> CipherPair:
    """(m * f^t(c), f^t(a)); both components freely reduced."""
    params._check_exponent(t)
    ft = params.f.power(t)
    return CipherPair(concat(m, ft.apply(c)), ft.apply(params.a))


def alice_decrypt(params: PubkeyParams, n: int, pair: CipherPair) -> Word:
    """c1 * f^n(c2)^-1; a wrong n silently yields a wrong word."""
    params._check_exponent(n)
    if not isinstance(pair.c1, Word):
        raise PreconditionError("word-variant decrypt needs a word c1")
    return concat(pair.c1, params.f.power(n).apply(pair.c2).inverse())


def bob_encrypt_matrix(params: PubkeyParams, c: Word, m: Word, t: int) -> CipherPair:
    """Matrix variant: c1 = g(m) * g(f^t(c)) in SL(2,Q), c2 as before."""
    if params.rep is None:
        raise PreconditionError("matrix variant needs a representation")
    params._check_exponent(t)
    ft = params.f.power(t)
    c1 = mat_mul(word_to_matrix(params.rep, m),
                 word_to_matrix(params.rep, ft.apply(c)))
    return CipherPair(c1, ft.apply(params.a))


def alice_decrypt_matrix(params: PubkeyParams, n: int, pair: CipherPair,
                         decode_bound: int = 32) -> Word:
    """Recover g(m) = c1 * g(f^n(c2))^-1 exactly, then decode the word."""
    if params.rep is None:
        raise PreconditionError("matrix variant needs a representation")
    params._check_exponent(n)
    if not isinstance(pair.c1, Mat2Q):
        raise PreconditionError("matrix-variant decrypt needs a matrix c1")
    G = mat_mul(pair.c1,
                mat_inv(word_to_matrix(params.rep,
                                       params.f.power(n).apply(pair.c2))))
    m = matrix_to_word(params.rep, G, decode_bound)
    if m is None:
        raise DecryptionError(
            f"no word of length <= {decode_bound} matches the recovered matrix")
    return m


# ---------------------------------------------------------------------------
# File formats (CLI exchange).
# ---------------------------------------------------------------------------

def write_pair_file(pair: CipherPair) -> str:
    from .matrices import format_matrix
    if isinstance(pair.c1, Mat2Q):
        c1 = format_matrix(pair.c1)
    else:
        c1 = format_word(pair.c1)
    return f"c1 = {c1}\nc2 = {format_word(pair.c2)}\n"


def parse_pair_file(text: str, alphabet: Alphabet, matrix: bool = False) -> CipherPair:
    from .keystream import parse_kv_lines
    from .matrices import parse_matrix
    kv = parse_kv_lines(text)
    if "c1" not in kv or "c2" not in kv:
        raise WordSyntaxError("pair file needs 'c1 = ...' and 'c2 = ...'")
    c1 = parse_matrix(kv["c1"]) if matrix else parse_word(kv["c1"], alphabet)
    return CipherPair(c1, parse_word(kv["c2"], alphabet))


def parse_params_file(text: str, aut_text: str, rep: Optional[RepSpec] = None,
                      max_exponent: int = DEFAULT_MAX_EXPONENT) -> PubkeyParams:
    """Assemble parameters from a params file plus the referenced
    automorphism file's text (the caller resolves the path)."""
    from .keystream import parse_kv_lines
    kv = parse_kv_lines(text)
    for field_name in ("alphabet", "a"):
        if field_name not in kv:
            raise WordSyntaxError(f"params file is missing '{field_name} = ...'")
    alphabet = Alphabet(tuple(kv["alphabet"].split()))
    a = parse_word(kv["a"], alphabet)
    f = parse_automorphism(aut_text, alphabet)
    return PubkeyParams(alphabet, a, f, rep=rep, max_exponent=max_exponent)
