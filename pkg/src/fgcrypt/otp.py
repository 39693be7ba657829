"""One-time-pad style cipher: each plaintext symbol is enciphered by a fresh
automorphism applied to its private subgroup-basis word.

Unit boundaries are preserved end to end (no cancellation ever happens
between adjacent units), so the receiver recovers each symbol independently,
either through inverse automorphisms or by table lookup.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .automorphisms import FactoredAutomorphism
from .errors import DecryptionError, EncodingError, PreconditionError, WordSyntaxError
from .keystream import (
    AutFamily,
    LcgParams,
    Prg,
    derive_automorphism,
    format_lcg_lines,
    has_max_period,
    keystream,
    parse_kv_lines,
)
from .nielsen import (
    GeneratingTuple,
    canonical_minimal_basis,
    is_nielsen_reduced,
    nielsen_reduce,
)
from .words import Alphabet, Word, format_word, parse_word

__all__ = [
    "CipherPublicParams",
    "CipherPrivateKey",
    "Ciphertext",
    "keygen",
    "encrypt",
    "decrypt",
    "build_cipher_table",
    "decrypt_with_table",
    "format_ciphertext",
    "parse_ciphertext",
    "write_key_file",
    "parse_key_file",
]

log = logging.getLogger(__name__)

UNIT_SEPARATOR = " | "


@dataclass(frozen=True)
class CipherPublicParams:
    alphabet: Alphabet
    plaintext_alphabet: tuple[str, ...]
    fam: AutFamily
    lcg: LcgParams

    def __post_init__(self):
        if isinstance(self.plaintext_alphabet, list):
            object.__setattr__(self, "plaintext_alphabet",
                               tuple(self.plaintext_alphabet))
        if self.alphabet.rank < 2:
            raise PreconditionError("protocol requires rank >= 2")
        if len(self.plaintext_alphabet) < 2:
            raise PreconditionError("plaintext alphabet needs >= 2 symbols")
        if len(set(self.plaintext_alphabet)) != len(self.plaintext_alphabet):
            raise PreconditionError("plaintext symbols must be distinct")
        if not has_max_period(self.lcg):
            raise PreconditionError("the congruence generator must have "
                                    "maximal period")
        if self.fam.alphabet.names != self.alphabet.names:
            raise PreconditionError("family alphabet differs")
        if self.fam.m != self.lcg.m:
            raise PreconditionError("family and generator moduli differ")

    @property
    def n_symbols(self) -> int:
        return len(self.plaintext_alphabet)


@dataclass(frozen=True)
class CipherPrivateKey:
    """The subgroup basis (position k encodes symbol k) and the starting
    class alpha.  Any Nielsen reduced identity-free basis is accepted;
    :func:`keygen` always produces the canonical form."""

    basis: GeneratingTuple
    alpha: int

    def validate(self, params: CipherPublicParams) -> None:
        if len(self.basis) != params.n_symbols:
            raise PreconditionError("basis size must match the plaintext alphabet")
        if any(w.is_identity() for w in self.basis):
            raise PreconditionError("basis entries must be non-identity")
        if not is_nielsen_reduced(self.basis):
            raise PreconditionError("key basis must be Nielsen reduced")
        if not 0 <= self.alpha < params.lcg.modulus:
            raise PreconditionError("alpha out of range")


@dataclass(frozen=True)
class Ciphertext:
    units: tuple[Word, ...]

    def __post_init__(self):
        if isinstance(self.units, list):
            object.__setattr__(self, "units", tuple(self.units))

    def __len__(self):
        return len(self.units)

    def total_length(self) -> int:
        """The eavesdropper's observable L = sum of unit lengths."""
        return sum(len(u) for u in self.units)

    def __str__(self):
        return format_ciphertext(self)


def _random_word(prg: Prg, alphabet: Alphabet, length: int) -> Word:
    q = alphabet.rank
    letters: list[int] = []
    for _ in range(length):
        if not letters:
            pick = prg.next() % (2 * q)
            s = pick // 2 + 1
            letters.append(s if pick % 2 == 0 else -s)
        else:
            # anything but the inverse of the previous letter
            options = [x for i in range(1, q + 1) for x in (i, -i)
                       if x != -letters[-1]]
            letters.append(options[prg.next() % len(options)])
    return Word(alphabet, letters)


def keygen(params: CipherPublicParams, prg: Prg,
           min_len: int = 2, max_len: int = 8,
           max_attempts: int = 10000) -> CipherPrivateKey:
    """Sample a canonical Nielsen reduced basis of rank N plus a start class."""
    n = params.n_symbols
    for _ in range(max_attempts):
        words = []
        for _ in range(n):
            length = min_len + prg.next() % (max_len - min_len + 1)
            words.append(_random_word(prg, params.alphabet, length))
        reduced, _ = nielsen_reduce(GeneratingTuple(params.alphabet, tuple(words)))
        if len(reduced) != n or not is_nielsen_reduced(reduced):
            continue
        basis = canonical_minimal_basis(reduced)
        alpha = prg.next() % params.lcg.modulus
        key = CipherPrivateKey(basis, alpha)
        key.validate(params)
        return key
    raise RuntimeError("could not sample a full-rank basis")  # pragma: no cover


def _filter_symbols(params: CipherPublicParams,
                    plaintext: Union[str, Sequence[str]]) -> list[str]:
    known = set(params.plaintext_alphabet)
    out = []
    for pos, sym in enumerate(plaintext):
        if sym in known:
            out.append(sym)
        elif isinstance(sym, str) and sym.isspace():
            continue  # whitespace is stripped, mirroring spaced demo messages
        else:
            raise EncodingError(str(sym), pos)
    return out


def _schedule(params: CipherPublicParams, key: CipherPrivateKey, z: int,
              automorphisms: Optional[Sequence[FactoredAutomorphism]]):
    indices = keystream(params.lcg, key.alpha, z)
    if automorphisms is not None:
        if len(automorphisms) < z:
            raise PreconditionError(
                f"need {z} override automorphisms, got {len(automorphisms)}")
        auts = list(automorphisms[:z])
    else:
        auts = [derive_automorphism(params.fam, x) for x in indices]
    return indices, auts


def encrypt(params: CipherPublicParams, key: CipherPrivateKey,
            plaintext: Union[str, Sequence[str]],
            automorphisms: Optional[Sequence[FactoredAutomorphism]] = None
            ) -> Ciphertext:
    """Encrypt symbol s_i with the i-th scheduled automorphism.

    ``automorphisms`` overrides the derived family (reproduction mode for
    externally specified schedules)."""
    key.validate(params)
    symbols = _filter_symbols(params, plaintext)
    if not symbols:
        return Ciphertext(())
    _, auts = _schedule(params, key, len(symbols), automorphisms)
    units = []
    for sym, f in zip(symbols, auts):
        t = params.plaintext_alphabet.index(sym)
        units.append(f.apply(key.basis[t]))
    return Ciphertext(tuple(units))


def decrypt(params: CipherPublicParams, key: CipherPrivateKey, c: Ciphertext,
            automorphisms: Optional[Sequence[FactoredAutomorphism]] = None
            ) -> list[str]:
    """Invert each scheduled automorphism and look the word up in the basis.

    Aborts with the failing unit index on any mismatch; no partial plaintext
    is ever returned."""
    key.validate(params)
    if not c.units:
        return []
    _, auts = _schedule(params, key, len(c.units), automorphisms)
    out = []
    for i, (unit, f) in enumerate(zip(c.units, auts)):
        w = f.inverse().apply(unit)
        try:
            t = key.basis.elements.index(w)
        except ValueError:
            raise DecryptionError(
                f"unit {i} does not decrypt to a key word", unit_index=i
            ) from None
        out.append(params.plaintext_alphabet[t])
    return out


def build_cipher_table(params: CipherPublicParams, key: CipherPrivateKey,
                       indices: Sequence[int],
                       automorphisms: Optional[Sequence[FactoredAutomorphism]] = None
                       ) -> list[list[Word]]:
    """The N x z table of automorphism images of the key words; row k lists
    f_{x_i}(u_k) across the scheduled automorphisms."""
    if automorphisms is not None:
        auts = list(automorphisms[:len(indices)])
    else:
        auts = [derive_automorphism(params.fam, x) for x in indices]
    return [[f.apply(u) for f in auts] for u in key.basis]


def decrypt_with_table(params: CipherPublicParams, key: CipherPrivateKey,
                       c: Ciphertext,
                       automorphisms: Optional[Sequence[FactoredAutomorphism]] = None
                       ) -> list[str]:
    """Table-lookup decryption; must agree with :func:`decrypt`."""
    key.validate(params)
    if not c.units:
        return []
    indices, auts = _schedule(params, key, len(c.units), automorphisms)
    table = build_cipher_table(params, key, indices, auts)
    out = []
    for i, unit in enumerate(c.units):
        for k in range(params.n_symbols):
            if table[k][i] == unit:
                out.append(params.plaintext_alphabet[k])
                break
        else:
            raise DecryptionError(
                f"unit {i} not found in the cipher table", unit_index=i)
    return out


def check_polyalphabetic(c: Ciphertext, indices: Sequence[int],
                         positions: tuple[int, int]) -> bool:
    """For two positions carrying the same symbol: their schedule indices
    must differ (guaranteed within a maximal period); image collisions are
    logged, not fatal.  Returns True when the units differ."""
    i, j = positions
    if indices[i] == indices[j]:
        raise PreconditionError("schedule indices coincide; period exhausted?")
    if c.units[i] == c.units[j]:
        log.warning("image collision: units %d and %d coincide", i, j)
        return False
    return True


# ---------------------------------------------------------------------------
# File formats.
# ---------------------------------------------------------------------------

def format_ciphertext(c: Ciphertext) -> str:
    return UNIT_SEPARATOR.join(format_word(u) for u in c.units)


def parse_ciphertext(text: str, alphabet: Alphabet) -> Ciphertext:
    text = text.strip()
    if not text:
        return Ciphertext(())
    units = tuple(parse_word(part.strip(), alphabet)
                  for part in text.split("|"))
    return Ciphertext(units)


def write_key_file(params: CipherPublicParams, key: CipherPrivateKey) -> str:
    lines = [
        f"alphabet = {' '.join(params.alphabet.names)}",
        f"N = {params.n_symbols}",
        f"plaintext_alphabet = {' '.join(params.plaintext_alphabet)}",
        f"alpha = {key.alpha}",
        format_lcg_lines(params.lcg, params.fam.master_seed),
        "begin tuple",
    ]
    lines.extend(format_word(w) for w in key.basis)
    lines.append("end tuple")
    return "\n".join(lines) + "\n"


def parse_key_file(text: str) -> tuple[CipherPublicParams, CipherPrivateKey]:
    kv = parse_kv_lines(text)
    required = ("alphabet", "N", "plaintext_alphabet", "alpha",
                "m", "beta", "gamma", "seed")
    for field_name in required:
        if field_name not in kv:
            raise WordSyntaxError(f"key file is missing '{field_name} = ...'")
    alphabet = Alphabet(tuple(kv["alphabet"].split()))
    lcg = LcgParams(int(kv["m"]), int(kv["beta"]), int(kv["gamma"]))
    fam = AutFamily(int(kv["seed"], 16), alphabet, lcg.m)
    params = CipherPublicParams(alphabet, tuple(kv["plaintext_alphabet"].split()),
                                fam, lcg)
    lines = [ln.strip() for ln in text.splitlines()]
    try:
        start = lines.index("begin tuple")
        end = lines.index("end tuple")
    except ValueError:
        raise WordSyntaxError("key file is missing the tuple block") from None
    words = tuple(parse_word(ln, alphabet)
                  for ln in lines[start + 1:end] if ln)
    key = CipherPrivateKey(GeneratingTuple(alphabet, words), int(kv["alpha"]))
    if int(kv["N"]) != len(words):
        raise WordSyntaxError("N does not match the tuple size")
    key.validate(params)
    return params, key
