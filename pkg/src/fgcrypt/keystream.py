"""Modulus-2^m linear congruence generator, its maximal-period test, and the
seed-derived family of automorphisms indexed by residue classes.

The family with 2^m members is never materialized; member i is a pure
function of (master_seed, i) through a splitmix64-seeded draw, so both
parties derive identical automorphisms from the shared seed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automorphisms import FactoredAutomorphism, random_whitehead_automorphism
from .errors import PreconditionError, WordSyntaxError
from .words import Alphabet

__all__ = [
    "LcgParams",
    "Prg",
    "AutFamily",
    "lcg_next",
    "has_max_period",
    "keystream",
    "derive_automorphism",
    "splitmix64",
    "format_lcg_lines",
    "parse_lcg_lines",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (next_state, output), all mod 2^64."""
    state = (state + _GOLDEN) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


class Prg:
    """Deterministic 64-bit generator (splitmix64); single-owner iterator."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state, out = splitmix64(self.state)
        return out


@dataclass(frozen=True)
class LcgParams:
    """x -> beta*x + gamma on Z_(2^m)."""

    m: int
    beta: int
    gamma: int

    def __post_init__(self):
        if not 1 <= self.m <= 128:
            raise PreconditionError("modulus exponent m must be in 1..128")

    @property
    def modulus(self) -> int:
        return 1 << self.m


def lcg_next(p: LcgParams, x: int) -> int:
    return (p.beta * x + p.gamma) % p.modulus


def has_max_period(p: LcgParams) -> bool:
    """Period equals 2^m iff beta odd, beta = 1 mod 4 when m >= 2, gamma odd."""
    if p.beta % 2 == 0:
        return False
    if p.m >= 2 and p.beta % 4 != 1:
        return False
    return p.gamma % 2 == 1


def keystream(p: LcgParams, alpha: int, z: int) -> list[int]:
    """The index schedule x_1 = alpha, x_{k+1} = beta*x_k + gamma (z terms)."""
    if z < 1:
        raise PreconditionError("keystream length must be >= 1")
    x = alpha % p.modulus
    out = [x]
    for _ in range(z - 1):
        x = lcg_next(p, x)
        out.append(x)
    return out


def _rotl64(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


@dataclass(frozen=True)
class AutFamily:
    """Lazily derived family of 2^m pairwise-distinct automorphisms."""

    master_seed: int
    alphabet: Alphabet
    m: int

    def __post_init__(self):
        if not 1 <= self.m <= 128:
            raise PreconditionError("modulus exponent m must be in 1..128")

    def member(self, index: int) -> FactoredAutomorphism:
        return derive_automorphism(self, index)


def derive_automorphism(fam: AutFamily, index: int) -> FactoredAutomorphism:
    """Member ``index`` of the family; referentially transparent."""
    index %= 1 << fam.m
    low = index & _MASK64
    high = (index >> 64) & _MASK64
    _, seed = splitmix64((fam.master_seed ^ low ^ _rotl64(high, 32)) & _MASK64)
    return random_whitehead_automorphism(Prg(seed), fam.alphabet)


# --- textual form -----------------------------------------------------------

def format_lcg_lines(p: LcgParams, seed: int) -> str:
    return (f"m = {p.m}\nbeta = {p.beta}\ngamma = {p.gamma}\n"
            f"seed = {seed & _MASK64:016x}")


def parse_kv_lines(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#") or ln in ("begin tuple", "end tuple"):
            continue
        key, sep, value = ln.partition("=")
        if not sep:
            continue
        out[key.strip()] = value.strip()
    return out


def parse_lcg_lines(text: str) -> tuple[LcgParams, int]:
    kv = parse_kv_lines(text)
    try:
        params = LcgParams(int(kv["m"]), int(kv["beta"]), int(kv["gamma"]))
        seed = int(kv["seed"], 16)
    except KeyError as missing:
        raise WordSyntaxError(f"missing LCG line {missing}") from None
    except ValueError as bad:
        raise WordSyntaxError(f"bad LCG value: {bad}") from None
    return params, seed
