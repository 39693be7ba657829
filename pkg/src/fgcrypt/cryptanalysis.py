"""Desk-scale eavesdropper toolkit: Cayley-ball enumeration, the K-subset
Nielsen-reduction attack, primitive-element bound estimators and exact attack
cost arithmetic.

The attack is intentionally exponential; hard caps keep it demonstrative.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, Optional

from .errors import CapExceededError, PreconditionError
from .nielsen import (
    GeneratingTuple,
    canonical_minimal_basis,
    nielsen_reduce,
)
from .words import Alphabet, Word

__all__ = [
    "AttackConfig",
    "AttackReport",
    "CostEstimate",
    "ball_size",
    "enumerate_ball",
    "subset_attack",
    "primitive_lower_bound_rank2",
    "primitive_growth_rates",
    "attack_cost_estimate",
    "format_report",
]

BALL_CAP = 100_000
SUBSET_CAP = 10_000_000


@dataclass(frozen=True)
class AttackConfig:
    ball_radius: int          # L
    target_rank: int          # N
    subset_size: int          # K >= N
    max_subsets: Optional[int] = None

    def __post_init__(self):
        if self.ball_radius < 1:
            raise PreconditionError("ball radius must be >= 1")
        if self.target_rank < 2:
            raise PreconditionError("target rank must be >= 2")
        if self.subset_size < self.target_rank:
            raise PreconditionError("subset size must be >= target rank")


@dataclass(frozen=True)
class AttackReport:
    candidates: tuple[GeneratingTuple, ...]
    subsets_examined: int
    elapsed: float
    complete: bool
    hit_index: Optional[int] = None


@dataclass(frozen=True)
class CostEstimate:
    ball: int
    subsets: int
    per_subset_cost: int  # quadratic proxy in the length bound


def ball_size(q: int, radius: int) -> int:
    """Number of non-identity reduced words of length <= radius:
    sum over k of 2q (2q-1)^(k-1)."""
    return sum(2 * q * (2 * q - 1) ** (k - 1) for k in range(1, radius + 1))


def enumerate_ball(alphabet: Alphabet, radius: int,
                   cap: int = BALL_CAP) -> list[Word]:
    """All non-identity reduced words of length <= radius, sorted by the word
    order.  Refuses (with the required cap) when the closed form exceeds it."""
    if radius < 1:
        raise PreconditionError("radius must be >= 1")
    q = alphabet.rank
    expected = ball_size(q, radius)
    if expected > cap:
        raise CapExceededError(
            f"ball has {expected} elements; cap is {cap} "
            f"(raise the cap to at least {expected} to enumerate)")
    out: list[Word] = []
    frontier: list[tuple[int, ...]] = [()]
    for _ in range(radius):
        nxt = []
        for seq in frontier:
            for i in range(1, q + 1):
                for s in (i, -i):
                    if seq and seq[-1] == -s:
                        continue
                    item = seq + (s,)
                    nxt.append(item)
                    out.append(Word._make(alphabet, item))
        frontier = nxt
    out.sort(key=Word.sort_key)
    return out


def _colex_subsets(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Index k-subsets of range(n) in colexicographic order."""
    if k == 0:
        yield ()
        return
    for top in range(k - 1, n):
        for rest in _colex_subsets(top, k - 1):
            yield rest + (top,)


def subset_attack(alphabet: Alphabet, cfg: AttackConfig,
                  oracle_known_basis: Optional[GeneratingTuple] = None
                  ) -> AttackReport:
    """Nielsen-reduce K-subsets of the ball and collect rank-N candidates.

    Subsets are visited in colex order over the sorted ball, so reports and
    hit indices are reproducible.  With a planted basis supplied, the report
    carries the 1-based count of subsets examined at the first hit."""
    started = time.perf_counter()
    ball = enumerate_ball(alphabet, cfg.ball_radius)
    limit = min(cfg.max_subsets or SUBSET_CAP, SUBSET_CAP)
    target = None
    if oracle_known_basis is not None:
        target = canonical_minimal_basis(oracle_known_basis).elements
    candidates: dict[tuple, GeneratingTuple] = {}
    examined = 0
    complete = True
    hit_index = None
    for subset in _colex_subsets(len(ball), cfg.subset_size):
        if examined >= limit:
            complete = False
            break
        examined += 1
        tup = GeneratingTuple(alphabet, tuple(ball[i] for i in subset))
        reduced, _ = nielsen_reduce(tup)
        if len(reduced) != cfg.target_rank:
            continue
        canon = canonical_minimal_basis(reduced)
        key = tuple(w.signed for w in canon)
        if key not in candidates:
            candidates[key] = canon
        if target is not None and hit_index is None and canon.elements == target:
            hit_index = examined
    return AttackReport(
        candidates=tuple(candidates.values()),
        subsets_examined=examined,
        elapsed=time.perf_counter() - started,
        complete=complete,
        hit_index=hit_index,
    )


def primitive_lower_bound_rank2(k: int) -> Fraction:
    """Exact lower bound for the number of primitive elements of length k in
    rank 2: 8 * 3^((k-3)/2) for odd k (8/3 at k=1), 4 * 3^((k-2)/2) for even."""
    if k < 1:
        raise PreconditionError("length must be >= 1")
    if k % 2:
        return Fraction(8, 3) * Fraction(3) ** ((k - 1) // 2)
    return Fraction(4) * Fraction(3) ** ((k - 2) // 2)


def primitive_growth_rates(q: int) -> tuple[int, int]:
    """Exponential growth bases (lower, upper) for primitive counts at rank
    q >= 3; the multiplicative constants are not pinned down."""
    if q < 3:
        raise PreconditionError("growth-rate pair applies to rank >= 3")
    return 2 * q - 3, 2 * q - 2


def attack_cost_estimate(cfg: AttackConfig, q: int) -> CostEstimate:
    """Pure arithmetic: ball size, exact subset count, per-subset cost proxy."""
    ball = ball_size(q, cfg.ball_radius)
    subsets = comb(ball, cfg.subset_size) if cfg.subset_size <= ball else 0
    return CostEstimate(ball=ball, subsets=subsets,
                        per_subset_cost=cfg.ball_radius ** 2)


def format_report(report: AttackReport) -> str:
    lines = [
        f"subsets_examined = {report.subsets_examined}",
        f"candidates = {len(report.candidates)}",
        f"hit_index = {report.hit_index if report.hit_index is not None else 'none'}",
        f"complete = {str(report.complete).lower()}",
    ]
    for cand in report.candidates:
        lines.append(str(cand))
    return "\n".join(lines)
