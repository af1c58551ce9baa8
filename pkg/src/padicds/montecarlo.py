"""Seeded Monte Carlo cross-check of exact Haar measures.

Generator contract: residue number ``c`` of a stream with key
``(p, P, seed)`` lives in block ``c // BLOCK``.  Each block is drawn from
``numpy.random.Generator(PCG64(SeedSequence(seed, spawn_key=(p, P, block))))``.
A residue mod ``p**P`` is assembled from base-``p`` digit chunks: the
largest ``j`` with ``p**j < 2**63`` digits are taken at a time as one
uniform integer in ``[0, p**j)`` (``Generator.integers``, which is
rejection sampled and therefore unbiased), least significant chunk first.
So the stream is a pure function of ``(p, P, seed, counter)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .padic_core import BallUnion, PrecisionError
from .padic_sets import SetKind, window_union
from .psi import PsiSpec

BLOCK = 4096
_INT63 = 2**63


def _chunk_digits(p: int) -> int:
    j = 1
    while p ** (j + 1) < _INT63:
        j += 1
    return j


def _block_residues(p: int, precision: int, seed: int, block: int) -> list[int] | np.ndarray:
    rng = np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(p, precision, block)))
    )
    if p**precision < _INT63:
        return rng.integers(0, p**precision, size=BLOCK, dtype=np.int64)
    j = _chunk_digits(p)
    out = [0] * BLOCK
    shift = 1
    left = precision
    while left > 0:
        d = min(j, left)
        chunk = rng.integers(0, p**d, size=BLOCK, dtype=np.int64).tolist()
        out = [acc + shift * c for acc, c in zip(out, chunk)]
        shift *= p**d
        left -= d
    return out


class SampleStream:
    """Addressable stream of uniform residues mod ``p**precision``."""

    def __init__(self, p: int, precision: int, seed: int, counter: int = 0):
        if precision < 1:
            raise ValueError("precision must be a positive integer")
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.p = p
        self.precision = precision
        self.seed = seed
        self.counter = counter

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    def peek(self, counter: int, count: int):
        """Residues at positions ``[counter, counter + count)``, without advancing."""
        if count < 0:
            raise ValueError("count must be non-negative")
        if count == 0:
            return np.zeros(0, dtype=np.int64) if self.modulus < _INT63 else []
        first, last = counter // BLOCK, (counter + count - 1) // BLOCK
        parts = [_block_residues(self.p, self.precision, self.seed, b) for b in range(first, last + 1)]
        lo = counter - first * BLOCK
        if isinstance(parts[0], np.ndarray):
            return np.concatenate(parts)[lo : lo + count]
        flat = [x for part in parts for x in part]
        return flat[lo : lo + count]

    def draw(self, count: int):
        out = self.peek(self.counter, count)
        self.counter += count
        return out


def sample(stream: SampleStream, count: int):
    return stream.draw(count)


def member(x: int, precision: int, u: BallUnion) -> bool:
    return u.contains_residue(int(x), precision)


def member_mask(xs, precision: int, u: BallUnion) -> np.ndarray:
    """Vectorized :func:`member` over many residues mod ``p**precision``."""
    if precision < u.max_depth:
        raise PrecisionError(f"precision {precision} below deepest ball depth {u.max_depth}")
    p = u.p
    if isinstance(xs, np.ndarray):
        hit = np.zeros(len(xs), dtype=bool)
        by_depth: dict[int, list[int]] = {}
        for b in u.balls:
            by_depth.setdefault(b.depth, []).append(b.residue)
        for depth, residues in by_depth.items():
            hit |= np.isin(xs % p**depth, residues)
        return hit
    return np.array([u.contains_residue(x, precision) for x in xs], dtype=bool)


@dataclass(frozen=True)
class Estimate:
    hits: int
    trials: int

    @property
    def point(self) -> Fraction:
        return Fraction(self.hits, self.trials)

    @property
    def stderr(self) -> float:
        q = self.hits / self.trials
        return math.sqrt(q * (1 - q) / self.trials)

    def merge(self, other: "Estimate") -> "Estimate":
        return Estimate(self.hits + other.hits, self.trials + other.trials)

    def within(self, exact, k: float = 5.0) -> bool:
        """``|point - exact| <= k * stderr``, compared exactly when stderr is 0."""
        diff = abs(self.point - Fraction(exact))
        if self.stderr == 0:
            return diff == 0
        return float(diff) <= k * self.stderr


def estimate_union(u: BallUnion, trials: int, seed: int, counter: int = 0) -> Estimate:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    precision = max(1, u.max_depth)
    xs = SampleStream(u.p, precision, seed, counter).draw(trials)
    return Estimate(int(member_mask(xs, precision, u).sum()), trials)


def estimate_measure(
    p: int, psi: PsiSpec, kind: SetKind, m: int, N: int, trials: int, seed: int
) -> Estimate:
    return estimate_union(window_union(p, psi, kind, m, N), trials, seed)
