"""The approximation sets ``A_n^p(psi)``, ``B_n^p(psi)`` and their windows.

``A_n`` is the union of balls around the reduced fractions ``a/n`` with
``|a| <= n``; ``B_n`` adds the balls around the reciprocals ``n/a``.  Both
use the ball radius ``psi(n)/n`` snapped down to a power of ``p``.
A limsup is only ever approximated by unions over finite windows
``[m, N]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Literal, Sequence

from .padic_core import BallUnion, annulus, ball_pair, snap_radius
from .psi import PsiSpec

SetKind = Literal["A", "B"]


class WindowError(ValueError):
    pass


def _numerators(n: int):
    # a = 0 only survives the gcd test for n == 1
    return [a for a in range(-n, n + 1) if gcd(a, n) == 1]


def _collect(p: int, n: int, psi: PsiSpec, reciprocal: bool) -> list | str:
    """Ball pairs of ``A_n`` (and of the reciprocal family when asked).

    Returns the string ``"all"`` as soon as one ball is all of Z_p.
    """
    value = psi(n)
    if value == 0:
        return []
    e = snap_radius(Fraction(value) / n, p)
    pairs = set()
    for a in _numerators(n):
        got = ball_pair(a, n, e, p)
        if got == "all":
            return "all"
        if got is not None:
            pairs.add(got)
        if reciprocal and a != 0:
            got = ball_pair(n, a, e, p)
            if got == "all":
                return "all"
            if got is not None:
                pairs.add(got)
    return pairs


def _as_union(p: int, pairs) -> BallUnion:
    if pairs == "all":
        return BallUnion.whole(p)
    return BallUnion._from_pairs(p, pairs)


def build_A(p: int, n: int, psi: PsiSpec) -> BallUnion:
    if n < 1:
        raise WindowError(f"n must be positive, got {n}")
    return _as_union(p, _collect(p, n, psi, reciprocal=False))


def build_B(p: int, n: int, psi: PsiSpec) -> BallUnion:
    if n < 1:
        raise WindowError(f"n must be positive, got {n}")
    return _as_union(p, _collect(p, n, psi, reciprocal=True))


def build(p: int, n: int, psi: PsiSpec, kind: SetKind) -> BallUnion:
    if kind == "A":
        return build_A(p, n, psi)
    if kind == "B":
        return build_B(p, n, psi)
    raise WindowError(f"set kind must be 'A' or 'B', got {kind!r}")


def measure_A(p: int, n: int, psi: PsiSpec) -> Fraction:
    return build_A(p, n, psi).measure()


def measure_B(p: int, n: int, psi: PsiSpec) -> Fraction:
    return build_B(p, n, psi).measure()


def window_union(p: int, psi: PsiSpec, kind: SetKind, m: int, N: int) -> BallUnion:
    """Canonical union of the sets for ``n`` in ``[m, N]``."""
    if m < 1 or m > N:
        raise WindowError(f"need 1 <= m <= N, got m={m}, N={N}")
    if kind not in ("A", "B"):
        raise WindowError(f"set kind must be 'A' or 'B', got {kind!r}")
    pairs: set = set()
    for n in range(m, N + 1):
        got = _collect(p, n, psi, reciprocal=kind == "B")
        if got == "all":
            return BallUnion.whole(p)
        pairs.update(got)
    return BallUnion._from_pairs(p, pairs)


@dataclass(frozen=True)
class WindowRow:
    start: int
    end: int
    measure: Fraction
    union: BallUnion


@dataclass(frozen=True)
class WindowReport:
    p: int
    kind: SetKind
    psi: PsiSpec
    rows: tuple[WindowRow, ...]

    @property
    def stabilized(self) -> bool:
        """All rows carry the same set."""
        return len({row.union for row in self.rows}) <= 1


def limsup_ladder(p: int, psi: PsiSpec, kind: SetKind, N: int, ladder: Sequence[int]) -> WindowReport:
    """Union over ``[m, N]`` for each ladder start ``m``.

    Per-``n`` sets are built once and suffix unions are accumulated from
    ``N`` downwards, so the ladder costs one pass over ``[min(ladder), N]``.
    """
    if not ladder:
        raise WindowError("ladder must be non-empty")
    for m in ladder:
        if m < 1 or m > N:
            raise WindowError(f"ladder start {m} outside [1, {N}]")
    if kind not in ("A", "B"):
        raise WindowError(f"set kind must be 'A' or 'B', got {kind!r}")
    starts = sorted(set(ladder), reverse=True)
    suffix: dict[int, BallUnion] = {}
    pairs: set = set()
    whole = False
    n = N
    for m in starts:
        while n >= m:
            if not whole:
                got = _collect(p, n, psi, reciprocal=kind == "B")
                if got == "all":
                    whole = True
                else:
                    pairs.update(got)
            n -= 1
        suffix[m] = BallUnion.whole(p) if whole else BallUnion._from_pairs(p, pairs)
    rows = tuple(WindowRow(m, N, suffix[m].measure(), suffix[m]) for m in ladder)
    return WindowReport(p, kind, psi, rows)


def predicted_spectrum_set(p: int, x: Sequence[int]) -> BallUnion:
    """Union of the annuli ``p**k Z_p \\ p**(k+1) Z_p`` over ``k`` with ``x_k = 1``.

    ``x[0]`` is the bit for ``k = 1``.
    """
    out = BallUnion.empty(p)
    for i, bit in enumerate(x):
        if bit:
            out = out | annulus(p, i + 1)
    return out


def predicted_spectrum_measure(p: int, x: Sequence[int]) -> Fraction:
    return sum(
        (Fraction(p - 1, p ** (i + 2)) for i, bit in enumerate(x) if bit), Fraction(0)
    )
