"""Real approximation sets ``A_n^inf(psi)`` as exact interval unions.

``A_n^inf`` is the union of ``[a/n - psi(n)/n, a/n + psi(n)/n]`` over
``1 <= a <= n`` coprime to ``n``, clipped to ``[0, 1]``.  With that radius
the Lebesgue measure is exactly ``(2 - [n == 1]) phi(n) psi(n) / n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable

from .arithmetic import euler_phi, pv_rhs
from .psi import PsiSpec

HALF = Fraction(1, 2)


class RealSetError(ValueError):
    pass


class UndefinedStatisticError(ArithmeticError):
    pass


class NotFoundError(ArithmeticError):
    pass


@dataclass(frozen=True)
class IntervalUnion:
    """Sorted closed intervals in [0, 1] with disjoint interiors."""

    intervals: tuple[tuple[Fraction, Fraction], ...] = ()

    @classmethod
    def from_intervals(cls, intervals: Iterable[tuple]) -> "IntervalUnion":
        items = sorted((Fraction(lo), Fraction(hi)) for lo, hi in intervals)
        merged: list[list[Fraction]] = []
        for lo, hi in items:
            if lo > hi:
                raise RealSetError(f"empty interval [{lo}, {hi}]")
            if lo < 0 or hi > 1:
                raise RealSetError(f"interval [{lo}, {hi}] leaves [0, 1]")
            if merged and lo <= merged[-1][1]:
                if hi > merged[-1][1]:
                    merged[-1][1] = hi
            else:
                merged.append([lo, hi])
        return cls(tuple((lo, hi) for lo, hi in merged))

    def lam(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.intervals), Fraction(0))

    def __len__(self):
        return len(self.intervals)


def lam(u: IntervalUnion) -> Fraction:
    """Lebesgue measure of ``u``."""
    return u.lam()


def _integer_endpoints(n: int, value: Fraction) -> tuple[list[tuple[int, int]], int]:
    """Intervals of ``A_n^inf`` as integer pairs over the common denominator."""
    u, v = value.numerator, value.denominator
    den = n * v
    out = []
    for a in range(1, n + 1):
        if gcd(a, n) != 1:
            continue
        lo = max(a * v - u, 0)
        hi = min(a * v + u, den)
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(hi, out[-1][1]))
        else:
            out.append((lo, hi))
    return out, den


def _check_regime(n: int, value: Fraction) -> None:
    if value > HALF:
        raise RealSetError(f"psi({n}) = {value} exceeds 1/2")


def build_A_inf(n: int, psi: PsiSpec) -> IntervalUnion:
    if n < 1:
        raise RealSetError(f"n must be positive, got {n}")
    value = Fraction(psi(n))
    _check_regime(n, value)
    if value == 0:
        return IntervalUnion()
    pairs, den = _integer_endpoints(n, value)
    return IntervalUnion(tuple((Fraction(lo, den), Fraction(hi, den)) for lo, hi in pairs))


def _overlap(xs: list[tuple[int, int]], ys: list[tuple[int, int]]) -> int:
    i = j = 0
    total = 0
    while i < len(xs) and j < len(ys):
        lo = max(xs[i][0], ys[j][0])
        hi = min(xs[i][1], ys[j][1])
        if hi > lo:
            total += hi - lo
        if xs[i][1] < ys[j][1]:
            i += 1
        else:
            j += 1
    return total


def intersection_lambda(u: IntervalUnion, w: IntervalUnion) -> Fraction:
    """Exact measure of ``u & w`` by a merge sweep over common-denominator integers."""
    if not u.intervals or not w.intervals:
        return Fraction(0)
    den = 1
    for lo, hi in u.intervals + w.intervals:
        den = lcm(den, lo.denominator, hi.denominator)

    def scaled(iv):
        return [(lo.numerator * (den // lo.denominator), hi.numerator * (den // hi.denominator))
                for lo, hi in iv]

    return Fraction(_overlap(scaled(u.intervals), scaled(w.intervals)), den)


class RealSets:
    """Cached ``A_n^inf`` builder for one ``psi``; integer forms drive the sweeps."""

    def __init__(self, psi: PsiSpec):
        self.psi = psi
        self._int_forms: dict[int, tuple[list[tuple[int, int]], int]] = {}

    def _int_form(self, n: int):
        got = self._int_forms.get(n)
        if got is None:
            value = Fraction(self.psi(n))
            _check_regime(n, value)
            got = ([], 1) if value == 0 else _integer_endpoints(n, value)
            self._int_forms[n] = got
        return got

    def lam(self, n: int) -> Fraction:
        pairs, den = self._int_form(n)
        return Fraction(sum(hi - lo for lo, hi in pairs), den)

    def intersect_measure(self, n: int, m: int) -> Fraction:
        xs, dx = self._int_form(n)
        ys, dy = self._int_form(m)
        if not xs or not ys:
            return Fraction(0)
        den = lcm(dx, dy)
        fx, fy = den // dx, den // dy
        return Fraction(
            _overlap([(a * fx, b * fx) for a, b in xs], [(a * fy, b * fy) for a, b in ys]),
            den,
        )


def intersect_measure(n: int, m: int, psi: PsiSpec) -> Fraction:
    return RealSets(psi).intersect_measure(n, m)


def qia_statistic(psi: PsiSpec, N: int, sets: RealSets | None = None) -> Fraction:
    """``(sum_n lam(A_n))**2 / sum_{n,m} lam(A_n & A_m)`` over ``n, m <= N``."""
    sets = sets or RealSets(psi)
    lams = [sets.lam(n) for n in range(1, N + 1)]
    total = sum(lams, Fraction(0))
    if total == 0:
        raise UndefinedStatisticError(f"every A_n^inf with n <= {N} is empty")
    support = [n for n, v in zip(range(1, N + 1), lams) if v]
    diagonal = total
    off = Fraction(0)
    for i, n in enumerate(support):
        for m in support[:i]:
            off += sets.intersect_measure(n, m)
    return total * total / (diagonal + 2 * off)


def series_term(psi: PsiSpec, n: int) -> Fraction:
    return euler_phi(n) * Fraction(psi(n)) / n


def find_NK(psi: PsiSpec, K: int, cap: int) -> int:
    """Least ``N >= 1`` with ``sum_{n <= N} phi(n) psi(n)/n >= K``."""
    partial = Fraction(0)
    for N in range(1, cap + 1):
        term = series_term(psi, N)
        if term > HALF:
            raise RealSetError(f"psi({N}) exceeds 1/2")
        partial += term
        if partial >= K:
            return N
    raise NotFoundError(f"partial sums stay below {K} up to N = {cap}")


@dataclass(frozen=True)
class PVRow:
    m: int
    n: int
    overlap: Fraction
    ratio: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class PVGrid:
    rows: tuple[PVRow, ...]

    @property
    def max_ratio(self) -> Fraction | None:
        """Max of ratio / rhs over rows with positive right side."""
        vals = [r.ratio / r.rhs for r in self.rows if r.rhs > 0]
        return max(vals) if vals else None

    @property
    def violations(self) -> list[PVRow]:
        """Rows with positive overlap but a zero right side."""
        return [r for r in self.rows if r.rhs == 0 and r.overlap > 0]


def pv_grid(psi: PsiSpec, nmax: int, nmin: int = 1) -> PVGrid:
    """Overlap ratio ``lam(A_n & A_m) / (lam(A_n) lam(A_m))`` against the
    indicator-times-product bound, for ``nmin <= m < n <= nmax``."""
    sets = RealSets(psi)
    rows = []
    for n in range(nmin, nmax + 1):
        ln = sets.lam(n)
        for m in range(nmin, n):
            lm = sets.lam(m)
            inter = sets.intersect_measure(n, m)
            ratio = inter / (ln * lm) if ln and lm else Fraction(0)
            rows.append(PVRow(m, n, inter, ratio, pv_rhs(m, n, psi).rhs))
    return PVGrid(tuple(rows))
