"""Elementary arithmetic: sieve, totient, prime reciprocal sums and the
pair statistics ``M(m, n)``, ``L_t(a, b)`` from the overlap estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

DEFAULT_SIEVE_LIMIT = 10**6


class ArithmeticDomainError(ValueError):
    pass


class SieveLimitError(ArithmeticDomainError):
    """Raised instead of silently truncating beyond the sieve bound."""


class Sieve:
    """Smallest-prime-factor table up to ``limit``, read-only after build."""

    def __init__(self, limit: int = DEFAULT_SIEVE_LIMIT):
        if limit < 2:
            raise ArithmeticDomainError("sieve limit must be at least 2")
        self.limit = limit
        spf = np.zeros(limit + 1, dtype=np.int64)
        for q in range(2, math.isqrt(limit) + 1):
            if spf[q] == 0:
                block = spf[q * q :: q]
                block[block == 0] = q
        idx = np.flatnonzero(spf == 0)
        spf[idx] = idx
        spf[0] = spf[1] = 0
        spf.setflags(write=False)
        self._spf = spf
        self.primes = np.flatnonzero(spf[2:] == np.arange(2, limit + 1)) + 2
        self.primes.setflags(write=False)

    def primes_upto(self, x: int) -> np.ndarray:
        if x > self.limit:
            raise SieveLimitError(f"{x} exceeds sieve limit {self.limit}")
        return self.primes[: np.searchsorted(self.primes, x, side="right")]

    def factorize(self, n: int) -> dict[int, int]:
        if n < 1:
            raise ArithmeticDomainError(f"cannot factorize {n}")
        out: dict[int, int] = {}
        if n <= self.limit:
            spf = self._spf
            while n > 1:
                q = int(spf[n])
                while n % q == 0:
                    n //= q
                    out[q] = out.get(q, 0) + 1
            return out
        if math.isqrt(n) > self.limit:
            raise SieveLimitError(f"{n} needs primes beyond sieve limit {self.limit}")
        for q in self.primes:
            q = int(q)
            if q * q > n:
                break
            while n % q == 0:
                n //= q
                out[q] = out.get(q, 0) + 1
        if n > 1:
            out[n] = out.get(n, 0) + 1
        return out


@lru_cache(maxsize=4)
def get_sieve(limit: int = DEFAULT_SIEVE_LIMIT) -> Sieve:
    return Sieve(limit)


def _default_sieve(n: int) -> Sieve:
    # small default table keeps per-call cost low; grown on demand up to the bound
    for limit in (10**5, DEFAULT_SIEVE_LIMIT):
        if n <= limit:
            return get_sieve(limit)
    return get_sieve(DEFAULT_SIEVE_LIMIT)


def prime_divisors(n: int) -> list[int]:
    return sorted(_default_sieve(n).factorize(n))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return _default_sieve(n).factorize(n) == {n: 1}


def euler_phi(n: int) -> int:
    if n < 1:
        raise ArithmeticDomainError(f"euler_phi needs n >= 1, got {n}")
    result = n
    for q in _default_sieve(n).factorize(n):
        result -= result // q
    return result


def _reciprocal_sum(primes: list[int]) -> tuple[int, int]:
    """Binary splitting for sum(1/q); the result is already in lowest terms."""
    if not primes:
        return 0, 1
    if len(primes) == 1:
        return 1, primes[0]
    mid = len(primes) // 2
    n1, d1 = _reciprocal_sum(primes[:mid])
    n2, d2 = _reciprocal_sum(primes[mid:])
    return n1 * d2 + n2 * d1, d1 * d2


def mertens_sum(x: int, sieve: Sieve | None = None) -> Fraction:
    """Exact ``sum_{q <= x} 1/q`` over primes ``q``."""
    if x < 2:
        raise ArithmeticDomainError(f"mertens_sum needs x >= 2, got {x}")
    sieve = sieve or _default_sieve(x)
    num, den = _reciprocal_sum([int(q) for q in sieve.primes_upto(x)])
    return Fraction(num, den)


_FIXED_BITS = 256


def mertens_profile(xmax: int, sieve: Sieve | None = None) -> np.ndarray:
    """Float values of the exact prime reciprocal sum at every integer x <= xmax.

    Each entry is the exact rational ``sum_{q <= x} 1/q`` rounded to double,
    computed in 256-bit fixed point (truncation error below 2**-230).
    Entries 0 and 1 are 0.
    """
    sieve = sieve or _default_sieve(xmax)
    primes = sieve.primes_upto(xmax)
    scale = 1 << _FIXED_BITS
    acc = 0
    values = np.zeros(len(primes))
    for i, q in enumerate(primes):
        acc += scale // int(q)
        values[i] = acc / scale
    out = np.zeros(xmax + 1)
    if len(primes):
        idx = np.searchsorted(primes, np.arange(xmax + 1), side="right") - 1
        mask = idx >= 0
        out[mask] = values[idx[mask]]
    return out


@lru_cache(maxsize=1)
def mertens_constant_estimate() -> float:
    """``sum_{q <= 10**6} 1/q - log log 10**6``, the frozen regression value of b."""
    x = 10**6
    return float(mertens_profile(x)[x]) - math.log(math.log(x))


# mertens_constant_estimate() evaluated once and frozen
MERTENS_B = 0.261536185091662


def big_m(m: int, n: int, psi) -> Fraction:
    return max(m * psi(n), n * psi(m))


def _squarefree_kernel_primes(a: int, b: int) -> list[int]:
    g = math.gcd(a, b)
    return prime_divisors((a // g) * (b // g))


def lt(a: int, b: int, t) -> Fraction:
    """``L_t(a, b)``: sum of 1/q over primes q >= t dividing ab / gcd(a, b)**2."""
    if a < 1 or b < 1:
        raise ArithmeticDomainError("L_t needs positive integers")
    t = Fraction(t)
    if t < 1:
        raise ArithmeticDomainError(f"L_t needs t >= 1, got {t}")
    return sum((Fraction(1, q) for q in _squarefree_kernel_primes(a, b) if q >= t), Fraction(0))


@dataclass(frozen=True)
class PairStatistics:
    m: int
    n: int
    big_m: Fraction
    gcd: int
    indicator: bool
    pv_product: Fraction

    @property
    def rhs(self) -> Fraction:
        """Indicator times product: the right side of the overlap bound."""
        return self.pv_product if self.indicator else Fraction(0)


def pv_rhs(m: int, n: int, psi) -> PairStatistics:
    if m == n:
        raise ArithmeticDomainError("pv_rhs is defined for m != n only")
    bm = big_m(m, n, psi)
    g = math.gcd(m, n)
    cut = bm / g
    product = Fraction(1)
    for q in _squarefree_kernel_primes(m, n):
        if q > cut:
            product *= Fraction(q + 1, q)
    return PairStatistics(m, n, bm, g, bm >= g, product)


def _et_pairs(X: int, Y: int, t: Fraction, psi, threshold: Fraction):
    for v in range(X, Y + 1):
        for w in range(X, Y + 1):
            g = math.gcd(v, w)
            if g * t < big_m(v, w, psi):
                continue
            if lt(v, w, t) >= threshold:
                yield v, w


def et_enumerate(X: int, Y: int, t, psi, threshold=10):
    """Return ``(E, weighted_sum)`` for the set ``E_t`` on ``[X, Y]**2``.

    ``E`` holds pairs with ``gcd(v, w) >= M(v, w)/t`` and
    ``L_t(v, w) >= threshold``; the sum weights each pair by
    ``(phi(v) psi(v)/v) (phi(w) psi(w)/w)``.
    """
    if X < 1 or X > Y:
        raise ArithmeticDomainError(f"need 1 <= X <= Y, got X={X}, Y={Y}")
    t = Fraction(t)
    if t < 1:
        raise ArithmeticDomainError(f"t must be at least 1, got {t}")
    threshold = Fraction(threshold)
    pairs = set(_et_pairs(X, Y, t, psi, threshold))
    weight = {n: euler_phi(n) * psi(n) / n for n in range(X, Y + 1)}
    total = sum((weight[v] * weight[w] for v, w in pairs), Fraction(0))
    return pairs, total


def rescale_containment_check(X: int, Y: int, t, psi, K: int, threshold=10) -> bool:
    """Check ``E_t(psi) <= E_t(psi / K)`` by enumerating both sets."""
    from .psi import scale

    if K < 1:
        raise ArithmeticDomainError(f"K must be a positive integer, got {K}")
    original, _ = et_enumerate(X, Y, t, psi, threshold)
    rescaled, _ = et_enumerate(X, Y, t, scale(psi, Fraction(1, K)), threshold)
    return original <= rescaled
