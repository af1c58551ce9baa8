"""Exact p-adic valuation and the ball algebra on Z_p.

A closed ball in Z_p is a residue class ``x = residue (mod p**depth)``; its
Haar measure is ``p**-depth``.  A :class:`BallUnion` stores a finite union of
such classes in canonical form (pairwise disjoint, maximal), so that two
unions describe the same set exactly when their ball tuples are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

Rational = Fraction


class PAdicDomainError(ValueError):
    """Raised for inputs outside an operation's domain."""


def _as_fraction(q) -> Fraction:
    return q if isinstance(q, Fraction) else Fraction(q)


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(q, p: int) -> int:
    """Return the exponent of ``p`` in the rational ``q`` (may be negative)."""
    q = _as_fraction(q)
    if q == 0:
        raise PAdicDomainError("valuation of 0 is +infinity")
    num = abs(q.numerator)
    if num % p == 0:
        return _int_valuation(num, p)
    return -_int_valuation(q.denominator, p)


def padic_abs(q, p: int) -> Fraction:
    q = _as_fraction(q)
    if q == 0:
        return Fraction(0)
    v = valuation(q, p)
    return Fraction(1, p**v) if v >= 0 else Fraction(p ** (-v))


def snap_radius(r, p: int) -> int:
    """Return the integer ``s`` with ``p**s <= r < p**(s+1)``."""
    r = _as_fraction(r)
    if r <= 0:
        raise PAdicDomainError(f"radius must be positive, got {r}")
    num, den = r.numerator, r.denominator
    if num >= den:
        s = 0
        power = p
        while power <= num // den:
            power *= p
            s += 1
        # p**(s+1) is an integer above floor(r), hence above r
        return s
    # r < 1: smallest t >= 1 with p**t * num >= den, then s = -t
    t = 0
    scaled = num
    while scaled < den:
        scaled *= p
        t += 1
    return -t


@dataclass(frozen=True, order=True)
class PAdicBall:
    """The residue class ``residue (mod p**depth)`` inside Z_p."""

    depth: int
    residue: int
    p: int

    def __post_init__(self):
        if self.depth < 0:
            raise PAdicDomainError("ball depth must be non-negative")
        if not 0 <= self.residue < self.p**self.depth:
            raise PAdicDomainError(
                f"residue {self.residue} outside [0, {self.p}**{self.depth})"
            )

    @property
    def modulus(self) -> int:
        return self.p**self.depth

    def measure(self) -> Fraction:
        return Fraction(1, self.modulus)

    def contains(self, other: "PAdicBall") -> bool:
        return other.depth >= self.depth and other.residue % self.modulus == self.residue

    def parent(self) -> "PAdicBall":
        d = self.depth - 1
        return PAdicBall(d, self.residue % self.p**d, self.p)

    def __repr__(self):
        return f"PAdicBall({self.residue} mod {self.p}^{self.depth})"


class BallUnion:
    """Canonical finite union of disjoint maximal balls in Z_p.

    Instances are immutable and hashable.  Construct through
    :func:`normalize` (or the helpers ``empty``/``whole``); the constructor
    normalizes whatever it is given.
    """

    __slots__ = ("p", "balls", "_keys")

    def __init__(self, p: int, balls: Iterable[PAdicBall] = ()):
        pairs = _canonical_pairs(p, ((b.depth, b.residue) for b in balls))
        self.p = p
        self.balls = tuple(PAdicBall(d, r, p) for d, r in pairs)
        self._keys = frozenset(pairs)

    @classmethod
    def _from_pairs(cls, p: int, pairs) -> "BallUnion":
        obj = cls.__new__(cls)
        canon = _canonical_pairs(p, pairs)
        obj.p = p
        obj.balls = tuple(PAdicBall(d, r, p) for d, r in canon)
        obj._keys = frozenset(canon)
        return obj

    @classmethod
    def empty(cls, p: int) -> "BallUnion":
        return cls._from_pairs(p, ())

    @classmethod
    def whole(cls, p: int) -> "BallUnion":
        return cls._from_pairs(p, [(0, 0)])

    def is_empty(self) -> bool:
        return not self.balls

    def is_whole(self) -> bool:
        return self._keys == {(0, 0)}

    @property
    def max_depth(self) -> int:
        return max((b.depth for b in self.balls), default=0)

    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((b.depth, b.residue) for b in self.balls)

    def measure(self) -> Fraction:
        return sum((Fraction(1, self.p**b.depth) for b in self.balls), Fraction(0))

    def _covering(self, depth: int, residue: int) -> bool:
        """True if some ball of ``self`` contains the class ``residue mod p**depth``."""
        keys = self._keys
        if not keys:
            return False
        p = self.p
        mod = 1
        for d in range(depth + 1):
            if (d, residue % mod) in keys:
                return True
            mod *= p
        return False

    def contains_ball(self, ball: PAdicBall) -> bool:
        return self._covering(ball.depth, ball.residue)

    def contains_residue(self, x: int, precision: int) -> bool:
        """Membership test for the class ``x mod p**precision``."""
        if precision < self.max_depth:
            raise PrecisionError(
                f"precision {precision} below deepest ball depth {self.max_depth}"
            )
        return self._covering(precision, x % self.p**precision)

    def _check(self, other: "BallUnion") -> None:
        if not isinstance(other, BallUnion):
            raise TypeError(f"expected BallUnion, got {type(other).__name__}")
        if other.p != self.p:
            raise PAdicDomainError(f"mixed primes {self.p} and {other.p}")

    def union(self, other: "BallUnion") -> "BallUnion":
        self._check(other)
        return BallUnion._from_pairs(self.p, self._keys | other._keys)

    def intersect(self, other: "BallUnion") -> "BallUnion":
        self._check(other)
        out = [(d, r) for d, r in self._keys if other._covering(d, r)]
        out += [(d, r) for d, r in other._keys if self._covering(d, r)]
        return BallUnion._from_pairs(self.p, out)

    def issubset(self, other: "BallUnion") -> bool:
        self._check(other)
        return all(other._covering(d, r) for d, r in self._keys)

    __or__ = union
    __and__ = intersect
    __le__ = issubset

    def __eq__(self, other):
        if not isinstance(other, BallUnion):
            return NotImplemented
        return self.p == other.p and self.balls == other.balls

    def __hash__(self):
        return hash((self.p, self.balls))

    def __len__(self):
        return len(self.balls)

    def __iter__(self):
        return iter(self.balls)

    def __repr__(self):
        inner = ", ".join(f"{b.residue} mod {self.p}^{b.depth}" for b in self.balls)
        return f"BallUnion(p={self.p}, [{inner}])"


class PrecisionError(ArithmeticError):
    """Membership cannot be decided at the requested precision."""


def _canonical_pairs(p: int, pairs) -> list[tuple[int, int]]:
    by_depth: dict[int, set[int]] = {}
    for d, r in pairs:
        by_depth.setdefault(d, set()).add(r % p**d)
    if not by_depth:
        return []

    # drop balls nested inside a shallower one
    kept: set[tuple[int, int]] = set()
    for d in sorted(by_depth):
        for r in by_depth[d]:
            mod = 1
            covered = False
            for j in range(d):
                if (j, r % mod) in kept:
                    covered = True
                    break
                mod *= p
            if not covered:
                kept.add((d, r))

    # coalesce complete sibling families, deepest level first
    levels: dict[int, set[int]] = {}
    for d, r in kept:
        levels.setdefault(d, set()).add(r)
    depth = max(levels)
    while depth > 0:
        residues = levels.get(depth)
        if residues and len(residues) >= p:
            parent_mod = p ** (depth - 1)
            groups: dict[int, int] = {}
            for r in residues:
                groups[r % parent_mod] = groups.get(r % parent_mod, 0) + 1
            full = {c for c, cnt in groups.items() if cnt == p}
            if full:
                levels[depth] = {r for r in residues if r % parent_mod not in full}
                levels.setdefault(depth - 1, set()).update(full)
        depth -= 1
    return sorted((d, r) for d, rs in levels.items() for r in rs)


def normalize(p: int, balls: Iterable[PAdicBall]) -> BallUnion:
    balls = list(balls)
    for b in balls:
        if b.p != p:
            raise PAdicDomainError(f"ball over p={b.p} in a union over p={p}")
    return BallUnion(p, balls)


def union(a: BallUnion, b: BallUnion) -> BallUnion:
    return a.union(b)


def intersect(a: BallUnion, b: BallUnion) -> BallUnion:
    return a.intersect(b)


def equals(a: BallUnion, b: BallUnion) -> bool:
    if a.p != b.p:
        raise PAdicDomainError(f"mixed primes {a.p} and {b.p}")
    return a == b


def measure(a: BallUnion) -> Fraction:
    return a.measure()


def ball_pair(num: int, den: int, radius_exponent: int, p: int):
    """Integer fast path of :func:`ball_around` for the center ``num/den``.

    Returns ``(depth, residue)`` for a single ball, ``"all"`` for Z_p and
    ``None`` for the empty set.  ``num/den`` need not be reduced, but
    ``den`` must be non-zero.
    """
    if den < 0:
        num, den = -num, -den
    if num == 0:
        v = None  # |0|_p = 0
    else:
        vn = 0
        while num % p == 0:
            num //= p
            vn += 1
        vd = 0
        while den % p == 0:
            den //= p
            vd += 1
        v = vn - vd
    # |center|_p = p**-v ; radius p**e
    e = radius_exponent
    if e >= 0 and (v is None or -v <= e):
        return "all"
    if v is not None and -v > max(0, e):
        return None
    depth = -e
    mod = p**depth
    if v is None:
        return depth, 0
    # center = p**v * num/den with p not dividing num, den; v >= 0 here
    if v >= depth:
        return depth, 0
    res = (p**v * num * pow(den, -1, mod)) % mod
    return depth, res


def ball_around(center, radius_exponent: int, p: int) -> BallUnion:
    """Return ``{x in Z_p : |x - center|_p <= p**radius_exponent}``."""
    c = _as_fraction(center)
    got = ball_pair(c.numerator, c.denominator, radius_exponent, p)
    if got is None:
        return BallUnion.empty(p)
    if got == "all":
        return BallUnion.whole(p)
    return BallUnion._from_pairs(p, [got])


def annulus(p: int, k: int) -> BallUnion:
    """``p**k Z_p \\ p**(k+1) Z_p`` as ``p - 1`` explicit balls."""
    mod_k = p**k
    return BallUnion._from_pairs(p, [(k + 1, b * mod_k) for b in range(1, p)])
