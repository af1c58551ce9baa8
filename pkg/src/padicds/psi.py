"""Approximation functions ``psi: N -> Q>=0``.

Every function is an immutable, callable spec with an exact rational value
at each positive integer.  Specs round-trip through a small JSON document::

    {"kind": "table", "entries": [[4, "4/9"], [6, "3/2"]]}
    {"kind": "rule", "name": "psi_k", "p": 2, "k": 1}
    {"kind": "rule", "name": "scaled", "base": {...}, "scalar": "1/4"}

Rationals are always written as ``"num/den"`` strings in lowest terms.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping

from .arithmetic import is_prime
from .padic_core import snap_radius


class PsiSpecError(ValueError):
    """Invalid parameters or a malformed spec document."""


_RATIONAL_RE = re.compile(r"^(-?\d+)/(\d+)$")


def parse_rational(text: str) -> Fraction:
    """Parse a strict non-negative ``"num/den"`` string in lowest terms."""
    if not isinstance(text, str):
        raise PsiSpecError(f"rational must be a 'num/den' string, got {text!r}")
    m = _RATIONAL_RE.match(text)
    if not m:
        raise PsiSpecError(f"malformed rational {text!r}")
    num, den = int(m.group(1)), int(m.group(2))
    if num < 0:
        raise PsiSpecError(f"negative rational {text!r}")
    if den == 0:
        raise PsiSpecError(f"zero denominator in {text!r}")
    if gcd(num, den) != 1:
        raise PsiSpecError(f"rational {text!r} is not in lowest terms")
    return Fraction(num, den)


def format_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _nu(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _require_prime(p) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise PsiSpecError(f"{p!r} is not a prime")


def _require_nonneg_int(name, k) -> None:
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise PsiSpecError(f"{name} must be a non-negative integer, got {k!r}")


def _require_nonneg_rational(c) -> Fraction:
    try:
        c = Fraction(c)
    except (TypeError, ValueError) as exc:
        raise PsiSpecError(f"not a rational: {c!r}") from exc
    if c < 0:
        raise PsiSpecError(f"scalar must be non-negative, got {c}")
    return c


class PsiSpec:
    """Base class: ``spec(n)`` returns the exact value ``psi(n)``."""

    kind = "rule"

    def __call__(self, n: int) -> Fraction:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(frozen=True)
class TablePsi(PsiSpec):
    """Finite table; zero off the table."""

    entries: Mapping[int, Fraction] = field(default_factory=dict)
    kind = "table"

    def __post_init__(self):
        clean = {}
        for n, v in dict(self.entries).items():
            if not isinstance(n, int) or n < 1:
                raise PsiSpecError(f"table index must be a positive integer, got {n!r}")
            clean[n] = _require_nonneg_rational(v)
        object.__setattr__(self, "entries", clean)

    def __call__(self, n: int) -> Fraction:
        return self.entries.get(n, Fraction(0))

    def __hash__(self):
        return hash(tuple(sorted(self.entries.items())))

    def to_dict(self) -> dict:
        rows = [[n, format_rational(v)] for n, v in sorted(self.entries.items())]
        return {"kind": "table", "entries": rows}


@dataclass(frozen=True)
class ConstantPsi(PsiSpec):
    value: Fraction

    def __call__(self, n: int) -> Fraction:
        return self.value

    def to_dict(self) -> dict:
        return {"kind": "rule", "name": "constant", "value": format_rational(self.value)}


@dataclass(frozen=True)
class PsiK(PsiSpec):
    """``n / p**(k+1)`` when ``nu_p(n) == k``, else 0."""

    p: int
    k: int

    def __call__(self, n: int) -> Fraction:
        if _nu(n, self.p) != self.k:
            return Fraction(0)
        return Fraction(n, self.p ** (self.k + 1))

    def to_dict(self) -> dict:
        return {"kind": "rule", "name": "psi_k", "p": self.p, "k": self.k}


@dataclass(frozen=True)
class PsiPrime(PsiSpec):
    """``n / p`` when ``p | n``, else 0."""

    p: int

    def __call__(self, n: int) -> Fraction:
        return Fraction(n, self.p) if n % self.p == 0 else Fraction(0)

    def to_dict(self) -> dict:
        return {"kind": "rule", "name": "psi_prime", "p": self.p}


@dataclass(frozen=True)
class PsiPrimeK(PsiSpec):
    """``n / p**k`` when ``p**k | n``, else 0."""

    p: int
    k: int

    def __call__(self, n: int) -> Fraction:
        mod = self.p**self.k
        return Fraction(n, mod) if n % mod == 0 else Fraction(0)

    def to_dict(self) -> dict:
        return {"kind": "rule", "name": "psi_prime_k", "p": self.p, "k": self.k}


@dataclass(frozen=True)
class PsiX(PsiSpec):
    """``n / p**(nu_p(n)+1)`` when ``p | n`` and bit ``x[nu_p(n)]`` is set.

    ``bits[0]`` is the bit for valuation 1; missing bits count as 0.
    """

    p: int
    bits: tuple[int, ...]

    def __call__(self, n: int) -> Fraction:
        v = _nu(n, self.p)
        if v == 0 or v > len(self.bits) or not self.bits[v - 1]:
            return Fraction(0)
        return Fraction(n, self.p ** (v + 1))

    @property
    def support(self) -> list[int]:
        """Valuations ``k`` with ``x_k = 1``."""
        return [i + 1 for i, b in enumerate(self.bits) if b]

    def to_dict(self) -> dict:
        return {"kind": "rule", "name": "psi_x", "p": self.p, "x": list(self.bits)}


@dataclass(frozen=True)
class RestrictedPsi(PsiSpec):
    """``base(n)`` off the multiples of ``p``, zero on them."""

    base: PsiSpec
    p: int

    def __call__(self, n: int) -> Fraction:
        return Fraction(0) if n % self.p == 0 else self.base(n)

    def to_dict(self) -> dict:
        return {"kind": "rule", "name": "restricted", "p": self.p, "base": self.base.to_dict()}


@dataclass(frozen=True)
class ScaledPsi(PsiSpec):
    base: PsiSpec
    scalar: Fraction

    def __call__(self, n: int) -> Fraction:
        return self.scalar * self.base(n)

    def to_dict(self) -> dict:
        return {
            "kind": "rule",
            "name": "scaled",
            "scalar": format_rational(self.scalar),
            "base": self.base.to_dict(),
        }


def make_table(entries) -> TablePsi:
    return TablePsi(dict(entries))


def make_constant(c) -> ConstantPsi:
    return ConstantPsi(_require_nonneg_rational(c))


def make_psi_k(p: int, k: int) -> PsiK:
    _require_prime(p)
    _require_nonneg_int("k", k)
    return PsiK(p, k)


def make_psi_prime(p: int) -> PsiPrime:
    _require_prime(p)
    return PsiPrime(p)


def make_psi_prime_k(p: int, k: int) -> PsiPrimeK:
    _require_prime(p)
    _require_nonneg_int("k", k)
    return PsiPrimeK(p, k)


def make_psi_x(p: int, x) -> PsiX:
    _require_prime(p)
    bits = tuple(int(b) for b in x)
    if any(b not in (0, 1) for b in bits):
        raise PsiSpecError(f"bit list must contain only 0 and 1, got {list(x)!r}")
    return PsiX(p, bits)


def scale(spec: PsiSpec, c) -> ScaledPsi:
    return ScaledPsi(spec, _require_nonneg_rational(c))


def restrict_coprime(spec: PsiSpec, p: int) -> RestrictedPsi:
    _require_prime(p)
    return RestrictedPsi(spec, p)


def evaluate(spec: PsiSpec, n: int) -> Fraction:
    if n < 1:
        raise PsiSpecError(f"psi is defined on positive integers, got {n}")
    return spec(n)


def kn(spec: PsiSpec, n: int, p: int) -> int | None:
    """Least ``k >= 0`` with ``p**-k <= psi(n)``; ``None`` when ``psi(n) == 0``."""
    value = spec(n)
    if value == 0:
        return None
    if value >= 1:
        return 0
    return -snap_radius(value, p)


def from_dict(doc) -> PsiSpec:
    if not isinstance(doc, dict):
        raise PsiSpecError("psi spec must be a JSON object")
    kind = doc.get("kind")
    if kind == "table":
        entries = doc.get("entries")
        if not isinstance(entries, list):
            raise PsiSpecError("table spec needs an 'entries' list")
        table = {}
        for row in entries:
            if not (isinstance(row, list) and len(row) == 2):
                raise PsiSpecError(f"table row must be [n, 'num/den'], got {row!r}")
            n, value = row
            if not isinstance(n, int) or isinstance(n, bool) or n < 1:
                raise PsiSpecError(f"table index must be a positive integer, got {n!r}")
            if n in table:
                raise PsiSpecError(f"duplicate table index {n}")
            table[n] = parse_rational(value)
        return TablePsi(table)
    if kind != "rule":
        raise PsiSpecError(f"unknown psi kind {kind!r}")

    name = doc.get("name")

    def need(key):
        if key not in doc:
            raise PsiSpecError(f"rule {name!r} is missing {key!r}")
        return doc[key]

    if name == "constant":
        return make_constant(parse_rational(need("value")))
    if name == "psi_k":
        return make_psi_k(need("p"), need("k"))
    if name == "psi_prime":
        return make_psi_prime(need("p"))
    if name == "psi_prime_k":
        return make_psi_prime_k(need("p"), need("k"))
    if name == "psi_x":
        x = need("x")
        if not isinstance(x, list):
            raise PsiSpecError("psi_x needs 'x' as a list of bits")
        return make_psi_x(need("p"), x)
    if name == "restricted":
        return restrict_coprime(from_dict(need("base")), need("p"))
    if name == "scaled":
        return scale(from_dict(need("base")), parse_rational(need("scalar")))
    raise PsiSpecError(f"unknown psi rule {name!r}")


def loads(text: str) -> PsiSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PsiSpecError(f"invalid psi JSON: {exc}") from exc
    return from_dict(doc)
