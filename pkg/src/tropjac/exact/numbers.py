"""Rational scalars, string serialization and valuations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Union

from ..errors import InvalidInput, MissingValuation

Rational = Fraction
INF = math.inf
ExtRational = Union[Fraction, float]  # float only for +inf

RationalLike = Union[int, str, Fraction]


def to_rational(x: RationalLike) -> Fraction:
    """Parse ``"p/q"``, ``"n"``, ints and Fractions. Floats are rejected."""
    if isinstance(x, bool):
        raise InvalidInput(f"not a rational: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        try:
            if "." in s or "e" in s.lower():
                raise ValueError
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise InvalidInput(f"not a rational: {x!r}") from None
    raise InvalidInput(f"not a rational: {x!r}")


def fmt_rational(x) -> str:
    """Serialize as ``"n"`` or ``"p/q"``; ``+inf`` as ``"inf"``."""
    if x == INF:
        return "inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_ext(x) -> ExtRational:
    if isinstance(x, str) and x.strip() in ("inf", "+inf", "oo"):
        return INF
    return to_rational(x)


def ord_p(n: int, p: int) -> int:
    """Exponent of the prime ``p`` in the nonzero integer ``n``."""
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@dataclass(frozen=True)
class PAdic:
    p: int

    def __post_init__(self):
        if self.p < 2 or any(self.p % q == 0 for q in range(2, math.isqrt(self.p) + 1)):
            raise InvalidInput(f"{self.p} is not prime")

    def __call__(self, x) -> ExtRational:
        x = to_rational(x)
        if x == 0:
            return INF
        return Fraction(ord_p(x.numerator, self.p) - ord_p(x.denominator, self.p))


@dataclass(frozen=True)
class Explicit:
    """Valuation given by a table from term identifiers to values."""

    table: Mapping[Hashable, ExtRational] = field(default_factory=dict)

    def __call__(self, key) -> ExtRational:
        try:
            return self.table[key]
        except (KeyError, TypeError):
            raise MissingValuation(f"no valuation recorded for {key!r}", key=key) from None


Valuation = Union[PAdic, Explicit]


def valuate(x, v: Valuation) -> ExtRational:
    """Valuation of ``x``; ``+inf`` for zero under a p-adic valuation."""
    return v(x)


def valuation_from_json(obj: Mapping) -> Valuation:
    kind = obj.get("type")
    if kind == "p-adic":
        return PAdic(int(obj["p"]))
    if kind == "explicit":
        return Explicit({k: parse_ext(val) for k, val in obj.get("table", {}).items()})
    raise InvalidInput(f"unknown valuation type {kind!r}")


def valuation_to_json(v: Valuation) -> dict:
    if isinstance(v, PAdic):
        return {"type": "p-adic", "p": v.p}
    return {"type": "explicit", "table": {str(k): fmt_rational(x) for k, x in v.table.items()}}
