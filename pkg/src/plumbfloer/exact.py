"""Exact rational helpers: negative continued fractions and Farey descent.

Rationals are :class:`fractions.Fraction` throughout; nothing here touches
floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import PreconditionError

__all__ = [
    "NegContFrac",
    "FareyPair",
    "EvaluationError",
    "as_fraction",
    "nc_expand",
    "nc_eval",
    "truncated_value",
    "farey_mediant_search",
]


class EvaluationError(ZeroDivisionError):
    """A negative continued fraction hit a zero divisor during evaluation."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


@dataclass(frozen=True)
class NegContFrac:
    """Terms of ``a0 - 1/(a1 - 1/(a2 - ...))``.

    A leading ``0`` term denotes the inverted form used for numbers in (0, 1).
    """

    terms: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(int(t) for t in self.terms))

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, i):
        return self.terms[i]

    @property
    def value(self) -> Fraction:
        return nc_eval(self)

    def is_canonical(self) -> bool:
        return len(self.terms) > 0 and all(t <= -2 for t in self.terms)

    def __str__(self):
        return "[" + ",".join(str(t) for t in self.terms) + "]"


@lru_cache(maxsize=4096)
def _expand(x: Fraction) -> tuple[int, ...]:
    terms = []
    while True:
        if x.denominator == 1:
            terms.append(x.numerator)
            return tuple(terms)
        m = math.floor(x)
        terms.append(m)
        x = 1 / (m - x)


def nc_expand(x, inverted: bool = False) -> NegContFrac:
    """Canonical negative continued fraction of ``x``.

    For ``x < -1`` every term is at most ``-2``.  With ``inverted=True`` the
    input must lie in (0, 1) and the result is ``[0, m1, ..., mk]`` where
    ``[m1, ..., mk]`` expands ``-1/x``.

    >>> nc_expand(Fraction(-5, 4)).terms
    (-2, -2, -2, -2)
    >>> nc_expand(Fraction(2, 3), inverted=True).terms
    (0, -2, -2)
    """
    x = as_fraction(x)
    if inverted:
        if not 0 < x < 1:
            raise PreconditionError(f"inverted expansion needs 0 < x < 1, got {x}")
        return NegContFrac((0,) + _expand(-1 / x))
    if x > -1:
        raise PreconditionError(f"canonical expansion needs x <= -1, got {x}")
    return NegContFrac(_expand(x))


def nc_eval(f: NegContFrac | Iterable[int]) -> Fraction:
    """Evaluate right to left; raises :class:`EvaluationError` on a zero divisor."""
    terms = list(f.terms if isinstance(f, NegContFrac) else f)
    if not terms:
        raise ValueError("empty continued fraction")
    acc = Fraction(terms[-1])
    for t in reversed(terms[:-1]):
        if acc == 0:
            raise EvaluationError(f"zero divisor evaluating {terms}")
        acc = t - 1 / acc
    return acc


def truncated_value(expansion: Sequence[int], length: int, bump_last: bool = False) -> Fraction:
    """Value of ``[0, m1, ..., m_length]``, optionally with ``+1`` on the last term.

    With ``length == 0`` the bracket is ``[0]`` (value 0), or ``[1]`` (value 1)
    when the bump lands on the leading zero.
    """
    if not 0 <= length <= len(expansion):
        raise IndexError(f"truncation {length} outside 0..{len(expansion)}")
    terms = [0, *expansion[:length]]
    if bump_last:
        terms[-1] += 1
    return nc_eval(terms)


@dataclass(frozen=True)
class FareyPair:
    left: Fraction
    right: Fraction

    @property
    def mediant(self) -> Fraction:
        return Fraction(
            self.left.numerator + self.right.numerator,
            self.left.denominator + self.right.denominator,
        )

    def determinant(self) -> int:
        return (
            self.right.numerator * self.left.denominator
            - self.left.numerator * self.right.denominator
        )


def farey_mediant_search(r1, r2) -> tuple[FareyPair, int, int]:
    """Descend the Farey tree until the mediant separates ``r1`` from ``1 - r2``.

    Returns the consecutive pair ``a/c, b/d`` of the first level with
    ``a/c <= r1 < (a+b)/(c+d) < 1 - r2 <= b/d``, together with
    ``q = c + d`` and ``p1 = a + b``.
    """
    r1, r2 = as_fraction(r1), as_fraction(r2)
    if not (0 < r2 < 1 and 0 < r1 < 1):
        raise PreconditionError("coefficients must lie in (0, 1)")
    if r1 + r2 >= 1:
        raise PreconditionError(f"r1 + r2 = {r1 + r2} >= 1: not negative-definite with e0 = -1")
    if r1 < Fraction(1, 2):
        raise PreconditionError("r1 < 1/2: every coefficient is below 1/2, use q = 2")
    upper = 1 - r2
    a, c, b, d = 0, 1, 1, 1
    while True:
        med = Fraction(a + b, c + d)
        if r1 >= med:
            a, c = a + b, c + d
        elif upper <= med:
            b, d = a + b, c + d
        else:
            return FareyPair(Fraction(a, c), Fraction(b, d)), c + d, a + b
