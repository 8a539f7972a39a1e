"""Exact-arithmetic helpers shared by the threshold and cover computations."""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Union


@total_ordering
class _NegInf:
    """Absorbing ``-inf`` sentinel usable alongside :class:`Fraction` and float.

    ``NEG_INF + x == NEG_INF`` for every finite ``x`` and ``NEG_INF < x`` for
    every finite ``x``. It is never converted to a float implicitly.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NEG_INF"

    __str__ = __repr__

    def __reduce__(self):
        return (_NegInf, ())

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("NEG_INF")

    def __lt__(self, other) -> bool:
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __float__(self) -> float:
        return float("-inf")


NEG_INF = _NegInf()

Number = Union[Fraction, float, int]


def to_exact(x) -> Fraction:
    """Convert ``x`` to a Fraction, reading floats by their shortest decimal repr.

    ``to_exact(0.1) == Fraction(1, 10)``, which is what a user typing ``0.1``
    on a grid means. Integers and rationals pass through exactly.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            raise ValueError(f"cannot convert {x!r} to an exact rational")
        return Fraction(repr(x))
    return Fraction(str(x))


def is_neg_inf(x) -> bool:
    return x is NEG_INF


def as_float(x) -> float:
    """Float view of a finite value or of the sentinel."""
    return float("-inf") if x is NEG_INF else float(x)
