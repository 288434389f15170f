"""Exact share of a codeword and the subcode-based upper estimate.

All values are :class:`fractions.Fraction`; nothing on a verdict path
touches floating point.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction

from .codeset import CodeWindow, iset
from .errors import ParameterError, UncoveredVertexError
from .lattice import Region, as_point, square_ball

Rational = Fraction


def format_rational(q) -> str:
    """Render as ``p/q`` in lowest terms (integers get denominator 1)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


def share_exact(code: CodeWindow, c, r: int = 2) -> Fraction:
    """Sum of ``1 / |I_r(u)|`` over the ball ``B_r(c)``."""
    c = as_point(c)
    if c not in code.codewords:
        raise ParameterError(f"{tuple(c)} is not a codeword")
    code.require(square_ball(2 * r, c))
    total = Fraction(0)
    for u in square_ball(r, c):
        n = len(iset(code, u, r))
        if n == 0:
            raise UncoveredVertexError(u)
        total += Fraction(1, n)
    return total


def iset_groups(subcode: CodeWindow, c, r: int = 2) -> list[tuple[Region, int]]:
    """Distinct I-sets over ``B_r(c)`` with their multiplicities, canonically sorted."""
    counts = Counter(iset(subcode, u, r) for u in square_ball(r, c))
    return sorted(counts.items(), key=lambda item: item[0].key)


def share_estimate(subcode: CodeWindow, c, r: int = 2) -> Fraction:
    """Upper bound on the share of ``c`` in any identifying code containing ``subcode``.

    Vertices with the same I-set with respect to the subcode can keep that
    I-set in the full code for at most one of them; the rest see at least
    one extra codeword.
    """
    c = as_point(c)
    if c not in subcode.codewords:
        raise ParameterError(f"{tuple(c)} is not a codeword of the subcode")
    subcode.require(square_ball(2 * r, c))
    total = Fraction(0)
    for s, count in iset_groups(subcode, c, r):
        n = len(s)
        total += Fraction(1, n) + Fraction(count - 1, n + 1)
    return total
