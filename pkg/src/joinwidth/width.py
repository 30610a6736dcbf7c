"""Width bookkeeping in exact arithmetic.

Widths are logarithms of tuple counts, but every yes/no decision compares raw
counts against ``floor(base ** omega)`` computed with integers, so results at
boundary widths never depend on floating-point rounding.
"""
from __future__ import annotations

import decimal
import math
from fractions import Fraction

from joinwidth.relational import Instance, max_tuples


def width_base(inst: Instance) -> int:
    """Log base for widths: the largest relation size, but never below 2."""
    return max(max_tuples(inst), 2)


def as_fraction(omega) -> Fraction:
    if isinstance(omega, Fraction):
        value = omega
    elif isinstance(omega, float):
        value = Fraction(repr(omega))
    else:
        value = Fraction(omega)
    if value < 0:
        raise ValueError(f"width must be non-negative, got {omega}")
    return value


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for integers n >= 0, k >= 1."""
    if n < 2 or k == 1:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def fits(count: int, base: int, omega) -> bool:
    """Exactly decide ``count <= base ** omega``.

    Double-precision logarithms settle the comparison unless it is within
    rounding distance of a tie. Near a tie, small exponents are compared as
    integers; otherwise equality is only possible when ``count`` and ``base``
    are powers of a common root, and the sign comes from high-precision logs.
    """
    w = as_fraction(omega)
    if count <= 1:
        return True
    p, q = w.numerator, w.denominator
    lhs = math.log(count) * q
    rhs = math.log(base) * p
    if abs(rhs - lhs) > 1e-12 * max(1.0, abs(rhs)):
        return lhs < rhs
    if q * count.bit_length() <= 1 << 14 and p * base.bit_length() <= 1 << 14:
        return count ** q <= base ** p
    # count ** q == base ** p forces count = r ** p, base = r ** q with r >= 2
    if p <= count.bit_length() and q <= base.bit_length():
        r = iroot(base, q)
        if r ** q == base and r ** p == count:
            return True
    with decimal.localcontext() as ctx:
        ctx.prec = 40 + len(str(p)) + len(str(q))
        return decimal.Decimal(count).ln() * q < decimal.Decimal(base).ln() * p


def count_cap(base: int, omega) -> int:
    """Largest tuple count allowed at width ``omega``: floor(base ** omega)."""
    w = as_fraction(omega)
    exponent = float(w) * math.log2(base)
    if exponent > 1000:
        return iroot(base ** w.numerator, w.denominator)
    x = int(2.0 ** exponent)
    while x > 1 and not fits(x, base, w):
        x -= 1
    while fits(x + 1, base, w):
        x += 1
    return x


def count_width(count: int, base: int) -> float:
    """log_base(count), with 0 for counts of 0 or 1."""
    if count <= 1:
        return 0.0
    return math.log(count) / math.log(base)
