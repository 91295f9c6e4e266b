"""Exact rationals and univariate polynomials over Q.

Rationals are plain :class:`fractions.Fraction` values.  :class:`Poly` stores
its coefficients lowest degree first and is treated as immutable.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Fraction
RatLike = Union[Fraction, int, str]

NEG_INF = float("-inf")  # degree of the zero polynomial

GRID_ENV = "RAMICALC_GRID"


def rat(value: RatLike) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings to a Fraction.

    Floats are refused: nothing in the library may pass through binary
    floating point.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass a string or Fraction")
    if isinstance(value, str):
        value = value.strip()
    return Fraction(value)


def format_rat(q: RatLike) -> str:
    q = rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def ceil_rat(q: RatLike) -> int:
    return math.ceil(rat(q))


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RatLike] = ()):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # construction helpers

    @classmethod
    def const(cls, c: RatLike) -> "Poly":
        return cls([c])

    @classmethod
    def linear(cls, c: RatLike) -> "Poly":
        """The monic linear polynomial ``x + c``."""
        return cls([c, 1])

    @classmethod
    def monomial(cls, k: int, c: RatLike = 1) -> "Poly":
        return cls([0] * k + [c])

    # basic accessors

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def has_nonneg_coeffs(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def has_integer_coeffs(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            s = rat(other)
            return Poly(s * c for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(1)
        for _ in range(k):
            result = result * self
        return result

    def __call__(self, x: RatLike) -> Fraction:
        x = rat(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, t: RatLike) -> "Poly":
        """Return q with q(x) = p(x + t), by binomial expansion."""
        t = rat(t)
        if t == 0:
            return self
        n = len(self.coeffs)
        out = [Fraction(0)] * n
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            for k in range(j + 1):
                out[k] += c * math.comb(j, k) * t ** (j - k)
        return Poly(out)

    def dilate(self, d: RatLike) -> "Poly":
        """Return q with q(x) = p(d * x)."""
        d = rat(d)
        return Poly(c * d**k for k, c in enumerate(self.coeffs))

    def affine_substitute(self, a: RatLike, d: RatLike) -> "Poly":
        """Return q with q(x) = p(a + d * x)."""
        return self.shift(a).dilate(d)

    # comparison and hashing

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly([{', '.join(format_rat(c) for c in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if k == 0:
                body = format_rat(mag)
            else:
                var = "x" if k == 1 else f"x^{k}"
                if mag == 1:
                    body = var
                elif mag.denominator == 1:
                    body = f"{mag.numerator}{var}"
                else:
                    body = f"({format_rat(mag)}){var}"
            if not parts:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)

    # serialization

    def to_json(self) -> list[str]:
        return [format_rat(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[RatLike]) -> "Poly":
        if not isinstance(data, (list, tuple)):
            raise ValueError("polynomial must be a JSON array of coefficients")
        return cls(data)


X = Poly([0, 1])


def prod(polys: Iterable[Poly]) -> Poly:
    result = Poly.const(1)
    for p in polys:
        result = result * p
    return result


def poly_arith(a: Poly, b: Poly | None, op: str, scalar: RatLike | None = None) -> Poly:
    """Dispatch ``add``, ``sub``, ``mul`` or ``scale`` (by ``scalar``)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scale":
        if scalar is None:
            raise ValueError("scale needs a scalar")
        return a * rat(scalar)
    raise ValueError(f"unknown operation {op!r}")


def poly_shift(p: Poly, t: RatLike) -> Poly:
    return p.shift(t)


def poly_eval(p: Poly, x: RatLike) -> Fraction:
    return p(x)


def poly_dominates(a: Poly, b: Poly) -> bool:
    """True iff every coefficient of ``b - a`` is nonnegative.

    This certifies ``a(x) <= b(x)`` for all real ``x >= 0``; a False answer
    proves nothing.
    """
    return (b - a).has_nonneg_coeffs()


def default_grid() -> list[Fraction]:
    """{0, 1/2, 1, ..., 100}, or the range given by ``RAMICALC_GRID``."""
    spec = os.environ.get(GRID_ENV)
    if spec:
        return parse_grid_spec(spec)
    return [Fraction(k, 2) for k in range(201)]


def parse_grid_spec(spec: str) -> list[Fraction]:
    """Parse "start:step:end" (end inclusive) into a list of rationals."""
    try:
        start, step, end = (rat(part) for part in spec.split(":"))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad grid spec {spec!r}, expected start:step:end") from exc
    if step <= 0:
        raise ValueError("grid step must be positive")
    if start < 0 or end < start:
        raise ValueError("grid must satisfy 0 <= start <= end")
    out = []
    x = start
    while x <= end:
        out.append(x)
        x += step
    return out


def poly_nonneg_on_grid(p: Poly, grid: Iterable[RatLike] | None = None) -> bool:
    """Sample ``p`` on a grid of nonnegative points.  Never a proof."""
    points = default_grid() if grid is None else [rat(x) for x in grid]
    if any(x < 0 for x in points):
        raise ValueError("grid points must be nonnegative")
    return all(p(x) >= 0 for x in points)
