"""Closed-form reference values used to check the bound code.

Nothing here imports from the rest of the package: the arithmetic is
duplicated on purpose so that a bug in the library cannot hide itself.
"""

from __future__ import annotations

from fractions import Fraction

REFERENCE_MAX_N = 10


def kunneth_betti(n: int, i: int, m: int) -> int:
    """h^i of the Artin-Schreier sheaf t^p - t = x_1^m + ... + x_i^m on A^n: (m-1)^i."""
    if i < 0 or i > n:
        raise ValueError(f"degree {i} outside 0..{n}")
    if m < 1:
        raise ValueError("m must be at least 1")
    out = 1
    for _ in range(i):
        out *= m - 1
    return out


def kunneth_chi(n: int, m: int) -> int:
    """Alternating sum of (m-1)^i over 0 <= i <= n.

    Computed both term by term and through the geometric-series closed form;
    the two must agree.
    """
    if m == 0:
        raise ValueError("m must be nonzero")
    termwise = 0
    power = 1
    for i in range(n + 1):
        termwise += power if i % 2 == 0 else -power
        power *= m - 1
    closed = Fraction((1 - m) ** (n + 1) - 1, -m)
    if closed != termwise:
        raise AssertionError(f"closed form {closed} != termwise {termwise}")
    return termwise


# list-of-Fraction polynomials, lowest degree first

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _add(p, q):
    n = max(len(p), len(q))
    return _trim([(p[k] if k < len(p) else 0) + (q[k] if k < len(q) else 0) for k in range(n)])


def _mul(p, q):
    out = [Fraction(0)] * max(len(p) + len(q) - 1, 0)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _trim(out)


def _compose_shift(p, t):
    # Horner in the polynomial ring: p(x + t) = (...(a_d (x+t) + a_{d-1})(x+t) ...)
    out = []
    xt = [Fraction(t), Fraction(1)]
    for c in reversed(p):
        out = _add(_mul(out, xt), [Fraction(c)])
    return out


def recursion_reference(n: int) -> list[Fraction]:
    """b_n by naive recursion, lowest-degree coefficient first."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > REFERENCE_MAX_N:
        raise ValueError(f"n={n} too large for the naive reference (max {REFERENCE_MAX_N})")
    if n == 0:
        return [Fraction(1)]
    if n == 1:
        return [Fraction(0), Fraction(1)]
    total = []
    for i in range(n):
        bi = recursion_reference(i)
        if (n - i) % 2 == 1:
            total = _add(total, _mul([Fraction(2), Fraction(1)], _compose_shift(bi, 3)))
            total = _add(total, bi)
        else:
            total = _add(total, _mul([Fraction(3), Fraction(1)], bi))
    return total
