"""Betti-number bounding polynomials and Euler-characteristic sandwiches.

The family ``b_n`` bounds the Betti numbers of a locally constant sheaf on
affine n-space in terms of its log conductor along the hyperplane at
infinity.  This module builds it, certifies its closed-form upper bound,
and assembles the bound sequences used for general families.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .exactmath import Poly, RatLike, X, ceil_rat, poly_dominates, poly_nonneg_on_grid, prod, rat


class BoundError(ValueError):
    pass


@dataclass(frozen=True)
class BoundFamily:
    """Polynomials indexed by cohomological degree."""

    polys: tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))

    def __len__(self) -> int:
        return len(self.polys)

    def __getitem__(self, i: int) -> Poly:
        return self.polys[i]

    def __iter__(self) -> Iterator[Poly]:
        return iter(self.polys)

    def get(self, i: int) -> Poly:
        """Entry i, or the zero polynomial when out of range."""
        if 0 <= i < len(self.polys):
            return self.polys[i]
        return Poly()

    def evaluate(self, x: RatLike) -> list[Fraction]:
        return [p(x) for p in self.polys]

    def has_nonneg_coeffs(self) -> bool:
        return all(p.has_nonneg_coeffs() for p in self.polys)

    def to_json(self) -> list[list[str]]:
        return [p.to_json() for p in self.polys]

    @classmethod
    def from_json(cls, data) -> "BoundFamily":
        if not isinstance(data, list):
            raise BoundError("a bound family is a JSON array of coefficient arrays")
        return cls(tuple(Poly.from_json(p) for p in data))


# The b and c families are pure functions of n; caching the tuple of
# immutable Polys is safe under concurrent calls (worst case is recomputation).
@lru_cache(maxsize=None)
def _b_polys(n_max: int) -> tuple[Poly, ...]:
    b = [Poly.const(1), X]
    for n in range(2, n_max + 1):
        # the three sums of the recursion, kept apart for auditing
        shifted = Poly()  # i != n mod 2: (x+2) * b_i(x+3)
        same = Poly()     # i == n mod 2: (x+3) * b_i(x)
        plain = Poly()    # i != n mod 2: b_i(x)
        for i in range(n):
            if i % 2 != n % 2:
                shifted = shifted + Poly.linear(2) * b[i].shift(3)
                plain = plain + b[i]
            else:
                same = same + Poly.linear(3) * b[i]
        b.append(shifted + same + plain)
    return tuple(b[: n_max + 1])


def b_family(n_max: int) -> BoundFamily:
    if n_max < 0:
        raise BoundError("n_max must be nonnegative")
    return BoundFamily(_b_polys(n_max))


def b_poly(n: int) -> Poly:
    return b_family(n)[n]


@lru_cache(maxsize=None)
def _c_polys(n_max: int) -> tuple[Poly, ...]:
    c = [Poly.const(1), X]
    for n in range(2, n_max + 1):
        c.append(sum((ci.shift(3) for ci in c), Poly()) * Poly.linear(3))
    return tuple(c[: n_max + 1])


def c_family(n_max: int) -> BoundFamily:
    if n_max < 0:
        raise BoundError("n_max must be nonnegative")
    return BoundFamily(_c_polys(n_max))


def closed_form_bound(n: int) -> Poly:
    """(x + 3n - 3) * prod_{j=1}^{n-1} (x + 3j + 1), valid for n >= 3."""
    if n < 3:
        raise BoundError("closed form starts at n = 3; use b_0, b_1, b_2 directly")
    return Poly.linear(3 * n - 3) * prod(Poly.linear(3 * j + 1) for j in range(1, n))


def _closed_form_any(n: int) -> Poly:
    # also meaningful at n = 2, where it equals c_2 = (x+3)(x+4)
    return Poly.linear(3 * n - 3) * prod(Poly.linear(3 * j + 1) for j in range(1, n))


@dataclass
class ChainStep:
    n: int
    step: str
    certified: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"n": self.n, "step": self.step, "certified": self.certified}


@dataclass
class AppendixReport:
    n_max: int
    steps: list[ChainStep] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.certified for s in self.steps)

    def failures(self) -> list[ChainStep]:
        return [s for s in self.steps if not s.certified]

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.steps]


def verify_appendix_chain(n_max: int) -> AppendixReport:
    """Certify b_n <= c_n <= closed_form(n) on x >= 0 for 3 <= n <= n_max.

    Every inequality is checked by coefficient dominance of an expanded
    difference.  Inequalities for smaller n are carried forward by
    substituting x -> x + 3 and multiplying by polynomials with nonnegative
    coefficients, both of which preserve dominance.
    """
    if n_max < 3:
        raise BoundError("n_max must be at least 3")
    b = b_family(n_max)
    c = c_family(n_max)
    report = AppendixReport(n_max)

    # base cases b_i <= c_i for i <= 2 and c_2 = (x+3)(x+4) anchor the induction
    b_le_c = [poly_dominates(b[i], c[i]) for i in range(3)]
    c_le_closed = {2: c[2] == _closed_form_any(2)}

    for n in range(3, n_max + 1):
        # (i) b_n <= (sum_i b_i(x+3)) (x+3) <= (sum_i c_i(x+3)) (x+3) = c_n
        sum_b = sum((b[i].shift(3) for i in range(n)), Poly())
        sum_c = sum((c[i].shift(3) for i in range(n)), Poly())
        ok = (
            poly_dominates(b[n], sum_b * Poly.linear(3))
            and all(b_le_c[:n])
            and poly_dominates(sum_b, sum_c)
            and sum_c * Poly.linear(3) == c[n]
            and poly_dominates(b[n], c[n])
        )
        b_le_c.append(ok)
        report.steps.append(ChainStep(n, "b<=c", ok))

        # (ii) c_n = (S6 (x+6) + S3)(x+3) <= S6 (x+7)(x+3) <= S6 (x+6)(x+4) = c_{n-1}(x+3)(x+4)
        s3 = sum((c[i].shift(3) for i in range(n - 1)), Poly())
        s6 = sum((c[i].shift(6) for i in range(n - 1)), Poly())
        lhs = (s6 * Poly.linear(6) + s3) * Poly.linear(3)
        mid = s6 * Poly.linear(7) * Poly.linear(3)
        rhs = s6 * Poly.linear(6) * Poly.linear(4)
        target = c[n - 1].shift(3) * Poly.linear(4)
        ok = (
            lhs == c[n]
            and poly_dominates(s3, s6)
            and poly_dominates(lhs, mid)
            and poly_dominates(Poly.linear(7) * Poly.linear(3), Poly.linear(6) * Poly.linear(4))
            and s6.has_nonneg_coeffs()
            and poly_dominates(mid, rhs)
            and rhs == target
        )
        report.steps.append(ChainStep(n, "c-chain", ok))

        # (iii) c_n <= c_{n-1}(x+3)(x+4) <= F_{n-1}(x+3)(x+4) = F_n
        prev = _closed_form_any(n - 1)
        ok = (
            report.steps[-1].certified
            and c_le_closed[n - 1]
            and poly_dominates(c[n - 1].shift(3) * Poly.linear(4), prev.shift(3) * Poly.linear(4))
            and prev.shift(3) * Poly.linear(4) == closed_form_bound(n)
            and poly_dominates(c[n], closed_form_bound(n))
        )
        c_le_closed[n] = ok
        report.steps.append(ChainStep(n, "closed-form", ok))
    return report


def closed_form_grid_check(n: int, grid=None) -> bool:
    """Sampled nonnegativity of closed_form(n) - b_n; a diagnostic only."""
    return poly_nonneg_on_grid(closed_form_bound(n) - b_poly(n), grid)


def _check_common(lc: Fraction, rank: int) -> None:
    if lc < 0:
        raise BoundError("log conductor must be nonnegative")
    if not isinstance(rank, int) or rank < 1:
        raise BoundError("rank must be a positive integer")


def affine_betti_bound(n: int, i: int, lc_H: RatLike, rank: int) -> Fraction:
    """Upper bound b_i(lc_H) * rank for h^i of a local system on affine n-space."""
    lc_H = rat(lc_H)
    _check_common(lc_H, rank)
    if n < 0 or i < 0:
        raise BoundError("dimension and degree must be nonnegative")
    if i > n:
        return Fraction(0)
    return b_poly(i)(lc_H) * rank


def affine_betti_bound_compact(n: int, i: int, lc_H: RatLike, rank: int) -> Fraction:
    """Upper bound for compactly supported h_c^{2n-i}; zero when 2n-i < n."""
    return affine_betti_bound(n, i, lc_H, rank)


def affine_bound_table(n: int, lc_H: RatLike, rank: int, compact: bool = False) -> list[Fraction]:
    """Bounds for degrees 0..2n, ordinary or compactly supported cohomology."""
    out = []
    for deg in range(2 * n + 1):
        if compact:
            out.append(affine_betti_bound_compact(n, 2 * n - deg, lc_H, rank) if deg >= n else Fraction(0))
        else:
            out.append(affine_betti_bound(n, deg, lc_H, rank))
    return out


def chi_sandwich(n: int, lc_H: RatLike, rank: int) -> tuple[Fraction, Fraction]:
    """(lower, upper) bounds for the Euler characteristic on affine n-space."""
    if n < 2:
        raise BoundError("the sandwich needs n >= 2")
    lc = rat(lc_H)
    _check_common(lc, rank)
    b = b_family(n - 1)
    twisted = [(lc + 2) * b[i](lc + 3) for i in range(n)]
    untwisted = [(lc + 3) * b[i](lc) for i in range(n)]
    odd = range(1, n, 2)
    even = range(0, n, 2)
    upper = sum((twisted[i] for i in odd), Fraction(0)) + sum((untwisted[i] for i in even), Fraction(0))
    lower = sum((twisted[i] for i in even), Fraction(0)) + sum((untwisted[i] for i in odd), Fraction(0))
    return -lower * rank, upper * rank


def chi_twisted_sandwich(n: int, m: RatLike, rank: int) -> tuple[Fraction, Fraction]:
    """Euler-characteristic bounds after twisting by an Artin-Schreier sheaf of conductor m.

    The caller guarantees m > lc_H + 1.
    """
    if n < 2:
        raise BoundError("the sandwich needs n >= 2")
    m = rat(m)
    if m < 1:
        raise BoundError("m must be at least 1")
    _check_common(m, rank)
    b = b_family(n - 1)
    even = sum((b[i](m) for i in range(0, n, 2)), Fraction(0))
    odd = sum((b[i](m) for i in range(1, n, 2)), Fraction(0))
    return -even * (m - 1) * rank, odd * (m - 1) * rank


@dataclass(frozen=True)
class AssembledBound:
    n: int
    P: BoundFamily        # length 2n+1, per cohomological degree
    P_prime: BoundFamily  # length n+1, deg P'_i = i
    bounds: Optional[tuple[Fraction, ...]] = None  # P'_{min(j, 2n-j)}(mu) for j = 0..2n

    def folded(self, j: int) -> Poly:
        return self.P_prime[min(j, 2 * self.n - j)]


def assemble_bound_sequence(
    n: int, N: int, delta: int, alpha: int, mu_value: RatLike | None = None
) -> AssembledBound:
    """Bound polynomials for a family of relative dimension n with N-dimensional fibers.

    P_j = delta * b_{2N-j}(alpha + delta x) for N <= j <= 2N and 0 otherwise,
    then folded to P'_i = x^i + P_i + P_{2n-i}.
    """
    if n < 0 or N < 0:
        raise BoundError("dimensions must be nonnegative")
    if N > n:
        raise BoundError(f"fiber dimension N={N} exceeds relative dimension n={n}")
    if delta < 1:
        raise BoundError("generic degree delta must be positive")
    if alpha < 0 or int(alpha) != alpha:
        raise BoundError("alpha must be a nonnegative integer")
    b = b_family(2 * N)
    P = []
    for j in range(2 * n + 1):
        if N <= j <= 2 * N:
            P.append(b[2 * N - j].affine_substitute(alpha, delta) * delta)
        else:
            P.append(Poly())
    P_prime = [X**i + P[i] + P[2 * n - i] for i in range(n + 1)]
    for i, p in enumerate(P_prime):
        if p.degree != i:
            raise BoundError(f"folded polynomial P'_{i} has degree {p.degree}")
    bounds = None
    if mu_value is not None:
        mu = rat(mu_value)
        bounds = tuple(P_prime[min(j, 2 * n - j)](mu) for j in range(2 * n + 1))
    return AssembledBound(n, BoundFamily(tuple(P)), BoundFamily(tuple(P_prime)), bounds)


def alpha_from_conductor(lc: RatLike) -> int:
    """The integer alpha = ceil(lc) fed to assemble_bound_sequence."""
    lc = rat(lc)
    if lc < 0:
        raise BoundError("log conductor must be nonnegative")
    return ceil_rat(lc)


def perverse_fold(P_families: Sequence[BoundFamily]) -> BoundFamily:
    """Fold per-stratum Betti bounds into bounds for a perverse sheaf.

    ``P_families[i]`` is the bound family of the closed union of strata of
    dimension <= i.  With e_i = sum_{m=0}^{n-i} P^{i+m}_m and
    f_i = sum_{m=2i}^{n+i} P^{i+m}_{m-2i} (missing entries count as zero)
    the result is (e_n + f_n, ..., e_0 + f_0), whose entry k has degree k.
    """
    if not P_families:
        raise BoundError("need at least one stratum family")
    n = len(P_families) - 1

    def entry(k: int, idx: int) -> Poly:
        if k < 0 or idx < 0 or k > n:
            return Poly()
        return P_families[k].get(idx)

    out = []
    for i in range(n, -1, -1):
        e = sum((entry(i + m, m) for m in range(0, n - i + 1)), Poly())
        f = sum((entry(i + m, m - 2 * i) for m in range(2 * i, n + i + 1)), Poly())
        out.append(e + f)
    for k, p in enumerate(out):
        if p.degree != k:
            raise BoundError(
                f"malformed stratum families: folded entry {k} has degree {p.degree}, expected {k}"
            )
    return BoundFamily(tuple(out))


def curve_case_bound(g: int, num_points: int, lc: RatLike, rank: int, i: int) -> Fraction:
    """Betti bounds on an affine curve of genus g with num_points points at infinity."""
    lc = rat(lc)
    if g < 0:
        raise BoundError("genus must be nonnegative")
    if num_points < 1:
        raise BoundError("the curve must be affine: need at least one missing point")
    if lc < 0:
        raise BoundError("log conductor must be nonnegative")
    if rank < 0:
        raise BoundError("rank must be nonnegative")
    if i < 0:
        raise BoundError("degree must be nonnegative")
    if i == 0:
        return Fraction(rank)
    if i == 1:
        return (2 * g - 1 + num_points + num_points * lc) * rank
    return Fraction(0)
