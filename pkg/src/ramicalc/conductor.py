"""Local ramification invariants of Galois modules.

Only the numerical shadow of a module is modeled: its rank and the multiset
of (slope, rank) pieces of its logarithmic and, optionally, non-logarithmic
slope decompositions.  From those we read off the Swan conductor, the total
dimension and the (log) conductors, and combine modules by direct sum and
tensor product.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .exactmath import RatLike, format_rat, rat


class ConductorError(ValueError):
    pass


class NonlogUnavailable(ConductorError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True, init=False)
class SlopeDecomposition:
    """Multiset of isoclinic pieces, kept sorted by slope.

    Pieces with equal slopes are merged on construction, so slopes are
    pairwise distinct afterwards.
    """

    pieces: tuple[tuple[Fraction, int], ...]

    def __init__(self, pieces: Iterable[tuple[RatLike, int]] = ()):
        merged: dict[Fraction, int] = {}
        for slope, rank in pieces:
            slope = rat(slope)
            if slope < 0:
                raise ConductorError(f"negative slope {format_rat(slope)}")
            if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
                raise ConductorError(f"piece rank must be a positive integer, got {rank!r}")
            merged[slope] = merged.get(slope, 0) + rank
        object.__setattr__(self, "pieces", tuple(sorted(merged.items())))

    @property
    def total_rank(self) -> int:
        return sum(r for _, r in self.pieces)

    @property
    def slopes(self) -> tuple[Fraction, ...]:
        return tuple(s for s, _ in self.pieces)

    def max_slope(self) -> Fraction:
        return self.pieces[-1][0] if self.pieces else Fraction(0)

    def weighted_sum(self) -> Fraction:
        return sum((s * r for s, r in self.pieces), Fraction(0))

    def is_isoclinic(self) -> bool:
        return len(self.pieces) == 1

    def shifted(self, t: RatLike) -> "SlopeDecomposition":
        t = rat(t)
        return SlopeDecomposition((s + t, r) for s, r in self.pieces)

    def __add__(self, other: "SlopeDecomposition") -> "SlopeDecomposition":
        return SlopeDecomposition(self.pieces + other.pieces)

    def to_json(self) -> list[dict]:
        return [{"slope": format_rat(s), "rank": r} for s, r in self.pieces]

    @classmethod
    def from_json(cls, data) -> "SlopeDecomposition":
        if not isinstance(data, list):
            raise ConductorError("slope decomposition must be a JSON array")
        try:
            return cls((item["slope"], item["rank"]) for item in data)
        except (KeyError, TypeError) as exc:
            raise ConductorError(f"malformed slope piece: {exc}") from exc


@dataclass(frozen=True)
class GaloisModuleData:
    rank: int
    log: SlopeDecomposition
    nonlog: Optional[SlopeDecomposition] = None
    perfect_residue: bool = False

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise ConductorError("rank must be a positive integer")
        if self.log.total_rank != self.rank:
            raise ConductorError(
                f"log pieces have total rank {self.log.total_rank}, expected {self.rank}"
            )
        if self.nonlog is not None:
            if self.nonlog.total_rank != self.rank:
                raise ConductorError(
                    f"nonlog pieces have total rank {self.nonlog.total_rank}, expected {self.rank}"
                )
            if any(s < 1 for s in self.nonlog.slopes):
                raise ConductorError("nonlog slopes must be >= 1")
            if self.perfect_residue and self.nonlog != self.log.shifted(1):
                raise ConductorError("perfect residue field forces nonlog = log shifted by 1")
            lc = self.log.max_slope()
            c = self.nonlog.max_slope()
            if not lc <= c <= lc + 1:
                raise ConductorError(
                    f"conductor {format_rat(c)} outside [lc, lc+1] = "
                    f"[{format_rat(lc)}, {format_rat(lc + 1)}]"
                )
            sw = self.log.weighted_sum()
            dt = self.nonlog.weighted_sum()
            if not sw <= dt <= sw + self.rank:
                raise ConductorError(
                    f"total dimension {format_rat(dt)} outside [sw, sw+rank]"
                )

    @classmethod
    def build(cls, log, nonlog=None, perfect_residue: bool = False) -> "GaloisModuleData":
        log = log if isinstance(log, SlopeDecomposition) else SlopeDecomposition(log)
        if nonlog is not None and not isinstance(nonlog, SlopeDecomposition):
            nonlog = SlopeDecomposition(nonlog)
        return cls(log.total_rank, log, nonlog, perfect_residue)

    @classmethod
    def trivial(cls, rank: int = 1, perfect_residue: bool = False) -> "GaloisModuleData":
        nonlog = SlopeDecomposition([(1, rank)]) if perfect_residue else None
        return cls(rank, SlopeDecomposition([(0, rank)]), nonlog, perfect_residue)

    def nonlog_data(self) -> Optional[SlopeDecomposition]:
        """Nonlog decomposition, derived from the log one when the residue field is perfect."""
        if self.nonlog is not None:
            return self.nonlog
        if self.perfect_residue:
            return self.log.shifted(1)
        return None

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "perfect_residue": self.perfect_residue,
            "log": self.log.to_json(),
            "nonlog": None if self.nonlog is None else self.nonlog.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "GaloisModuleData":
        if not isinstance(data, dict):
            raise ConductorError("module data must be a JSON object")
        try:
            rank = data["rank"]
            log = SlopeDecomposition.from_json(data["log"])
        except KeyError as exc:
            raise ConductorError(f"missing field {exc}") from exc
        raw_nonlog = data.get("nonlog")
        nonlog = None if raw_nonlog is None else SlopeDecomposition.from_json(raw_nonlog)
        perfect = data.get("perfect_residue", False)
        if not isinstance(perfect, bool):
            raise ConductorError("perfect_residue must be a boolean")
        return cls(rank, log, nonlog, perfect)


@dataclass(frozen=True)
class Conductors:
    """``c`` is None when only the sandwich ``c_bounds`` is known."""

    c: Optional[Fraction]
    c_bounds: tuple[Fraction, Fraction]
    lc: Fraction


def swan(m: GaloisModuleData) -> Fraction:
    return m.log.weighted_sum()


def dimtot(m: GaloisModuleData) -> Fraction:
    if m.nonlog is not None:
        return m.nonlog.weighted_sum()
    if m.perfect_residue:
        return swan(m) + m.rank
    raise NonlogUnavailable("nonlog data unavailable: supply nonlog pieces or perfect_residue")


def conductors(m: GaloisModuleData) -> Conductors:
    lc = m.log.max_slope()
    nonlog = m.nonlog_data()
    if nonlog is None:
        return Conductors(None, (lc, lc + 1), lc)
    c = nonlog.max_slope()
    return Conductors(c, (c, c), lc)


def direct_sum(a: GaloisModuleData, b: GaloisModuleData) -> GaloisModuleData:
    if a.perfect_residue != b.perfect_residue:
        raise ConductorError("cannot sum modules with different perfect_residue flags")
    if a.nonlog is not None and b.nonlog is not None:
        nonlog = a.nonlog + b.nonlog
    else:
        nonlog = None
    return GaloisModuleData(a.rank + b.rank, a.log + b.log, nonlog, a.perfect_residue)


def dual(m: GaloisModuleData) -> GaloisModuleData:
    # A module and its dual share their slopes.
    return GaloisModuleData(m.rank, m.log, m.nonlog, m.perfect_residue)


def _isoclinic_product(x: SlopeDecomposition, y: SlopeDecomposition, rank: int):
    """Slope data of the tensor of two isoclinic pieces of distinct slopes, or None."""
    if not (x.is_isoclinic() and y.is_isoclinic()):
        return None
    if x.max_slope() == y.max_slope():
        return None
    return SlopeDecomposition([(max(x.max_slope(), y.max_slope()), rank)])


def tensor_isoclinic(m: GaloisModuleData, n: GaloisModuleData, mode: str = "log") -> GaloisModuleData:
    """Tensor product of two isoclinic modules with distinct slopes.

    In ``log`` mode the log decompositions must be isoclinic; the result is
    isoclinic at the larger slope with rank ``rk(m) * rk(n)``.  The other
    decomposition of the result is filled in when the residue field is
    perfect or when that side is also determined by the same rule.
    """
    if mode not in ("log", "nonlog"):
        raise ConductorError(f"unknown mode {mode!r}")
    if m.perfect_residue != n.perfect_residue:
        raise ConductorError("cannot tensor modules with different perfect_residue flags")
    rank = m.rank * n.rank
    perfect = m.perfect_residue

    if mode == "log":
        x, y = m.log, n.log
    else:
        x, y = m.nonlog_data(), n.nonlog_data()
        if x is None or y is None:
            raise NonlogUnavailable("nonlog data unavailable for nonlog tensor")
    if not (x.is_isoclinic() and y.is_isoclinic()):
        raise ConductorError(f"not isoclinic in {mode} mode")
    if x.max_slope() == y.max_slope():
        raise ConductorError(
            "equal slopes: result indeterminate, use swan_tensor_bounds"
        )
    main = _isoclinic_product(x, y, rank)

    if mode == "log":
        if perfect:
            return GaloisModuleData(rank, main, None, True)
        other = None
        if m.nonlog is not None and n.nonlog is not None:
            other = _isoclinic_product(m.nonlog, n.nonlog, rank)
        return GaloisModuleData(rank, main, other, False)

    if perfect:
        return GaloisModuleData(rank, main.shifted(-1), None, True)
    log = _isoclinic_product(m.log, n.log, rank)
    if log is None:
        raise ConductorError(
            "log slopes of the nonlog tensor are undetermined without a perfect residue field"
        )
    return GaloisModuleData(rank, log, main, False)


@dataclass(frozen=True)
class SwanTensorBounds:
    lower: Fraction
    upper: Fraction
    exact: Optional[Fraction]


def swan_tensor_bounds(
    m: GaloisModuleData, n: GaloisModuleData, non_cancellation: bool = True
) -> SwanTensorBounds:
    """Bounds on sw(M (x) N) for a rank-one N of log slope r.

    The bounds ``sw(M) <= sw(M (x) N) <= sw(M) + r * rk(M)`` hold when the
    character of N inverted does not occur in the slope-r part of M; the
    caller vouches for that through ``non_cancellation``.  When no log slope
    of M equals r the value is exact: each piece of slope s moves to
    max(s, r).
    """
    if n.rank != 1:
        raise ConductorError("second factor must have rank 1")
    if not non_cancellation:
        raise ConductorError("bounds need the non-cancellation hypothesis")
    r = n.log.max_slope()
    sw = swan(m)
    lower, upper = sw, sw + r * m.rank
    exact = None
    if r not in m.log.slopes:
        exact = sum((max(s, r) * k for s, k in m.log.pieces), Fraction(0))
    return SwanTensorBounds(lower, upper, exact)


def artin_schreier_conductor(m: int, p: int, perfect_residue: bool = False) -> GaloisModuleData:
    """Rank-one Artin-Schreier module whose defining pole has order m prime to p."""
    if not is_prime(p):
        raise ConductorError(f"{p} is not prime")
    if m < 1:
        raise ConductorError("m must be a positive integer")
    if m % p == 0:
        raise ConductorError(f"p={p} divides m={m}; reduce the exponent first")
    log = SlopeDecomposition([(m, 1)])
    nonlog = None if perfect_residue else SlopeDecomposition([(m + 1, 1)])
    return GaloisModuleData(1, log, nonlog, perfect_residue)


def two_lines_curve_conductor(m: int, p: int, alpha: int, beta: int) -> Fraction:
    """Conductor at s of the Artin-Schreier sheaf restricted to a curve.

    alpha and beta are the multiplicities of the pulled-back lines D and E
    at s; the sheaf's conductor divisor is m p^2 D + (m+1) E.
    """
    if not is_prime(p):
        raise ConductorError(f"{p} is not prime")
    if m < 1:
        raise ConductorError("m must be a positive integer")
    if m % p == 0:
        raise ConductorError(f"p={p} divides m={m}")
    if alpha < 0 or beta < 0:
        raise ConductorError("multiplicities must be nonnegative")
    if alpha == 0 and beta == 0:
        raise ConductorError("the point must lie on D or E")
    return Fraction(m * p * p * alpha + (m + 1) * beta)


def two_lines_divisor(m: int, p: int) -> dict[str, Fraction]:
    """Conductor divisor coefficients on the two lines, read off at unit multiplicities."""
    return {
        "D": two_lines_curve_conductor(m, p, 1, 0),
        "E": two_lines_curve_conductor(m, p, 0, 1),
    }


def finite_direct_image_lc_bound(lc_trivial: RatLike, d: int, lc_E: RatLike) -> Fraction:
    """Bound on the log conductor of a finite direct image of degree d."""
    lc_trivial, lc_E = rat(lc_trivial), rat(lc_E)
    if lc_trivial < 0 or lc_E < 0:
        raise ConductorError("conductors must be nonnegative")
    if d < 1:
        raise ConductorError("degree must be positive")
    return lc_trivial + d * lc_E
