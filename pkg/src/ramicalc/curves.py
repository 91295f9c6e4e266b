"""Euler characteristics and characteristic cycles of sheaves on curves."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .bettibounds import curve_case_bound
from .conductor import artin_schreier_conductor, dimtot
from .exactmath import RatLike, format_rat, rat


class CurveDataError(ValueError):
    pass


@dataclass(frozen=True)
class BadPoint:
    label: str
    dimtot: Fraction
    stalk_rank: int

    def __post_init__(self):
        object.__setattr__(self, "dimtot", rat(self.dimtot))
        if not isinstance(self.stalk_rank, int) or self.stalk_rank < 0:
            raise CurveDataError(f"{self.label}: stalk rank must be a nonnegative integer")
        if self.dimtot < self.stalk_rank:
            raise CurveDataError(f"{self.label}: dimtot must be at least the stalk rank")

    @property
    def penalty(self) -> Fraction:
        return self.dimtot - self.stalk_rank


@dataclass(frozen=True)
class CurveSheafData:
    genus: int
    generic_rank: int
    bad_points: tuple[BadPoint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "bad_points", tuple(self.bad_points))
        if not isinstance(self.genus, int) or self.genus < 0:
            raise CurveDataError("genus must be a nonnegative integer")
        if not isinstance(self.generic_rank, int) or self.generic_rank < 0:
            raise CurveDataError("generic rank must be a nonnegative integer")
        labels = [p.label for p in self.bad_points]
        if len(set(labels)) != len(labels):
            raise CurveDataError("bad point labels must be distinct")

    def __add__(self, other: "CurveSheafData") -> "CurveSheafData":
        """Data of the direct sum: ranks, dimtots and stalk ranks add pointwise."""
        if self.genus != other.genus:
            raise CurveDataError("sheaves live on curves of different genus")
        merged: dict[str, tuple[Fraction, int]] = {}
        for p in self.bad_points + other.bad_points:
            d, s = merged.get(p.label, (Fraction(0), 0))
            merged[p.label] = (d + p.dimtot, s + p.stalk_rank)
        pts = tuple(BadPoint(k, d, s) for k, (d, s) in sorted(merged.items()))
        return CurveSheafData(self.genus, self.generic_rank + other.generic_rank, pts)

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "generic_rank": self.generic_rank,
            "bad_points": [
                {"label": p.label, "dimtot": format_rat(p.dimtot), "stalk_rank": p.stalk_rank}
                for p in self.bad_points
            ],
        }

    @classmethod
    def from_json(cls, data) -> "CurveSheafData":
        if not isinstance(data, dict):
            raise CurveDataError("curve data must be a JSON object")
        try:
            pts = [
                BadPoint(str(p.get("label", f"x{k}")), rat(p["dimtot"]), p["stalk_rank"])
                for k, p in enumerate(data.get("bad_points", []))
            ]
            return cls(data["genus"], data["generic_rank"], tuple(pts))
        except (KeyError, TypeError, AttributeError) as exc:
            raise CurveDataError(f"malformed curve data: {exc}") from exc


def laumon_affine_line(m: int, p: int) -> CurveSheafData:
    """j_! of the Artin-Schreier sheaf t^p - t = x^m on the affine line."""
    local = artin_schreier_conductor(m, p)
    return CurveSheafData(0, 1, (BadPoint("inf", dimtot(local), 0),))


def gos_chi(d: CurveSheafData) -> Fraction:
    """(2 - 2g) * generic rank - sum of (dimtot - stalk rank) over bad points."""
    return (2 - 2 * d.genus) * d.generic_rank - sum(
        (p.penalty for p in d.bad_points), Fraction(0)
    )


def cc_coefficients(d: CurveSheafData) -> tuple[Fraction, list[tuple[str, Fraction]]]:
    """Coefficients of the zero section and of each cotangent fiber in CC."""
    return Fraction(-d.generic_rank), [(p.label, -p.penalty) for p in d.bad_points]


def chi_from_cc(d: CurveSheafData) -> Fraction:
    # intersection with the zero section: the zero section self-intersects
    # with degree 2g-2, each fiber meets it once
    zero, fibers = cc_coefficients(d)
    return (2 - 2 * d.genus) * (-zero) + sum((c for _, c in fibers), Fraction(0))


def affine_curve_betti(d: CurveSheafData, lc_max: RatLike, num_points: int, i: int) -> Fraction:
    return curve_case_bound(d.genus, num_points, lc_max, d.generic_rank, i)
