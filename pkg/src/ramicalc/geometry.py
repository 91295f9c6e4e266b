"""Q-Weil divisors and the coherent-sheaf ledger Q[Coh(X)].

Coherent sheaves are represented by tokens carrying, for each fiber of a
family, the divisor of torsion lengths T at codimension-one points.  Fibers
are an explicit finite table supplied by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactmath import RatLike, format_rat, rat


class LedgerError(ValueError):
    pass


@dataclass(frozen=True, init=False)
class QWeilDivisor:
    items: tuple[tuple[str, Fraction], ...]

    def __init__(self, components: Mapping[str, RatLike] | Iterable[tuple[str, RatLike]] = ()):
        pairs = components.items() if isinstance(components, Mapping) else components
        acc: dict[str, Fraction] = {}
        for name, mult in pairs:
            if not isinstance(name, str) or not name:
                raise LedgerError(f"component names must be nonempty strings, got {name!r}")
            acc[name] = acc.get(name, Fraction(0)) + rat(mult)
        object.__setattr__(
            self, "items", tuple(sorted((k, v) for k, v in acc.items() if v != 0))
        )

    @property
    def components(self) -> dict[str, Fraction]:
        return dict(self.items)

    def __getitem__(self, name: str) -> Fraction:
        return self.components.get(name, Fraction(0))

    def __add__(self, other: "QWeilDivisor") -> "QWeilDivisor":
        return QWeilDivisor(self.items + other.items)

    def __neg__(self) -> "QWeilDivisor":
        return self.scale(-1)

    def __sub__(self, other: "QWeilDivisor") -> "QWeilDivisor":
        return self + (-other)

    def scale(self, c: RatLike) -> "QWeilDivisor":
        c = rat(c)
        return QWeilDivisor((k, c * v) for k, v in self.items)

    def __rmul__(self, c):
        return self.scale(c)

    def __bool__(self):
        return bool(self.items)

    def __str__(self):
        if not self.items:
            return "0"
        return " + ".join(f"{format_rat(v)}*{k}" for k, v in self.items)

    def to_json(self) -> dict:
        return {"components": {k: format_rat(v) for k, v in self.items}}

    @classmethod
    def from_json(cls, data) -> "QWeilDivisor":
        if not isinstance(data, dict) or not isinstance(data.get("components"), dict):
            raise LedgerError('divisor must look like {"components": {...}}')
        return cls(data["components"])


def divisor_arith(a: QWeilDivisor, b: QWeilDivisor | None, op: str, scalar: RatLike | None = None) -> QWeilDivisor:
    if op == "add":
        return a + b
    if op == "scale":
        if scalar is None:
            raise LedgerError("scale needs a scalar")
        return a.scale(scalar)
    raise LedgerError(f"unknown operation {op!r}")


def divisor_leq(a: QWeilDivisor, b: QWeilDivisor) -> bool:
    """Componentwise comparison; missing components count as 0."""
    names = set(a.components) | set(b.components)
    return all(a[k] <= b[k] for k in names)


def max_multiplicity(d: QWeilDivisor) -> Fraction:
    if not d.items:
        return Fraction(0)
    return max(v for _, v in d.items)


@dataclass(frozen=True, init=False)
class CoherentToken:
    """A coherent sheaf, known through its torsion-length divisor on each fiber."""

    name: str
    fibers: tuple[tuple[str, QWeilDivisor], ...]

    def __init__(self, name: str, fibers: Mapping[str, QWeilDivisor | Mapping[str, RatLike]]):
        if not fibers:
            raise LedgerError(f"token {name!r} needs at least one fiber")
        table = []
        for label, div in fibers.items():
            if not isinstance(div, QWeilDivisor):
                div = QWeilDivisor(div)
            if any(v < 0 for _, v in div.items):
                raise LedgerError(f"token {name!r}: torsion lengths must be nonnegative")
            table.append((label, div))
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "fibers", tuple(sorted(table, key=lambda lt: lt[0])))

    @property
    def fiber_labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.fibers)

    def fiber(self, label: str) -> QWeilDivisor:
        for lab, div in self.fibers:
            if lab == label:
                return div
        raise LedgerError(f"token {self.name!r} has no fiber {label!r}")

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for _, div in self.fibers for _, v in div.items)

    def to_json(self) -> dict:
        return {"name": self.name, "fibers": {lab: div.to_json() for lab, div in self.fibers}}

    @classmethod
    def from_json(cls, data) -> "CoherentToken":
        if not isinstance(data, dict) or "name" not in data or not isinstance(data.get("fibers"), dict):
            raise LedgerError('token must look like {"name": ..., "fibers": {...}}')
        return cls(data["name"], {k: QWeilDivisor.from_json(v) for k, v in data["fibers"].items()})


@dataclass(frozen=True, init=False)
class CoherentCombo:
    """A Q-linear combination of tokens; zero coefficients are dropped."""

    terms: tuple[tuple[CoherentToken, Fraction], ...]

    def __init__(self, terms: Mapping[CoherentToken, RatLike] | Iterable[tuple[CoherentToken, RatLike]] = ()):
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[CoherentToken, Fraction] = {}
        for tok, c in pairs:
            acc[tok] = acc.get(tok, Fraction(0)) + rat(c)
        kept = [(t, c) for t, c in acc.items() if c != 0]
        kept.sort(key=lambda tc: (tc[0].name, repr(tc[0].to_json())))
        object.__setattr__(self, "terms", tuple(kept))

    @classmethod
    def of(cls, token: CoherentToken, coeff: RatLike = 1) -> "CoherentCombo":
        return cls([(token, coeff)])

    def __add__(self, other: "CoherentCombo") -> "CoherentCombo":
        return CoherentCombo(self.terms + other.terms)

    def scale(self, c: RatLike) -> "CoherentCombo":
        c = rat(c)
        return CoherentCombo((t, c * k) for t, k in self.terms)

    def __rmul__(self, c):
        return self.scale(c)

    def __sub__(self, other: "CoherentCombo") -> "CoherentCombo":
        return self + other.scale(-1)

    def fiber_labels(self) -> tuple[str, ...]:
        labels: set[str] = set()
        for tok, _ in self.terms:
            labels.update(tok.fiber_labels)
        return tuple(sorted(labels))

    def to_json(self) -> dict:
        return {"terms": [{"coeff": format_rat(c), "token": t.to_json()} for t, c in self.terms]}

    @classmethod
    def from_json(cls, data) -> "CoherentCombo":
        if not isinstance(data, dict) or not isinstance(data.get("terms"), list):
            raise LedgerError('combo must look like {"terms": [...]}')
        try:
            return cls((CoherentToken.from_json(t["token"]), t["coeff"]) for t in data["terms"])
        except (KeyError, TypeError) as exc:
            raise LedgerError(f"malformed combo term: {exc}") from exc


def T_of(e: CoherentCombo, fiber: str) -> QWeilDivisor:
    """Torsion-length divisor of ``e`` on one fiber, extended linearly."""
    out = QWeilDivisor()
    for tok, c in e.terms:
        out = out + tok.fiber(fiber).scale(c)
    return out


def direct_sum_token(a: CoherentToken, b: CoherentToken) -> CoherentToken:
    if set(a.fiber_labels) != set(b.fiber_labels):
        raise LedgerError("direct sum needs tokens over the same fibers")
    return CoherentToken(
        f"{a.name}⊕{b.name}",
        {lab: a.fiber(lab) + b.fiber(lab) for lab in a.fiber_labels},
    )


def _mu_token(tok: CoherentToken) -> Fraction:
    return max(max_multiplicity(div) for _, div in tok.fibers)


def mu_f(e: CoherentCombo | CoherentToken) -> Fraction:
    """Largest multiplicity of T over all tabulated fibers, linear on combos."""
    if isinstance(e, CoherentToken):
        return _mu_token(e)
    if e.terms:
        labels = set(e.terms[0][0].fiber_labels)
        if any(set(t.fiber_labels) != labels for t, _ in e.terms):
            raise LedgerError("tokens of a combo must share their fiber set")
    return sum((c * _mu_token(t) for t, c in e.terms), Fraction(0))


def check_admissible(
    mu_values: Mapping[CoherentToken, RatLike],
    samples: Sequence[tuple[CoherentToken, CoherentToken]],
) -> bool:
    """Natural-number values and subadditivity on every sampled pair.

    Only meaningful for genuine (nonnegative) sheaves.
    """
    values = {t: rat(v) for t, v in mu_values.items()}
    if any(v < 0 or v.denominator != 1 for v in values.values()):
        return False
    for a, b in samples:
        s = direct_sum_token(a, b)
        missing = [t.name for t in (a, b, s) if t not in values]
        if missing:
            raise LedgerError(f"no mu value for {', '.join(missing)}")
        if values[s] > values[a] + values[b]:
            return False
    return True


def bounding_combo_for_local_system(lc_D: RatLike, token_O_D: CoherentToken) -> CoherentCombo:
    """The combo (lc_D + 1) * O_D bounding the log conductors of j_! L."""
    lc_D = rat(lc_D)
    if lc_D < 0:
        raise LedgerError("log conductor must be nonnegative")
    return CoherentCombo.of(token_O_D, lc_D + 1)


def check_lc_bounded(lc_along_curve: QWeilDivisor, pulled_T: QWeilDivisor) -> bool:
    return divisor_leq(lc_along_curve, pulled_T)
