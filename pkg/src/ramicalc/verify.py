"""Self-verification suites run by ``ramicalc verify``.

Each suite returns a list of named checks.  The random suite uses a fixed
seed so its report is reproducible byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import bettibounds as bb
from . import conductor as cd
from . import geometry as geo
from .curves import CurveSheafData, BadPoint, cc_coefficients, chi_from_cc, gos_chi, laumon_affine_line
from .exactmath import Poly
from .oracles import kunneth_betti, kunneth_chi, recursion_reference

SUITES = ("appendix", "sharpness", "invariants")
DEFAULT_SEED = 20240601


@dataclass
class Check:
    name: str
    passed: bool
    cases: int
    detail: str = ""

    def to_json(self) -> dict:
        out = {"check": self.name, "passed": self.passed, "cases": self.cases}
        if self.detail:
            out["detail"] = self.detail
        return out


def _run(name, cases):
    """Evaluate an iterable of (ok, description) pairs, stopping at the first failure."""
    count = 0
    for ok, desc in cases:
        count += 1
        if not ok:
            return Check(name, False, count, f"failed at {desc}")
    return Check(name, True, count)


def appendix_suite(n_max: int = 8) -> tuple[bb.AppendixReport, list[Check]]:
    report = bb.verify_appendix_chain(n_max)
    grid = _run(
        "closed-form-minus-b_n nonneg on grid",
        ((bb.closed_form_grid_check(n), f"n={n}") for n in range(3, n_max + 1)),
    )
    return report, [grid]


def sharpness_suite() -> list[Check]:
    b = bb.b_family(12)
    checks = [
        _run("deg b_i = i", ((b[i].degree == i, f"i={i}") for i in range(13))),
        _run(
            "b_i has nonnegative integer coefficients",
            ((b[i].has_nonneg_coeffs() and b[i].has_integer_coeffs(), f"i={i}") for i in range(13)),
        ),
        _run(
            "(m-1)^i <= b_i(m)",
            (
                (kunneth_betti(6, i, m) <= b[i](m), f"m={m}, i={i}")
                for m in range(2, 51)
                for i in range(7)
            ),
        ),
        _run(
            "kunneth_betti <= affine_betti_bound",
            (
                (kunneth_betti(n, i, m) <= bb.affine_betti_bound(n, i, m, 1), f"n={n}, i={i}, m={m}")
                for p in (2, 3, 5)
                for m in range(2, 51)
                if gcd(m, p) == 1
                for n in range(1, 7)
                for i in range(n + 1)
            ),
        ),
        _run(
            "kunneth_chi inside chi_sandwich",
            (
                (_inside(kunneth_chi(n, m), bb.chi_sandwich(n, m, 1)), f"n={n}, m={m}")
                for n in (2, 3, 4)
                for m in range(2, 21)
            ),
        ),
        _run(
            "Laumon gos_chi = 1 - m",
            (
                (gos_chi(laumon_affine_line(m, p)) == 1 - m, f"m={m}, p={p}")
                for p in (2, 3, 5)
                for m in range(2, 101)
                if m % p
            ),
        ),
        _run(
            "Laumon h^1 = m-1 <= curve bound",
            (
                (m - 1 <= bb.curve_case_bound(0, 1, m, 1, 1), f"m={m}")
                for m in range(2, 101)
            ),
        ),
        _run(
            "recursion_reference == b_family",
            ((Poly(recursion_reference(n)) == b[n], f"n={n}") for n in range(9)),
        ),
    ]
    return checks


def _inside(value, interval) -> bool:
    lo, hi = interval
    return lo <= value <= hi


def random_slopes(rng: random.Random, max_pieces: int = 4, min_slope: int = 0) -> list[tuple[Fraction, int]]:
    pieces = []
    for _ in range(rng.randint(1, max_pieces)):
        slope = Fraction(rng.randint(min_slope * 6, 60), rng.choice((1, 2, 3, 6)))
        pieces.append((max(slope, Fraction(min_slope)), rng.randint(1, 3)))
    return pieces


def random_module(rng: random.Random, perfect: bool | None = None) -> cd.GaloisModuleData:
    """A random module whose nonlog data, when present, satisfies the structural sandwiches.

    Nonlog pieces are built piecewise as log slope + t with t in [0, 1],
    clipped to be >= 1; this keeps both the conductor and total-dimension
    sandwiches valid.
    """
    if perfect is None:
        perfect = rng.random() < 0.5
    log = cd.SlopeDecomposition(random_slopes(rng))
    if perfect:
        return cd.GaloisModuleData(log.total_rank, log, None if rng.random() < 0.5 else log.shifted(1), True)
    if rng.random() < 0.3:
        return cd.GaloisModuleData(log.total_rank, log, None, False)
    pieces = []
    for s, r in log.pieces:
        t = Fraction(rng.randint(0, 4), 4)
        pieces.append((max(s + t, Fraction(1)), r))
    nonlog = cd.SlopeDecomposition(pieces)
    try:
        return cd.GaloisModuleData(log.total_rank, log, nonlog, False)
    except cd.ConductorError:
        # clipping at 1 can push dimtot above sw + rank for tame pieces; drop nonlog then
        return cd.GaloisModuleData(log.total_rank, log, None, False)


def conductor_invariant_cases(rng: random.Random, count: int):
    for k in range(count):
        m = random_module(rng)
        conds = cd.conductors(m)
        lo, hi = conds.c_bounds
        yield conds.lc <= lo <= hi <= conds.lc + 1, f"module {k}: lc <= c <= lc+1"
        sw = cd.swan(m)
        try:
            dt = cd.dimtot(m)
        except cd.NonlogUnavailable:
            dt = None
        if dt is not None:
            yield sw <= dt <= sw + m.rank, f"module {k}: sw <= dimtot <= sw+rank"
        if m.perfect_residue:
            yield conds.c == conds.lc + 1 and dt == sw + m.rank, f"module {k}: perfect collapse"

        other = random_module(rng, m.perfect_residue)
        s = cd.direct_sum(m, other)
        yield cd.swan(s) == sw + cd.swan(other), f"module {k}: swan additive"
        if dt is not None:
            try:
                dt_other = cd.dimtot(other)
            except cd.NonlogUnavailable:
                dt_other = None
            if dt_other is not None:
                yield cd.dimtot(s) == dt + dt_other, f"module {k}: dimtot additive"

        r = Fraction(rng.randint(0, 30), rng.choice((1, 2, 3)))
        s_ = Fraction(rng.randint(0, 30), rng.choice((1, 2, 3)))
        if r != s_:
            a = cd.GaloisModuleData.build([(r, rng.randint(1, 3))], perfect_residue=m.perfect_residue)
            b = cd.GaloisModuleData.build([(s_, rng.randint(1, 3))], perfect_residue=m.perfect_residue)
            t = cd.tensor_isoclinic(a, b, "log")
            yield cd.swan(t) == a.rank * b.rank * max(r, s_), f"module {k}: tensor rule"

        twist = cd.GaloisModuleData.build([(r, 1)], perfect_residue=m.perfect_residue)
        bounds = cd.swan_tensor_bounds(m, twist)
        if bounds.exact is not None:
            yield bounds.lower <= bounds.exact <= bounds.upper, f"module {k}: tensor bounds contain exact"


def random_token(rng: random.Random, name: str, labels=("s0", "s1", "s2"), comps=("D", "E", "F")) -> geo.CoherentToken:
    fibers = {}
    for lab in labels:
        fibers[lab] = {c: rng.randint(0, 6) for c in comps if rng.random() < 0.7}
    return geo.CoherentToken(name, fibers)


def ledger_invariant_cases(rng: random.Random, count: int):
    for k in range(count):
        a = random_token(rng, f"A{k}")
        b = random_token(rng, f"B{k}")
        s = geo.direct_sum_token(a, b)
        ca, cb = Fraction(rng.randint(-5, 5), rng.randint(1, 4)), Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        combo = geo.CoherentCombo([(a, ca), (b, cb)])
        for lab in a.fiber_labels:
            lin = geo.T_of(combo, lab) == a.fiber(lab).scale(ca) + b.fiber(lab).scale(cb)
            yield lin, f"pair {k}: T linear on {lab}"
            yield geo.T_of(geo.CoherentCombo.of(s), lab) == a.fiber(lab) + b.fiber(lab), f"pair {k}: T additive on {lab}"
        mus = {t: geo.mu_f(t) for t in (a, b, s)}
        yield all(v.denominator == 1 and v >= 0 for v in mus.values()), f"pair {k}: mu integral"
        yield mus[s] <= mus[a] + mus[b], f"pair {k}: mu subadditive"
        yield geo.check_admissible(mus, [(a, b)]), f"pair {k}: admissible"
        lc = Fraction(rng.randint(0, 20), rng.choice((1, 2, 3)))
        bound = geo.bounding_combo_for_local_system(lc, a)
        yield geo.mu_f(bound) == (lc + 1) * geo.mu_f(a), f"pair {k}: mu of bounding combo"


def curve_invariant_cases(rng: random.Random, count: int):
    for k in range(count):
        g = rng.randint(0, 4)
        d = _random_curve(rng, g, "P")
        e = _random_curve(rng, g, "Q")
        yield gos_chi(d + e) == gos_chi(d) + gos_chi(e), f"curve {k}: gos additive"
        yield gos_chi(d) == chi_from_cc(d), f"curve {k}: CC index identity"
        lisse = CurveSheafData(g, d.generic_rank)
        yield gos_chi(lisse) == (2 - 2 * g) * d.generic_rank, f"curve {k}: lisse chi"
        zero, fibers = cc_coefficients(d)
        yield zero == -d.generic_rank and len(fibers) == len(d.bad_points), f"curve {k}: CC shape"


def _random_curve(rng, g, prefix):
    pts = []
    for j in range(rng.randint(0, 3)):
        stalk = rng.randint(0, 3)
        pts.append(BadPoint(f"{prefix}{j}", Fraction(stalk) + Fraction(rng.randint(0, 20), rng.choice((1, 2))), stalk))
    return CurveSheafData(g, rng.randint(0, 4), tuple(pts))


def assembly_cases():
    for n in range(6):
        for N in range(n + 1):
            for delta in range(1, 5):
                for alpha in range(6):
                    res = bb.assemble_bound_sequence(n, N, delta, alpha)
                    yield all(p.degree == i for i, p in enumerate(res.P_prime)), f"n={n} N={N} d={delta} a={alpha}"


def invariants_suite(seed: int = DEFAULT_SEED) -> list[Check]:
    rng = random.Random(seed)
    return [
        _run("conductor calculus invariants", conductor_invariant_cases(rng, 1000)),
        _run("coherent ledger invariants", ledger_invariant_cases(rng, 500)),
        _run("curve formula invariants", curve_invariant_cases(rng, 200)),
        _run("assembled degrees deg P'_i = i", assembly_cases()),
        _run(
            "two-lines conductor cases",
            (
                (
                    cd.two_lines_curve_conductor(m, p, 1, 0) == m * p * p
                    and cd.two_lines_curve_conductor(m, p, 0, 1) == m + 1
                    and cd.two_lines_curve_conductor(m, p, 1, 1) == m * p * p + m + 1,
                    f"m={m} p={p}",
                )
                for m in (1, 3, 5)
                for p in (2, 3)
                if m % p
            ),
        ),
    ]


def run_suite(name: str, n_max: int = 8, seed: int = DEFAULT_SEED) -> dict:
    """Run one suite, or all of them, and return a JSON-ready report."""
    if name not in SUITES + ("all",):
        raise ValueError(f"unknown suite {name!r}")
    names = SUITES if name == "all" else (name,)
    out: dict = {"suite": name}
    checks: list[Check] = []
    passed = True
    for suite in names:
        if suite == "appendix":
            report, extra = appendix_suite(n_max)
            out["appendix"] = report.to_json()
            passed = passed and report.ok
            checks.extend(extra)
        elif suite == "sharpness":
            checks.extend(sharpness_suite())
        else:
            checks.extend(invariants_suite(seed))
    out["checks"] = [c.to_json() for c in checks]
    out["passed"] = passed and all(c.passed for c in checks)
    return out
