from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ramicalc.geometry import (
    CoherentCombo,
    CoherentToken,
    LedgerError,
    QWeilDivisor,
    T_of,
    bounding_combo_for_local_system,
    check_admissible,
    check_lc_bounded,
    direct_sum_token,
    divisor_arith,
    divisor_leq,
    max_multiplicity,
    mu_f,
)

F = Fraction
D = QWeilDivisor


def test_divisor_arith():
    assert divisor_arith(D({"D": 2}), D({"E": 3}), "add") == D({"D": 2, "E": 3})
    assert divisor_arith(D({"D": 2}), None, "scale", F(1, 2)) == D({"D": 1})
    assert divisor_arith(D({"D": 2}), D({"D": -2}), "add") == D()
    assert D({"D": 0}).items == ()


def test_divisor_names():
    with pytest.raises(LedgerError):
        D({"": 1})


def test_divisor_leq():
    assert divisor_leq(D({"D": 2}), D({"D": 2, "E": 1}))
    assert not divisor_leq(D({"D": 3}), D({"D": 2}))
    assert divisor_leq(D(), D({"D": 4}))


def test_max_multiplicity():
    assert max_multiplicity(D({"D": 2, "E": F(7, 2)})) == F(7, 2)
    assert max_multiplicity(D()) == 0
    m, p = 3, 2
    assert max_multiplicity(D({"D": m * p * p, "E": m + 1})) == 12


def test_T_of():
    O_D = CoherentToken("O_D", {"s0": {"D": 1}})
    lc = F(5, 2)
    assert T_of(CoherentCombo.of(O_D, lc + 1), "s0") == D({"D": lc + 1})
    assert T_of(CoherentCombo(), "s0") == D()
    A = CoherentToken("A", {"s0": {"D": 3}})
    B = CoherentToken("B", {"s0": {"D": 1}})
    assert T_of(CoherentCombo([(A, 2), (B, -1)]), "s0") == D({"D": 5})
    with pytest.raises(LedgerError):
        T_of(CoherentCombo.of(A), "s9")


def test_direct_sum_token():
    A = CoherentToken("A", {"s0": {"D": 2}})
    B = CoherentToken("B", {"s0": {"E": 1}})
    assert direct_sum_token(A, B).fiber("s0") == D({"D": 2, "E": 1})
    assert direct_sum_token(A, A).fiber("s0") == D({"D": 4})
    C = CoherentToken("C", {"s0": {"D": 3}})
    s = direct_sum_token(A, C)
    assert max_multiplicity(s.fiber("s0")) == 5 <= max_multiplicity(A.fiber("s0")) + max_multiplicity(C.fiber("s0"))
    with pytest.raises(LedgerError):
        direct_sum_token(A, CoherentToken("Z", {"s1": {"D": 1}}))


def test_token_invariants():
    with pytest.raises(LedgerError):
        CoherentToken("A", {})
    with pytest.raises(LedgerError):
        CoherentToken("A", {"s0": {"D": -1}})


def test_mu_f():
    tok = CoherentToken("T", {"s1": {"D": 2}, "s2": {"E": 5}})
    assert mu_f(tok) == 5
    assert mu_f(CoherentCombo.of(tok, F(3, 2))) == F(15, 2)
    A = CoherentToken("A", {"s1": {"D": 2}, "s2": {}})
    B = CoherentToken("B", {"s1": {"E": 3}, "s2": {}})
    s = direct_sum_token(A, B)
    assert mu_f(s) == 3 <= mu_f(A) + mu_f(B) == 5


def test_mu_f_fiber_mismatch():
    A = CoherentToken("A", {"s1": {"D": 2}})
    B = CoherentToken("B", {"s2": {"D": 2}})
    with pytest.raises(LedgerError):
        mu_f(CoherentCombo([(A, 1), (B, 1)]))


class TestAdmissible:
    A = CoherentToken("A", {"s0": {"D": 2}, "s1": {"E": 1}})
    B = CoherentToken("B", {"s0": {"E": 4}, "s1": {"D": 3}})

    def values(self):
        s = direct_sum_token(self.A, self.B)
        return {t: mu_f(t) for t in (self.A, self.B, s)}, s

    def test_mu_f_admissible(self):
        vals, _ = self.values()
        assert check_admissible(vals, [(self.A, self.B)])

    def test_non_integer(self):
        vals, _ = self.values()
        vals[self.A] = F(1, 2)
        assert not check_admissible(vals, [(self.A, self.B)])

    def test_violation(self):
        vals, s = self.values()
        vals[s] = vals[self.A] + vals[self.B] + 1
        assert not check_admissible(vals, [(self.A, self.B)])

    def test_missing(self):
        vals, s = self.values()
        del vals[s]
        with pytest.raises(LedgerError):
            check_admissible(vals, [(self.A, self.B)])


def test_bounding_combo():
    O_D = CoherentToken("O_D", {"s0": {"D": 1}})
    assert bounding_combo_for_local_system(0, O_D) == CoherentCombo.of(O_D, 1)
    assert bounding_combo_for_local_system(F(5, 2), O_D) == CoherentCombo.of(O_D, F(7, 2))
    lc = F(4, 3)
    assert mu_f(bounding_combo_for_local_system(lc, O_D)) == (lc + 1) * mu_f(O_D)
    with pytest.raises(LedgerError):
        bounding_combo_for_local_system(-1, O_D)


def test_check_lc_bounded():
    assert check_lc_bounded(D({"x": 3}), D({"x": F(7, 2)}))
    assert not check_lc_bounded(D({"x": 4}), D({"x": F(7, 2)}))
    for m in range(1, 20):
        assert check_lc_bounded(D({"x": m}), D({"x": 1}).scale(m + 1))


def test_json_roundtrip():
    A = CoherentToken("A", {"s0": {"D": 3, "E": F(5, 2)}})
    combo = CoherentCombo([(A, F(7, 2))])
    data = combo.to_json()
    assert data["terms"][0]["coeff"] == "7/2"
    assert data["terms"][0]["token"]["fibers"]["s0"] == {"components": {"D": "3", "E": "5/2"}}
    assert CoherentCombo.from_json(data) == combo
    with pytest.raises(LedgerError):
        CoherentCombo.from_json({"terms": [{"coeff": "1"}]})


names = st.sampled_from(["D", "E", "F", "G"])
divisors = st.dictionaries(names, st.fractions(min_value=-10, max_value=10, max_denominator=4)).map(D)
nat_divisors = st.dictionaries(names, st.integers(0, 9)).map(D)
labels = ("s0", "s1")
tokens = st.tuples(st.text("ABC", min_size=1, max_size=3), nat_divisors, nat_divisors).map(
    lambda t: CoherentToken(t[0], {"s0": t[1], "s1": t[2]})
)
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@given(tokens, tokens, coeffs, coeffs)
def test_T_linear(a, b, x, y):
    for lab in labels:
        lhs = T_of(CoherentCombo([(a, x)]) + CoherentCombo([(b, y)]), lab)
        assert lhs == T_of(CoherentCombo.of(a), lab).scale(x) + T_of(CoherentCombo.of(b), lab).scale(y)


@given(tokens, tokens)
def test_T_additive_and_mu_subadditive(a, b):
    s = direct_sum_token(a, b)
    for lab in labels:
        assert s.fiber(lab) == a.fiber(lab) + b.fiber(lab)
    assert mu_f(s) <= mu_f(a) + mu_f(b)
    assert mu_f(a).denominator == 1 and mu_f(a) >= 0


@given(divisors)
def test_leq_reflexive(a):
    assert divisor_leq(a, a)


@given(divisors, divisors)
def test_leq_antisymmetric(a, b):
    if divisor_leq(a, b) and divisor_leq(b, a):
        assert a == b


@given(divisors, divisors, divisors)
def test_leq_transitive(a, b, c):
    if divisor_leq(a, b) and divisor_leq(b, c):
        assert divisor_leq(a, c)
