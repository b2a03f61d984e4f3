"""Rationality checks, the Diophantine search, and the descent certificate."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import abelian
from qelie.catalog import make_heisenberg, make_n6a
from qelie.errors import BadParams, NotApplicable
from qelie.lattice import (
    diophantine_search,
    mod3_descent_certificate,
    n6a_lattice_obstruction,
    n7a_lattice_obstruction,
    rational_structure_check,
)


class TestRationalStructureCheck:
    def test_h5_rational(self):
        rep = rational_structure_check(make_heisenberg(2, 1).algebra, 10 ** 6)
        assert rep.all_rational
        assert rep.verdict == "rational"
        assert np.allclose(rep.witness_basis, np.eye(5))

    def test_abelian_rational(self):
        assert rational_structure_check(abelian(3), 10).all_rational

    def test_n6a_floats_rejected(self):
        # sqrt(1/2) and sqrt(5/2) are not within 1e-12 (relative) of any
        # fraction with denominator <= 10^6
        rep = rational_structure_check(make_n6a(1, 2).algebra, 10 ** 6)
        assert not rep.all_rational
        assert rep.verdict == "unknown"

    def test_sqrt_half_margin(self):
        # the best denominator <= 10^6 fraction to sqrt(1/2) (a Pell-related
        # semiconvergent) is off by ~8e-13 absolute = 1.13e-12 relative: the
        # relative 1e-12 criterion rejects it, an absolute one would not
        x = np.sqrt(0.5)
        q = Fraction(x).limit_denominator(10 ** 6)
        assert q == Fraction(665857, 941664)
        rel = abs(x - float(q)) / x
        assert 1e-12 < rel < 1.3e-12

    def test_float_mode_accepts_true_rationals(self):
        L = make_heisenberg(1, 0.5).algebra  # float c gives float mode
        assert not L.exact
        rep = rational_structure_check(L, 100)
        assert rep.all_rational

    def test_deterministic_and_basis_order_independent(self):
        L = make_heisenberg(2, Fraction(3, 7)).algebra
        r1 = rational_structure_check(L, 10 ** 6)
        r2 = rational_structure_check(L, 10 ** 6)
        assert r1.all_rational == r2.all_rational == True  # noqa: E712


class TestDiophantineSearch:
    def test_obstructed_equation_empty(self):
        assert diophantine_search(1, 3, 2, 1000) == []

    def test_obstructed_equation_empty_at_2000(self):
        assert diophantine_search(1, 3, 2, 2000) == []

    def test_sum_of_squares(self):
        sols = diophantine_search(1, 1, 2, 10)
        assert (1, 1, 1) in sols
        assert all(max(abs(x), abs(y), abs(z)) > 0 for x, y, z in sols)

    def test_one_three_one(self):
        sols = diophantine_search(1, 3, 1, 10)
        assert (1, 1, 2) in sols

    def test_solutions_satisfy_equation(self):
        for (p, q, r) in [(1, 1, 2), (1, 3, 1), (2, 3, 5), (1, 1, 1)]:
            for (x, y, z) in diophantine_search(p, q, r, 15):
                assert p * x * x + q * y * y == r * z * z

    @settings(max_examples=30, deadline=None)
    @given(p=st.integers(1, 5), q=st.integers(1, 5), r=st.integers(1, 5),
           bound=st.integers(1, 12))
    def test_matches_pure_python_bruteforce(self, p, q, r, bound):
        expected = sorted(
            (x, y, z)
            for x in range(-bound, bound + 1)
            for y in range(-bound, bound + 1)
            for z in range(-bound, bound + 1)
            if max(abs(x), abs(y), abs(z)) > 0
            and p * x * x + q * y * y == r * z * z)
        assert diophantine_search(p, q, r, bound) == expected

    def test_bad_params(self):
        with pytest.raises(BadParams):
            diophantine_search(0, 1, 1, 10)
        with pytest.raises(BadParams):
            diophantine_search(1, 1, 1, 0)
        with pytest.raises(BadParams):
            diophantine_search(1, 1, 1, 10 ** 10)  # 64-bit width guard


class TestMod3Certificate:
    def test_certificate_contents(self):
        cert = mod3_descent_certificate(1, 3, 2)
        assert cert.squares_mod_3 == (0, 1)
        assert cert.residue_table == ((0, 0),)
        assert cert.forces_divisibility
        assert cert.valuation_parity == {"x^2": "even", "3*y^2": "odd",
                                         "2*z^2": "even"}
        assert cert.validated

    def test_not_applicable_when_solvable(self):
        with pytest.raises(NotApplicable):
            mod3_descent_certificate(1, 1, 2)

    def test_corroborated_by_search(self):
        cert = mod3_descent_certificate(1, 3, 2)
        assert cert.validated
        assert diophantine_search(1, 3, 2, 2000) == []


class TestFamilyObstructions:
    def test_n6a_obstructed(self):
        rep = n6a_lattice_obstruction(1, 2)
        assert not rep.all_rational
        assert rep.verdict == "obstructed"
        ob = rep.obstruction
        assert ob.equation == (1, 3, 2)
        assert ob.verdict == "no-nonzero-solution-up-to-bound"
        assert ob.bound == 1000
        assert ob.search_solutions == []
        assert ob.certificate.validated

    def test_float_inputs_rejected(self):
        with pytest.raises(BadParams):
            n6a_lattice_obstruction(1, np.sqrt(3.0))
        with pytest.raises(BadParams):
            n6a_lattice_obstruction(0.5, 2)

    def test_rational_strings_accepted(self):
        rep = n6a_lattice_obstruction("1/2", "2", bound=50)
        assert rep.verdict == "obstructed"

    def test_constraint_checked(self):
        with pytest.raises(BadParams):
            n6a_lattice_obstruction(1, 1)

    def test_n7a_same_reduction(self):
        rep = n7a_lattice_obstruction(1, 2)
        assert rep.verdict == "obstructed"
        assert rep.obstruction.equation == (1, 3, 2)
        assert "d^2 + 3*e^2 = 2*c^2" in rep.obstruction.reduction

    def test_n7a_zero_a_rejected(self):
        with pytest.raises(BadParams):
            n7a_lattice_obstruction(0, 1)

    def test_reduction_identity(self):
        # the two squared radicals really satisfy b12^2 + 3 b^2 = 2 c^2
        for (a, c) in [(1, 2), (Fraction(1, 2), 1), (2, 4)]:
            b12_sq = (Fraction(c) ** 2 - 3 * Fraction(a) ** 2) / 2
            b_sq = (Fraction(c) ** 2 + Fraction(a) ** 2) / 2
            assert b12_sq + 3 * b_sq == 2 * Fraction(c) ** 2

    def test_n7a_reduction_identity(self):
        for (a, c) in [(1, 2), (1, 3)]:
            e_sq = (Fraction(a) ** 2 + Fraction(c) ** 2) / 2
            d_sq = (Fraction(c) ** 2 - 3 * Fraction(a) ** 2) / 2
            assert d_sq + 3 * e_sq == 2 * Fraction(c) ** 2
