"""
Tests for phase_ring.py

Covers deformation data validation, the bicharacter laws, Laurent and
rational-function arithmetic, and the exact linear solver.
"""
import os
import sys
from fractions import Fraction

import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from errors import DimensionMismatch, Inconsistent, NonLaurentNormalForm, ValidationError
from phase_ring import (
    DeformationData, Laurent, RationalFunction, chi, degree_add, linsolve,
)

q = Laurent.q_power(1)
ONE = Laurent.const(1)


def random_theta(rng, rank):
    rows = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        for j in range(i + 1, rank):
            v = rng.randint(-5, 5)
            rows[i][j] = v
            rows[j][i] = -v
    return DeformationData.from_matrix(rows)


def random_degree(rng, rank):
    return tuple(rng.randint(-5, 5) for _ in range(rank))


class TestDeformationData:
    """Test construction and validation of theta"""

    def test_from_matrix(self):
        """Test rank is taken from the matrix"""
        d = DeformationData.from_matrix([[0, 2], [-2, 0]])
        assert d.rank == 2
        assert d.theta == ((0, 2), (-2, 0))
        assert d.zero == (0, 0)

    def test_not_antisymmetric(self):
        """Test a symmetric entry is rejected"""
        with pytest.raises(ValidationError):
            DeformationData.from_matrix([[0, 1], [1, 0]])

    def test_nonzero_diagonal(self):
        """Test diagonal entries must vanish"""
        with pytest.raises(ValidationError):
            DeformationData.from_matrix([[1, 0], [0, -1]])

    def test_wrong_shape(self):
        """Test a ragged matrix raises DimensionMismatch"""
        with pytest.raises(DimensionMismatch):
            DeformationData(rank=2, theta=((0, 1),))

    def test_rank_must_be_positive(self):
        with pytest.raises(ValidationError):
            DeformationData.commutative(0)

    def test_check_degree_length(self, theta2):
        """Test degree vectors of the wrong length are rejected"""
        with pytest.raises(DimensionMismatch):
            theta2.check_degree((1, 0, 0))

    def test_pairing(self, theta2):
        """Test m^T theta m' on basis vectors"""
        assert theta2.pairing((1, 0), (0, 1)) == 1
        assert theta2.pairing((0, 1), (1, 0)) == -1
        assert theta2.pairing((1, 0), (1, 0)) == 0
        assert theta2.pairing((2, 1), (1, 3)) == 2 * 3 - 1 * 1

    def test_specialize_q1(self, theta2):
        assert theta2.specialize_q1() == DeformationData.commutative(2)


class TestBicharacter:
    """Test the bicharacter laws on random data"""

    def test_laws(self, rng):
        """Test multiplicativity in both slots and antisymmetry"""
        for _ in range(200):
            rank = rng.randint(1, 4)
            d = random_theta(rng, rank)
            m, m2, k, k2 = (random_degree(rng, rank) for _ in range(4))
            assert chi(d, degree_add(m, m2), k) == chi(d, m, k) * chi(d, m2, k)
            assert chi(d, m, degree_add(k, k2)) == chi(d, m, k) * chi(d, m, k2)
            assert chi(d, m, k) * chi(d, k, m) == ONE

    def test_zero_degree_is_trivial(self, theta2):
        """Test chi(0, m) = 1"""
        assert chi(theta2, (0, 0), (3, -2)) == ONE

    def test_value(self, theta2):
        assert chi(theta2, (1, 0), (0, 1)) == q
        assert chi(theta2, (0, 1), (1, 0)) == q ** -1


class TestLaurent:
    """Test Laurent polynomial arithmetic"""

    def test_product(self):
        assert (1 + q) * (1 - q) == 1 - q ** 2

    def test_zero_terms_dropped(self):
        """Test cancelled terms disappear"""
        assert (q - q).is_zero()
        assert Laurent({1: 1, 2: 0}) == q

    def test_unit_inverse(self):
        """Test single-term elements are units"""
        u = Laurent.q_power(-3, Fraction(2, 5))
        assert u.is_unit()
        assert u * u.inverse() == ONE

    def test_non_unit_inverse(self):
        """Test 1+q has no inverse in Q[q,q^-1]"""
        with pytest.raises(NonLaurentNormalForm):
            (1 + q).inverse()

    def test_negative_power_of_unit(self):
        assert q ** -2 == Laurent.q_power(-2)

    def test_exquo(self):
        """Test exact division"""
        assert (1 - q ** 2).exquo(1 + q) == 1 - q
        assert (q ** -1 - q).exquo(1 - q) == q ** -1 + 1

    def test_exquo_not_divisible(self):
        with pytest.raises(NonLaurentNormalForm):
            (1 + q ** 2).exquo(1 + q)

    def test_divides(self):
        assert (1 + q).divides(1 - q ** 2)
        assert not (1 + q).divides(1 + q ** 2)

    def test_gcd(self):
        """Test gcd is monic with lowest exponent 0"""
        a = (q - 1) * (q + 1)
        b = (q + 1) * (q + 1) * q ** 3
        assert a.gcd(b) == 1 + q
        assert q.gcd(1 + q) == ONE
        assert Laurent().gcd(Laurent()).is_zero()

    def test_normalized(self):
        assert Laurent({-2: 3, -1: 6}).normalized() == Laurent({0: Fraction(1, 2), 1: 1})

    def test_specialize_q1(self):
        assert (q ** -1 + 2 * q ** 3 - Fraction(1, 2)).specialize_q1() == Fraction(5, 2)

    def test_evaluate(self):
        assert (q ** -1 + q).evaluate(2) == Fraction(5, 2)

    def test_str(self):
        """Test text rendering, highest exponent first"""
        assert str(Laurent({-1: Fraction(3, 2), 2: 1})) == "q^2+3/2*q^-1"
        assert str(1 - q) == "-q+1"
        assert str(Laurent()) == "0"

    def test_equality_with_numbers(self):
        assert Laurent.const(3) == 3
        assert Laurent() == 0
        assert q != 1


class TestRationalFunction:
    """Test canonical fractions"""

    def test_cancellation(self):
        """Test (1-q^2)/(1-q) reduces to 1+q"""
        r = RationalFunction(1 - q ** 2, 1 - q)
        assert r.is_laurent()
        assert r.to_laurent() == 1 + q

    def test_unit_denominator_absorbed(self):
        r = RationalFunction(1 + q, 2 * q)
        assert r.is_laurent()
        assert r.to_laurent() == Laurent({-1: Fraction(1, 2), 0: Fraction(1, 2)})

    def test_non_laurent(self):
        r = RationalFunction(1, 1 + q)
        assert not r.is_laurent()
        with pytest.raises(NonLaurentNormalForm):
            r.to_laurent()

    def test_arithmetic(self):
        a = RationalFunction(1, 1 + q)
        b = RationalFunction(q, 1 + q)
        assert a + b == 1
        assert (a * (1 + q)) == 1
        assert a / a == 1
        assert a - a == 0

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            RationalFunction(1, 0)


def apply_rows(rows, x):
    out = []
    for row in rows:
        total = RationalFunction(0)
        for c, entry in enumerate(row):
            total = total + RationalFunction(entry) * RationalFunction.coerce(x[c])
        out.append(total)
    return out


class TestLinsolve:
    """Test exact elimination over Q(q)"""

    def test_unique_solution(self):
        sol = linsolve([[1, 1], [1, -1]], [2, 0])
        assert sol.nullity == 0
        assert sol.rank == 2
        assert sol.particular_laurent() == (ONE, ONE)

    def test_q_kernel(self):
        """Test the kernel of [q, 1] is primitive and normalized"""
        sol = linsolve([[q, 1]])
        assert sol.kernel == ((ONE, -q),)

    def test_inconsistent(self):
        with pytest.raises(Inconsistent) as exc:
            linsolve([[1, 1], [1, 1]], [1, 2])
        assert exc.value.index == 1

    def test_non_laurent_particular(self):
        """Test a solution outside Q[q,q^-1] is detected"""
        sol = linsolve([[1 + q]], [1])
        assert sol.particular[0] == RationalFunction(1, 1 + q)
        with pytest.raises(NonLaurentNormalForm):
            sol.particular_laurent()

    def test_sparse_rows(self):
        sol = linsolve([{0: 1}, {1: 2}], ncols=3)
        assert sol.rank == 2
        assert sol.kernel == ((Laurent(), Laurent(), ONE),)

    def test_sparse_needs_ncols(self):
        with pytest.raises(DimensionMismatch):
            linsolve([{0: 1}])

    def test_rhs_length(self):
        with pytest.raises(DimensionMismatch):
            linsolve([[1, 0]], [1, 2])

    def test_random_systems(self, rng):
        """Test particular and kernel vectors solve random consistent systems"""
        entries = [Laurent(), ONE, -ONE, q, 1 + q, 2 * q ** -1, q - q ** 2]
        for _ in range(30):
            nrows, ncols = rng.randint(1, 4), rng.randint(1, 5)
            rows = [[rng.choice(entries) for _ in range(ncols)] for _ in range(nrows)]
            x0 = [rng.choice(entries) for _ in range(ncols)]
            rhs = apply_rows(rows, x0)
            sol = linsolve(rows, rhs)
            assert apply_rows(rows, sol.particular) == rhs
            for vec in sol.kernel:
                assert all(v == 0 for v in apply_rows(rows, vec))
            assert sol.rank + sol.nullity == ncols
