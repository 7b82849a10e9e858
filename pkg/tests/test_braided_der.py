"""
Tests for braided_der.py

Covers the braided partial derivatives, admissible derivation bases, the
derivation bracket and the comparison map xi against T_eAut.
"""
import os
import sys

import pytest
import sympy

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from braided_der import (
    BraidedDerivation, JStageVector, bracket_tensor, der_basis, der_bracket,
    derivation_components, derivation_degree, derivation_from_dict, derivation_to_dict,
    ev, j_stage_basis, partial, psi, validate_braided_derivation, verify_xi_iso, xi,
)
from comodule_algebra import INHOMOGENEOUS, FreeAlgebra, GeneratorSpec
from errors import DegreeError, InvalidGenerator, LeibnizViolation, NotCoinvariant
from mapping_aut import HDerivation, hder_bracket
from phase_ring import DeformationData, Laurent, chi, degree_add, degree_neg, degree_sub
from presentations import standard_monomials

q = Laurent.q_power(1)
Q = sympy.Symbol("q")


def naive_partial(alg, j, a):
    """∂_j(g_1...g_n) = sum over g_i = x_j of chi(deg g_1...g_{i-1}, -m_j) g_1...g_{i-1} g_{i+1}...g_n."""
    d = alg.deformation
    minus_mj = degree_neg(alg.degree(j))
    out = alg.zero()
    for mono, c in a.items():
        word = [i for i, k in enumerate(mono) for _ in range(k)]
        for pos, letter in enumerate(word):
            if letter != j:
                continue
            prefix = d.zero
            left = alg.one()
            for i in word[:pos]:
                prefix = degree_add(prefix, alg.degree(i))
                left = left * alg.gen(i)
            right = alg.one()
            for i in word[pos + 1:]:
                right = right * alg.gen(i)
            out = out + (left * right).scale(c * chi(d, prefix, minus_mj))
    return out


def naive_ev(p, coeffs, a):
    a = p.element(a)
    out = p.algebra.zero()
    for j, c in enumerate(coeffs):
        out = out + c * naive_partial(p.algebra, j, a)
    return p.reduce(out)


def to_sympy(value):
    return sum((sympy.Rational(c.numerator, c.denominator) * Q ** k for k, c in value.items()), sympy.Integer(0))


def naive_der_dimension(p, degree, cap):
    """Admissible derivations of one degree, by rank of the relation images over Q(q)."""
    alg = p.algebra
    unknowns = [
        (j, u) for j in range(p.ngens) for u in standard_monomials(p, None, cap)
        if degree_sub(alg.monomial_degree(u), alg.degree(j)) == tuple(degree)
    ]
    columns = []
    for j, u in unknowns:
        coeffs = [alg.zero()] * p.ngens
        coeffs[j] = alg.monomial(u)
        columns.append([naive_ev(p, coeffs, f) for f in p.relations])
    keys = sorted({(k, w) for col in columns for k, e in enumerate(col) for w in e.monomials()})
    if not keys:
        return len(unknowns)
    matrix = sympy.Matrix([[to_sympy(col[k].coefficient(w)) for col in columns] for k, w in keys])
    return len(unknowns) - matrix.rank()


def naive_j_dimension(space, stage, cap):
    """Count b ⊗ L pairs: stage monomials b times admissible derivations of degree -deg b."""
    total = 0
    for u in standard_monomials(stage, None, cap):
        n = stage.algebra.monomial_degree(u)
        total += naive_der_dimension(space, degree_neg(n), cap - sum(u))
    return total


def points(p, cap):
    return [p.algebra.monomial(u) for u in standard_monomials(p, None, cap)]


class TestPartial:
    """Test the braided partial derivatives on the free algebra"""

    def test_plane(self, plane):
        alg = plane.algebra
        x, y = alg.gen("x"), alg.gen("y")
        assert partial(0, x * x * y) == alg.monomial((1, 1), 2)
        assert partial(1, x * y) == alg.monomial((1, 0), q ** -1)
        assert partial(1, x).is_zero()

    def test_bad_index(self, plane):
        with pytest.raises(InvalidGenerator):
            partial(2, plane.algebra.one())

    def test_matches_word_by_word_leibniz(self, plane, rng):
        alg = plane.algebra
        for _ in range(20):
            a = alg.monomial((rng.randint(0, 3), rng.randint(0, 3)), rng.randint(1, 4))
            for j in range(2):
                assert partial(j, a) == naive_partial(alg, j, a)

    def test_braided_leibniz(self, rng):
        """Test ∂_j(a a') = ∂_j(a) a' + chi(deg a, -m_j) a ∂_j(a') on random monomials"""
        for _ in range(40):
            v = rng.randint(-3, 3)
            d = DeformationData.from_matrix([[0, v], [-v, 0]])
            alg = FreeAlgebra(d, [GeneratorSpec(f"g{i}", (rng.randint(-2, 2), rng.randint(-2, 2)))
                                  for i in range(3)])
            a = alg.monomial(tuple(rng.randint(0, 2) for _ in range(3)))
            b = alg.monomial(tuple(rng.randint(0, 2) for _ in range(3)))
            j = rng.randint(0, 2)
            phase = chi(d, alg.monomial_degree(a.monomials()[0]), degree_neg(alg.degree(j)))
            expected = partial(j, a) * b + (a * partial(j, b)).scale(phase)
            assert partial(j, a * b) == expected


class TestBraidedDerivation:
    """Test admissibility, degrees and evaluation"""

    def test_euler_field(self, torus1):
        L = BraidedDerivation(torus1, ["x", "-xs"])
        assert validate_braided_derivation(L)
        assert ev(L, "x") == torus1.element("x")
        assert ev(L, "x^3") == torus1.element("3*x^3")
        assert derivation_degree(L) == (0,)

    def test_not_admissible(self, torus1):
        with pytest.raises(LeibnizViolation) as exc:
            validate_braided_derivation(BraidedDerivation(torus1, ["1", "0"]))
        assert exc.value.residue == torus1.element("xs")

    def test_inhomogeneous(self, torus1):
        L = BraidedDerivation(torus1, ["1", "x"])
        assert derivation_degree(L) is INHOMOGENEOUS
        parts = derivation_components(L)
        assert list(parts) == [(-1,), (2,)]
        assert parts[(-1,)].coeffs[1].is_zero()

    def test_zero_degree(self, torus1):
        assert derivation_degree(BraidedDerivation(torus1, ["0", "0"])) == (0,)

    def test_linear_structure(self, torus1):
        L = BraidedDerivation(torus1, ["x", "-xs"])
        assert (L - L).is_zero()
        assert L + L == L.scale(2)
        assert L.left_mul(torus1.element("x*xs")) == L

    def test_document_round_trip(self, torus1):
        L = BraidedDerivation(torus1, ["x", "-xs"], cap=2)
        doc = derivation_to_dict(L, "T")
        assert doc == {"algebra": "T", "coeffs": ["x", "-xs"], "cap": 2}
        assert derivation_from_dict(doc, {"T": torus1}) == L


class TestDerBasis:
    """Test cap-bounded bases of admissible derivations"""

    def test_torus_cap_one(self, torus1):
        basis = der_basis(torus1, 1)
        assert basis == [BraidedDerivation(torus1, ["x", "-xs"])]

    def test_torus_cap_two(self, torus1):
        basis = der_basis(torus1, 2)
        assert len(basis) == 3
        assert [derivation_degree(L) for L in basis] == [(-1,), (0,), (1,)]
        assert len(der_basis(torus1, 2, degree=(0,))) == 1
        for L in basis:
            assert validate_braided_derivation(L)

    def test_free_line(self, line):
        """Test every x^k ∂ is admissible on a free algebra"""
        assert len(der_basis(line, 3)) == 4

    def test_quantum_plane(self, plane):
        """Test degree-zero derivations of the plane are spanned by x∂_x and y∂_y"""
        basis = der_basis(plane, 1, degree=(0, 0))
        assert len(basis) == 2

    def test_dimensions_match_leibniz_oracle(self, torus1, sphere2):
        for deg in [(-1,), (0,), (1,)]:
            assert len(der_basis(torus1, 2, degree=deg)) == naive_der_dimension(torus1, deg, 2)
        assert len(der_basis(sphere2, 2, degree=(0,))) == naive_der_dimension(sphere2, (0,), 2)


class TestDerBracket:
    """Test the Lie bracket of braided derivations"""

    def test_x_d_and_d(self, line):
        """Test [x∂, ∂] = -∂"""
        xd = BraidedDerivation(line, ["x"])
        d = BraidedDerivation(line, ["1"])
        assert der_bracket(xd, d) == BraidedDerivation(line, ["-1"])
        assert der_bracket(d, xd) == d

    def test_antisymmetric_on_torus(self, torus1):
        basis = der_basis(torus1, 2)
        for L in basis:
            for M in basis:
                assert der_bracket(L, M) == -der_bracket(M, L)

    def test_bracket_stays_admissible(self, torus1):
        basis = der_basis(torus1, 2)
        for L in basis:
            for M in basis:
                assert validate_braided_derivation(der_bracket(L, M))

    @pytest.mark.parametrize("name, cap", [
        ("line", 3),
        ("torus1", 3),
        pytest.param("plane", 2, marks=pytest.mark.slow),
    ])
    def test_bracket_is_braided_commutator(self, request, name, cap):
        """Test ev([L, M], a) = ev(L, ev(M, a)) - chi(deg M, deg L) ev(M, ev(L, a))"""
        p = request.getfixturevalue(name)
        d = p.deformation
        basis = der_basis(p, cap)
        for L in basis:
            for M in basis:
                phase = chi(d, derivation_degree(M), derivation_degree(L))
                LM = der_bracket(L, M)
                for a in points(p, 3):
                    assert ev(LM, a) == ev(L, ev(M, a)) - ev(M, ev(L, a)).scale(phase)

    @pytest.mark.slow
    @pytest.mark.parametrize("name, cap", [("line", 3), ("torus1", 3), ("plane", 1)])
    def test_braided_jacobi(self, request, name, cap):
        """Test [L, [M, N]] = [[L, M], N] + chi(deg M, deg L) [M, [L, N]] on basis triples"""
        p = request.getfixturevalue(name)
        d = p.deformation
        basis = der_basis(p, cap)
        evaluation_points = points(p, 3)
        for L in basis:
            for M in basis:
                LM = der_bracket(L, M)
                phase = chi(d, derivation_degree(M), derivation_degree(L))
                for N in basis:
                    lhs = der_bracket(L, der_bracket(M, N))
                    rhs = der_bracket(LM, N) + der_bracket(M, der_bracket(L, N)).scale(phase)
                    for a in evaluation_points:
                        assert ev(lhs, a) == ev(rhs, a)


class TestXi:
    """Test the comparison map from stage tensors to H-derivations"""

    def test_xi_image(self, line, field_k):
        t = JStageVector(field_k, line, [(field_k.element("1"), BraidedDerivation(line, ["x"]))])
        v = xi(field_k, t)
        assert v == HDerivation(line, field_k, ["x"])

    def test_xi_needs_coinvariant_pairs(self, line, field_k):
        t = JStageVector(field_k, line, [(field_k.element("1"), BraidedDerivation(line, ["1"]))])
        with pytest.raises(NotCoinvariant):
            xi(field_k, t)

    def test_psi_needs_homogeneous_pairs(self, torus1, field_k):
        t = JStageVector(field_k, torus1, [(field_k.element("1"), BraidedDerivation(torus1, ["1", "x"]))])
        with pytest.raises(DegreeError):
            psi(field_k, t, t)

    def test_j_basis_line_over_line(self, line):
        """Test the j-stage basis {1⊗x∂, x_B⊗∂}"""
        basis = j_stage_basis(line, line, 2)
        assert [(str(t.terms[0][0]), t.terms[0][1].coeffs[0]) for t in basis] == [
            ("1", line.element("x")), ("x", line.element("1")),
        ]

    def test_psi_xi_bracket(self, line):
        """Test ξ([1⊗x∂, x_B⊗∂]) = -x_B⊗1"""
        t1, t2 = j_stage_basis(line, line, 2)
        lhs = xi(line, bracket_tensor(psi(line, t1, t2), line))
        assert lhs.images[0] == lhs.product.presentation.element("-x")
        assert lhs == hder_bracket(xi(line, t1), xi(line, t2))

    def test_scale_by(self, line):
        t1, _ = j_stage_basis(line, line, 2)
        scaled = t1.scale_by("3")
        assert scaled.terms[0][0] == line.element("3")


class TestVerifyXi:
    """Test rank and bracket reports"""

    def test_line_over_field(self, line, field_k):
        report = verify_xi_iso(line, field_k, 1)
        assert (report.j_dim, report.te_dim, report.rank) == (1, 1, 1)
        assert report.j_dim == naive_j_dimension(line, field_k, 1)
        assert report.bijective
        assert report.bracket_ok
        assert report.failures == []

    @pytest.mark.slow
    def test_line_over_line(self, line):
        report = verify_xi_iso(line, line, 2)
        assert (report.j_dim, report.te_dim) == (2, 2)
        assert report.j_dim == naive_j_dimension(line, line, 2)
        assert report.bijective
        assert report.bracket_ok

    @pytest.mark.slow
    def test_torus_over_field(self, torus1, field_k):
        report = verify_xi_iso(torus1, field_k, 2)
        expected = naive_j_dimension(torus1, field_k, 2)
        assert report.j_dim == expected
        assert report.te_dim == expected
        assert report.rank == expected
        assert report.bijective
        assert report.space == "T"
        assert report.stage == "K"
