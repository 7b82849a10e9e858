"""
Tests for morphisms.py

Tests validation, application and composition of morphisms, factoring
through a localization, and the cap-bounded Hom parameterization.
"""
import os
import sys
from fractions import Fraction

import pytest
import sympy

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from errors import (
    AlgebraMismatch, CompositionMismatch, DegreeViolation, RelationViolation, ValidationError,
)
from morphisms import (
    AlgebraMorphism, apply, compose, factor_through_localization, graded_points,
    hom_constraints, identity_morphism, morphism_from_dict, morphism_to_dict,
    validate_morphism,
)
from phase_ring import Laurent
from presentations import coproduct, free_algebra, localize, nc_circle

q = Laurent.q_power(1)


class TestValidate:
    """Test equivariance and relation checks"""

    def test_identity(self, sphere4):
        assert validate_morphism(identity_morphism(sphere4))

    def test_image_count(self, line, torus1):
        with pytest.raises(ValidationError):
            AlgebraMorphism(line, torus1, ["x", "xs"])

    def test_degree_violation(self, line, torus1):
        """Test x -> xs breaks equivariance"""
        with pytest.raises(DegreeViolation) as exc:
            validate_morphism(AlgebraMorphism(line, torus1, ["xs"]))
        assert exc.value.index == 0

    def test_relation_violation(self, torus1, line):
        """Test the torus relation cannot map into a free algebra"""
        with pytest.raises(RelationViolation) as exc:
            validate_morphism(AlgebraMorphism(torus1, line, ["x", "0"]))
        assert exc.value.index == 0
        assert exc.value.residue == -1

    def test_zero_image_is_equivariant(self, line, torus1):
        assert validate_morphism(AlgebraMorphism(line, torus1, ["0"]))

    def test_torus_rescaling(self, torus1):
        """Test x -> 2x, xs -> xs/2 respects xs*x = 1"""
        m = AlgebraMorphism(torus1, torus1, ["2*x", "1/2*xs"])
        assert validate_morphism(m)


class TestApply:
    """Test substitution"""

    def test_braided_product(self, plane):
        m = AlgebraMorphism(plane, plane, ["2*x", "y"])
        assert apply(m, "y*x") == plane.algebra.monomial((1, 1), 2 * q)

    def test_reduces_in_target(self, line, torus1):
        m = AlgebraMorphism(line, torus1, ["x"])
        assert m.apply("x^2") == torus1.algebra.monomial((2, 0))

    def test_wrong_source(self, line, torus1):
        m = AlgebraMorphism(line, torus1, ["x"])
        with pytest.raises(AlgebraMismatch):
            apply(m, torus1.element("x"))


class TestCompose:
    """Test composition"""

    def test_identity_is_neutral(self, line, torus1):
        f = AlgebraMorphism(line, torus1, ["x"])
        assert compose(identity_morphism(torus1), f) == f
        assert compose(f, identity_morphism(line)) == f

    def test_composite_images(self, torus1):
        f = AlgebraMorphism(torus1, torus1, ["2*x", "1/2*xs"])
        g = compose(f, f)
        assert g.image("x") == torus1.element("4*x")
        assert g.image("xs") == torus1.element("1/4*xs")

    def test_mismatch(self, line, torus1):
        f = AlgebraMorphism(line, torus1, ["x"])
        with pytest.raises(CompositionMismatch):
            compose(f, f)

    def test_associative_on_random_triples(self, theta1, rng):
        """Test f o (g o h) = (f o g) o h for endomorphisms x -> p(t) x, t -> r(t)"""
        a = free_algebra(theta1, [("x", (1,)), ("t", (0,))])
        alg = a.algebra

        def random_endomorphism():
            x_image, t_image = alg.zero(), alg.zero()
            for k in range(3):
                x_image = x_image + alg.monomial((1, k), rng.randint(-3, 3))
                t_image = t_image + alg.monomial((0, k), rng.randint(-3, 3))
            m = AlgebraMorphism(a, a, [x_image, t_image])
            assert validate_morphism(m)
            return m

        for _ in range(10):
            f, g, h = random_endomorphism(), random_endomorphism(), random_endomorphism()
            assert compose(f, compose(g, h)) == compose(compose(f, g), h)


class TestLocalizationFactoring:
    """Test the universal property of A[s^-1]"""

    def test_factor(self, sphere2):
        loc, ell = localize(sphere2, "z")
        phi = factor_through_localization(loc, ell, ell, "y")
        assert phi == identity_morphism(loc)

    def test_wrong_inverse(self, sphere2):
        loc, ell = localize(sphere2, "z")
        with pytest.raises(RelationViolation):
            factor_through_localization(loc, ell, ell, "z")


class TestHomConstraints:
    """Test cap-bounded Hom parameterizations"""

    def test_free_source(self, line, torus1):
        system = hom_constraints(line, torus1, 3)
        assert system.unknowns == [(0, (1, 0))]
        assert system.constraints == []

    def test_torus_endomorphisms(self, torus1):
        """Test End(T) at cap 1 is cut out by c0*c1 = 1"""
        system = hom_constraints(torus1, torus1, 1)
        assert len(system.unknowns) == 2
        assert len(system.constraints) == 1
        assert not system.is_linear
        assert system.is_satisfied([1, 1])
        assert system.is_satisfied([Fraction(2), Fraction(1, 2)])
        assert not system.is_satisfied([1, 2])
        c0, c1 = sympy.symbols("c_x_0 c_xs_1")
        assert system.to_sympy() == [c0 * c1 - 1]

    def test_solution_is_a_morphism(self, torus1):
        system = hom_constraints(torus1, torus1, 1)
        m = system.morphism([q, q ** -1])
        assert validate_morphism(m)
        assert system.coefficients_of(m) == [q, q ** -1]

    def test_coefficients_beyond_cap(self, line, torus1):
        system = hom_constraints(line, torus1, 0)
        with pytest.raises(ValidationError):
            system.coefficients_of(AlgebraMorphism(line, torus1, ["x"]))

    def test_graded_points(self, torus1, sphere2):
        assert graded_points(torus1, (0,), 3) == [torus1.algebra.one()]
        assert graded_points(sphere2, (0,), 2) == [sphere2.element(t) for t in ("1", "z", "z^2")]

    @pytest.mark.parametrize("J", [1, 2, 3, 4])
    def test_points_of_circle_times_line(self, theta1, line, J):
        """Test the degree-1 points of A_T ⊔ F_m are y^-1 and y^(j-1) x^j up to cap 2J-1"""
        target, _, _ = coproduct(nc_circle(theta1, (1,)), line)
        found = graded_points(target, (1,), 2 * J - 1)
        assert len(found) == J + 1
        expected = {"x", "y^-1"} | {("y" if j == 2 else f"y^{j - 1}") + f"*x^{j}" for j in range(2, J + 1)}
        assert {str(p) for p in found} == expected
        for p in found:
            assert validate_morphism(AlgebraMorphism(line, target, [p]))


class TestDocuments:
    """Test the JSON morphism document"""

    def test_round_trip(self, line, torus1):
        m = AlgebraMorphism(line, torus1, ["(1+q)*x"], name="f")
        doc = morphism_to_dict(m, "Fm", "T")
        assert doc == {"source": "Fm", "target": "T", "images": ["(q+1)*x"]}
        back = morphism_from_dict(doc, {"Fm": line, "T": torus1})
        assert back == m

    def test_unknown_algebra(self, line):
        with pytest.raises(ValidationError):
            morphism_from_dict({"source": "Fm", "target": "B", "images": ["x"]}, {"Fm": line})
