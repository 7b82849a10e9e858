# -*- coding: utf-8 -*-
"""
H-equivariant algebra morphisms between presentations.

A morphism is stored by its generator images. Application substitutes the
images multiplicatively and reduces in the target; equality of morphisms is
equality of reduced generator images.

Hom-sets are infinite, so besides verification this module emits cap-bounded
parameterizations (HomConstraintSystem) whose polynomial constraints in the
unknown coefficients are returned symbolically rather than solved.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy

from comodule_algebra import INHOMOGENEOUS, Element, Monomial, h_degree, render_monomial
from errors import (
    AlgebraMismatch, CompositionMismatch, DegreeViolation, RelationViolation, ValidationError,
)
from phase_ring import DegreeVector, Laurent, format_degree
from presentations import AlgebraPresentation, standard_monomials

ElementLike = Union[Element, str]


class AlgebraMorphism:
    """Algebra map source -> target given by one image per source generator."""

    def __init__(self, source: AlgebraPresentation, target: AlgebraPresentation,
                 images: Sequence[ElementLike], name: Optional[str] = None):
        if len(images) != source.ngens:
            raise ValidationError(
                f"morphism needs {source.ngens} generator images, got {len(images)}", name=name
            )
        self.source = source
        self.target = target
        self.images: Tuple[Element, ...] = tuple(_rehome(target, img) for img in images)
        self.name = name
        self._powers: Dict[Tuple[int, int], Element] = {}

    def __repr__(self) -> str:
        pairs = ", ".join(f"{g.name} -> {img}" for g, img in zip(self.source.generators, self.images))
        label = f"{self.name}: " if self.name else ""
        return f"AlgebraMorphism({label}{{{pairs}}})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraMorphism):
            return NotImplemented
        return morphisms_equal(self, other)

    def __hash__(self) -> int:
        return hash((self.source, self.target))

    def image(self, name_or_index: Union[str, int]) -> Element:
        return self.images[self.source.algebra.index(name_or_index)]

    def apply(self, a: ElementLike) -> Element:
        return apply(self, a)

    def _power(self, i: int, k: int) -> Element:
        key = (i, k)
        if key not in self._powers:
            base = self.target.reduce(self.images[i])
            self._powers[key] = self.target.reduce(base ** k) if k > 1 else base
        return self._powers[key]


def _rehome(p: AlgebraPresentation, a: ElementLike) -> Element:
    a = p.element(a)
    if a.algebra is not p.algebra:
        a = Element(p.algebra, dict(a.items()))
    return a


def substitute(m: AlgebraMorphism, a: Element) -> Element:
    """Evaluate a on the generator images; the result is reduced in the target."""
    tgt = m.target
    out = tgt.algebra.zero()
    for mono, c in a.items():
        term = tgt.algebra.one()
        for i, k in enumerate(mono):
            if k:
                term = tgt.reduce(term * m._power(i, k))
        out = out + term.scale(c)
    return tgt.reduce(out)


def apply(m: AlgebraMorphism, a: ElementLike) -> Element:
    """
    Substitution homomorphism followed by reduction in the target.

    Raises:
        AlgebraMismatch: a is not an element of the source
    """
    if isinstance(a, Element) and a.algebra != m.source.algebra:
        raise AlgebraMismatch("element is not in the morphism's source")
    return substitute(m, m.source.element(a))


def validate_morphism(m: AlgebraMorphism) -> bool:
    """
    Check equivariance of every generator image and that every source
    relation maps to zero.

    Raises:
        DegreeViolation: image i has the wrong H-degree
        RelationViolation: relation k does not vanish in the target
    """
    for i, img in enumerate(m.images):
        reduced = m.target.reduce(img)
        if reduced.is_zero():
            continue
        deg = h_degree(reduced)
        expected = m.source.algebra.degree(i)
        if deg is INHOMOGENEOUS or deg != expected:
            shown = "inhomogeneous" if deg is INHOMOGENEOUS else format_degree(deg)
            raise DegreeViolation(
                f"image of {m.source.generators[i].name} has degree {shown}, expected {format_degree(expected)}",
                index=i, name=m.name, residue=reduced,
            )
    for k, f in enumerate(m.source.relations):
        residue = substitute(m, f)
        if not residue.is_zero():
            raise RelationViolation(f"relation {k} ({f}) maps to {residue}", index=k, name=m.name, residue=residue)
    return True


def identity_morphism(p: AlgebraPresentation) -> AlgebraMorphism:
    return AlgebraMorphism(p, p, [p.algebra.gen(i) for i in range(p.ngens)], name="id")


def morphisms_equal(f: AlgebraMorphism, g: AlgebraMorphism) -> bool:
    if f.source != g.source or f.target != g.target:
        return False
    return all(
        f.target.reduce(a) == f.target.reduce(_rehome(f.target, b)) for a, b in zip(f.images, g.images)
    )


def compose(f: AlgebraMorphism, g: AlgebraMorphism) -> AlgebraMorphism:
    """
    f after g.

    Raises:
        CompositionMismatch: the target of g is not the source of f
    """
    if g.target != f.source:
        raise CompositionMismatch("cannot compose: target of the inner morphism differs from the outer source")
    images = [substitute(f, _rehome(f.source, img)) for img in g.images]
    return AlgebraMorphism(g.source, f.target, images)


def factor_through_localization(localized: AlgebraPresentation, ell: AlgebraMorphism,
                                kappa: AlgebraMorphism, t: ElementLike) -> AlgebraMorphism:
    """
    The morphism A[s^-1] -> B with y -> t extending kappa, validated.

    Raises:
        CompositionMismatch: ell and kappa do not share a source
        RelationViolation: t is not an inverse of kappa(s)
    """
    if ell.source != kappa.source or ell.target != localized:
        raise CompositionMismatch("localization morphism and kappa must start at the same algebra")
    if localized.ngens != kappa.source.ngens + 1:
        raise ValidationError("factoring expects a single localization generator")
    images = list(kappa.images) + [kappa.target.element(t)]
    phi = AlgebraMorphism(localized, kappa.target, images)
    validate_morphism(phi)
    return phi


# ============================================================================
# Cap-bounded Hom parameterizations
# ============================================================================

Unknown = Tuple[int, Monomial]
Polynomial = Dict[Tuple[int, ...], Laurent]


@dataclass
class Constraint:
    """Coefficient of one target monomial in the image of one relation."""

    relation: int
    monomial: Monomial
    poly: Polynomial

    def evaluate(self, values: Sequence) -> Laurent:
        total = Laurent()
        for key, c in self.poly.items():
            term = c
            for j in key:
                term = term * Laurent.coerce(values[j])
            total = total + term
        return total

    @property
    def degree(self) -> int:
        return max((len(k) for k in self.poly), default=0)


@dataclass
class HomConstraintSystem:
    source: AlgebraPresentation
    target: AlgebraPresentation
    cap: int
    unknowns: List[Unknown]
    constraints: List[Constraint] = field(default_factory=list)

    def unknown_name(self, j: int) -> str:
        i, _ = self.unknowns[j]
        gen = self.source.generators[i].name
        return f"c_{gen}_{j}"

    def image(self, i: int, values: Sequence) -> Element:
        alg = self.target.algebra
        out = alg.zero()
        for j, (gi, mono) in enumerate(self.unknowns):
            if gi == i:
                out = out + alg.monomial(mono, Laurent.coerce(values[j]))
        return out

    def morphism(self, values: Sequence) -> AlgebraMorphism:
        return AlgebraMorphism(self.source, self.target, [self.image(i, values) for i in range(self.source.ngens)])

    def coefficients_of(self, m: AlgebraMorphism) -> List[Laurent]:
        """Read the unknowns off a morphism whose reduced images lie in the parameterized span."""
        values = []
        seen = set()
        for gi, mono in self.unknowns:
            img = m.target.reduce(m.images[gi])
            values.append(img.coefficient(mono))
            seen.add((gi, mono))
        for gi, img in enumerate(m.images):
            for mono in m.target.reduce(img).monomials():
                if (gi, mono) not in seen:
                    raise ValidationError(
                        f"image of generator {gi} uses {render_monomial(m.target.algebra, mono)} beyond cap {self.cap}",
                        index=gi,
                    )
        return values

    def evaluate(self, values: Sequence) -> List[Laurent]:
        return [c.evaluate(values) for c in self.constraints]

    def is_satisfied(self, values: Sequence) -> bool:
        return all(r.is_zero() for r in self.evaluate(values))

    @property
    def is_linear(self) -> bool:
        return all(c.degree <= 1 for c in self.constraints)

    def to_sympy(self) -> List[sympy.Expr]:
        q = sympy.Symbol("q")
        syms = [sympy.Symbol(self.unknown_name(j)) for j in range(len(self.unknowns))]
        out = []
        for c in self.constraints:
            expr = sympy.Integer(0)
            for key, coeff in c.poly.items():
                term = sum(
                    (sympy.Rational(v.numerator, v.denominator) * q ** k for k, v in coeff.items()),
                    sympy.Integer(0),
                )
                for j in key:
                    term = term * syms[j]
                expr += term
            out.append(sympy.expand(expr))
        return out


Parametric = Dict[Tuple[int, ...], Element]


def _param_add(a: Parametric, b: Parametric) -> Parametric:
    out = dict(a)
    for k, v in b.items():
        s = out[k] + v if k in out else v
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def _param_mul(a: Parametric, b: Parametric, target: AlgebraPresentation) -> Parametric:
    out: Parametric = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            prod = target.reduce(va * vb)
            if prod.is_zero():
                continue
            out = _param_add(out, {tuple(sorted(ka + kb)): prod})
    return out


def hom_constraints(b: AlgebraPresentation, target: AlgebraPresentation, total_cap: int) -> HomConstraintSystem:
    """
    Parameterize Hom(b, target) up to total_cap.

    Generator i of b maps to sum_u c_{i,u} x^u over the standard monomials u of
    the target in degree m_i; each relation of b yields one polynomial
    constraint per target monomial of its reduced image.
    """
    alg = target.algebra
    unknowns: List[Unknown] = []
    images: List[Parametric] = []
    for i in range(b.ngens):
        img: Parametric = {}
        for u in standard_monomials(target, b.algebra.degree(i), total_cap):
            img[(len(unknowns),)] = alg.monomial(u)
            unknowns.append((i, u))
        images.append(img)

    system = HomConstraintSystem(b, target, total_cap, unknowns)
    one: Parametric = {(): alg.one()}
    for k, f in enumerate(b.relations):
        total: Parametric = {}
        for mono, c in f.items():
            term = one
            for i, e in enumerate(mono):
                for _ in range(e):
                    term = _param_mul(term, images[i], target)
            total = _param_add(total, {key: v.scale(c) for key, v in term.items()})
        by_monomial: Dict[Monomial, Polynomial] = {}
        for key, elem in total.items():
            for mono, c in elem.items():
                by_monomial.setdefault(mono, {})[key] = c
        for mono in sorted(by_monomial, key=lambda e: tuple(-x for x in e)):
            poly = {key: c for key, c in by_monomial[mono].items() if not c.is_zero()}
            if poly:
                system.constraints.append(Constraint(k, mono, poly))
    return system


def graded_points(target: AlgebraPresentation, hdeg: DegreeVector, total_cap: int) -> List[Element]:
    """Standard-monomial basis of the degree-hdeg component up to total_cap."""
    return [target.algebra.monomial(u) for u in standard_monomials(target, hdeg, total_cap)]


def morphism_to_dict(m: AlgebraMorphism, source_name: Optional[str] = None,
                     target_name: Optional[str] = None) -> Dict:
    return {
        "source": source_name or m.source.name,
        "target": target_name or m.target.name,
        "images": [str(img) for img in m.images],
    }


def morphism_from_dict(doc: Dict, algebras: Dict[str, AlgebraPresentation]) -> AlgebraMorphism:
    try:
        source = algebras[doc["source"]]
        target = algebras[doc["target"]]
    except KeyError as exc:
        raise ValidationError(f"morphism refers to unknown algebra {exc.args[0]!r}") from None
    return AlgebraMorphism(source, target, list(doc["images"]), name=doc.get("name"))

