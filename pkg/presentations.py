# -*- coding: utf-8 -*-
"""
Finitely presented braided-commutative algebras.

An AlgebraPresentation is a free algebra F_{m_1..m_N} together with a finite
list of H-homogeneous relations. This module computes Groebner bases for the
relation ideal (Buchberger over quasi-commuting variables, phases entering only
through canonical monomial products), normal forms, standard-monomial bases and
the categorical constructions: coproduct, pushout and localization.

Homogeneous relations quasi-commute past every monomial, so the left ideal they
generate is already two-sided and left S-polynomials suffice.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from comodule_algebra import (
    INHOMOGENEOUS, Element, FreeAlgebra, GeneratorSpec, Monomial,
    h_degree, monomial_divides, monomial_key, monomial_lcm, monomial_sub,
    normalize_word, parse_element, remap, specialize_q1,
)
from errors import (
    AlgebraMismatch, DeformationMismatch, DegreeMismatch, InhomogeneousRelation,
    MorphismSourceMismatch, NotCoinvariant, ValidationError, ZeroElement,
)
from phase_ring import LAURENT_ONE, DeformationData, DegreeVector, Laurent, degree_neg

INVERSE_SUFFIX = "_inv"
PRESENTATION_VERSION = 1

ElementLike = Union[Element, str]


# ============================================================================
# Presentations
# ============================================================================

def _with_companions(generators: Sequence[GeneratorSpec]) -> List[GeneratorSpec]:
    """Insert <name>_inv right after every invertible generator lacking one."""
    present = {g.inverse_of for g in generators if g.inverse_of}
    out: List[GeneratorSpec] = []
    for g in generators:
        out.append(g)
        if g.invertible and g.name not in present:
            out.append(GeneratorSpec(g.name + INVERSE_SUFFIX, degree_neg(g.degree), inverse_of=g.name))
    return out


def inverse_relation(algebra: FreeAlgebra, name: str) -> Element:
    """The automatic relation x_inv*x - 1 in canonical form."""
    companion = algebra.companion_index(name)
    return normalize_word(algebra, [companion, algebra.index(name)]) - algebra.one()


class AlgebraPresentation:
    """
    F_{m_1..m_N}/(f_k) with recorded relation degrees n_k.

    Invertible generators are realized by a companion generator <name>_inv of
    degree -m and the relation <name>_inv*<name> - 1, both added automatically.
    """

    def __init__(self, deformation: DeformationData, generators: Sequence[GeneratorSpec],
                 relations: Sequence[ElementLike] = (),
                 relation_degrees: Optional[Sequence[DegreeVector]] = None,
                 name: Optional[str] = None):
        for i, g in enumerate(generators):
            if len(g.degree) != deformation.rank:
                raise DegreeMismatch(
                    f"generator {g.name!r} has degree of length {len(g.degree)}, torus rank is {deformation.rank}",
                    index=i, name=g.name,
                )
        self.deformation = deformation
        self.algebra = FreeAlgebra(deformation, _with_companions(generators))
        self.name = name

        rels = [parse_element(self.algebra, r) if isinstance(r, str) else r for r in relations]
        for k, r in enumerate(rels):
            if r.algebra != self.algebra:
                raise AlgebraMismatch(f"relation {k} belongs to a different algebra", index=k)
            if r.algebra is not self.algebra:
                rels[k] = Element(self.algebra, dict(r.items()))
        auto = [inverse_relation(self.algebra, g.name) for g in self.algebra.generators if g.invertible]
        degrees = list(relation_degrees) if relation_degrees is not None else None
        for r in auto:
            if r not in rels:
                rels.append(r)
                if degrees is not None:
                    degrees.append(deformation.zero)
        self.relations: Tuple[Element, ...] = tuple(rels)

        if degrees is None:
            degrees = []
            for k, r in enumerate(self.relations):
                d = h_degree(r)
                if d is INHOMOGENEOUS:
                    raise InhomogeneousRelation(f"relation {k} ({r}) is not H-homogeneous", index=k, residue=r)
                degrees.append(d)
        self.relation_degrees: Tuple[DegreeVector, ...] = tuple(tuple(d) for d in degrees)
        self._groebner: Optional["GroebnerBasis"] = None
        validate_presentation(self)

    # -- identity -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, AlgebraPresentation):
            return NotImplemented
        return self.algebra == other.algebra and self.relations == other.relations

    def __hash__(self) -> int:
        return hash((self.algebra, self.relations))

    def __repr__(self) -> str:
        label = f"{self.name} = " if self.name else ""
        rels = ", ".join(str(r) for r in self.relations)
        return f"AlgebraPresentation({label}{self.algebra!r} / {{{rels}}})"

    # -- conveniences -----------------------------------------------------------

    @property
    def generators(self) -> Tuple[GeneratorSpec, ...]:
        return self.algebra.generators

    @property
    def ngens(self) -> int:
        return self.algebra.ngens

    def element(self, value: Union[ElementLike, int, Fraction, Laurent]) -> Element:
        if isinstance(value, Element):
            if value.algebra != self.algebra:
                raise AlgebraMismatch("element does not belong to this presentation")
            return value
        if isinstance(value, str):
            return parse_element(self.algebra, value)
        return self.algebra.scalar(value)

    def is_automatic_relation(self, k: int) -> bool:
        auto = {inverse_relation(self.algebra, g.name) for g in self.algebra.generators if g.invertible}
        return self.relations[k] in auto

    @property
    def groebner_basis(self) -> "GroebnerBasis":
        if self._groebner is None:
            self._groebner = groebner(self)
        return self._groebner

    def reduce(self, a: ElementLike) -> Element:
        return reduce(self.element(a), self.groebner_basis)

    def with_name(self, name: str) -> "AlgebraPresentation":
        self.name = name
        return self


def validate_presentation(p: AlgebraPresentation) -> bool:
    """
    Check relation homogeneity and recorded degrees, generator degree lengths
    and the inverse relation of every invertible generator.

    Raises:
        InhomogeneousRelation: relation k mixes several H-degrees
        DegreeMismatch: a degree vector has the wrong length or n_k disagrees
    """
    d = p.deformation
    alg = p.algebra
    for i, g in enumerate(alg.generators):
        if len(g.degree) != d.rank:
            raise DegreeMismatch(f"generator {g.name!r} has a degree of the wrong length", index=i, name=g.name)
        if g.inverse_of:
            base = alg.index(g.inverse_of)
            if g.degree != degree_neg(alg.degree(base)):
                raise DegreeMismatch(
                    f"inverse companion {g.name!r} must have degree -deg({g.inverse_of})", index=i, name=g.name
                )
    if len(p.relation_degrees) != len(p.relations):
        raise DegreeMismatch(f"{len(p.relations)} relations but {len(p.relation_degrees)} relation degrees")
    for k, (r, n_k) in enumerate(zip(p.relations, p.relation_degrees)):
        if len(n_k) != d.rank:
            raise DegreeMismatch(f"relation degree {k} has length {len(n_k)}", index=k)
        deg = h_degree(r)
        if deg is INHOMOGENEOUS:
            raise InhomogeneousRelation(f"relation {k} ({r}) is not H-homogeneous", index=k, residue=r)
        if not r.is_zero() and deg != n_k:
            raise DegreeMismatch(f"relation {k} has degree {deg}, recorded {n_k}", index=k, residue=r)
    for g in alg.generators:
        if g.invertible:
            if alg.companion_index(g.name) is None:
                raise ValidationError(f"invertible generator {g.name!r} has no inverse companion", name=g.name)
            if inverse_relation(alg, g.name) not in p.relations:
                raise ValidationError(f"missing inverse relation for {g.name!r}", name=g.name)
    return True


# ============================================================================
# Groebner bases
# ============================================================================

@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis of the left (= two-sided) relation ideal."""

    algebra: FreeAlgebra
    basis: Tuple[Element, ...]
    order: str = "degrevlex"
    complete: bool = True

    @property
    def leading_monomials(self) -> List[Monomial]:
        return [g.leading_term()[0] for g in self.basis]

    def is_standard(self, e: Monomial) -> bool:
        return not any(monomial_divides(lm, e) for lm in self.leading_monomials)

    def __len__(self) -> int:
        return len(self.basis)


def _leading(f: Element) -> Tuple[Monomial, Laurent]:
    return f.leading_term()


def make_primitive(f: Element) -> Element:
    """Divide out the coefficient content; monic when the leading coefficient is a unit."""
    if f.is_zero():
        return f
    content = None
    for _, c in f.items():
        content = c.normalized() if content is None else content.gcd(c)
        if content.is_one():
            break
    if content is not None and not content.is_one():
        f = Element(f.algebra, {m: c.exquo(content) for m, c in f.items()})
    _, lc = _leading(f)
    if lc.is_unit():
        return f.scale(lc.inverse())
    unit = Laurent.q_power(lc.min_exp, lc.leading_coefficient)
    return f.scale(unit.inverse())


def spoly(f: Element, g: Element) -> Element:
    """Left S-polynomial lc(x^v g) x^u f - lc(x^u f) x^v g, cancelled by the gcd of the two."""
    lmf, _ = _leading(f)
    lmg, _ = _leading(g)
    lcm = monomial_lcm(lmf, lmg)
    a = f.left_monomial_mul(monomial_sub(lcm, lmf))
    b = g.left_monomial_mul(monomial_sub(lcm, lmg))
    ca = a.coefficient(lcm)
    cb = b.coefficient(lcm)
    h = ca.gcd(cb)
    return a.scale(cb.exquo(h)) - b.scale(ca.exquo(h))


def pseudo_reduce(a: Element, basis: Sequence[Element]) -> Tuple[Element, Laurent]:
    """
    Full pseudo-division of a by basis.

    Returns (r, c) with c*a - r in the left ideal of basis and no monomial of r
    divisible by a leading monomial. Unit pivots divide exactly and leave c = 1.
    """
    alg = a.algebra
    leads = [_leading(g)[0] for g in basis]
    mult = LAURENT_ONE
    remainder: Dict[Monomial, Laurent] = {}
    p = a
    while not p.is_zero():
        m, c = p.leading_term()
        for g, lm in zip(basis, leads):
            if monomial_divides(lm, m):
                break
        else:
            remainder[m] = c
            p = p - alg.monomial(m, c)
            continue
        t = g.left_monomial_mul(monomial_sub(m, lm))
        lct = t.coefficient(m)
        if lct.is_unit():
            p = p - t.scale(c * lct.inverse())
            continue
        h = c.gcd(lct)
        up = lct.exquo(h)
        p = p.scale(up) - t.scale(c.exquo(h))
        remainder = {k: v * up for k, v in remainder.items()}
        mult = mult * up
    return Element(alg, remainder), mult


def _pair_key(basis: Sequence[Element], pair: Tuple[int, int]) -> Tuple:
    lcm = monomial_lcm(_leading(basis[pair[0]])[0], _leading(basis[pair[1]])[0])
    return monomial_key(lcm), pair


def minimalize(basis: Sequence[Element]) -> List[Element]:
    """Drop elements whose leading monomial is divisible by another's."""
    out: List[Element] = []
    for f in sorted(basis, key=lambda h: monomial_key(_leading(h)[0])):
        lm = _leading(f)[0]
        if all(not monomial_divides(_leading(g)[0], lm) for g in out):
            out.append(f)
    return out


def interreduce(basis: Sequence[Element]) -> List[Element]:
    """Reduce every tail against the rest of a minimal basis."""
    out = []
    for i, f in enumerate(basis):
        r, _ = pseudo_reduce(f, list(basis[:i]) + list(basis[i + 1:]))
        out.append(make_primitive(r))
    return out


def groebner(p: AlgebraPresentation) -> GroebnerBasis:
    """
    Buchberger's procedure with normal pair selection.

    Deterministic: pairs are taken by smallest lcm, ties broken by index.
    """
    G: List[Element] = []
    pairs = set()
    for f in p.relations:
        if f.is_zero():
            continue
        G.append(make_primitive(f))
        pairs |= {(i, len(G) - 1) for i in range(len(G) - 1)}

    while pairs:
        pair = min(pairs, key=lambda ij: _pair_key(G, ij))
        pairs.remove(pair)
        s = spoly(G[pair[0]], G[pair[1]])
        r, _ = pseudo_reduce(s, G)
        if not r.is_zero():
            G.append(make_primitive(r))
            pairs |= {(i, len(G) - 1) for i in range(len(G) - 1)}

    reduced = interreduce(minimalize(G))
    reduced.sort(key=lambda h: monomial_key(_leading(h)[0]))
    return GroebnerBasis(algebra=p.algebra, basis=tuple(reduced))


def reduce(a: Element, g: Union[GroebnerBasis, AlgebraPresentation]) -> Element:
    """
    Canonical representative of a in the quotient.

    Raises:
        AlgebraMismatch: a is not in the ambient free algebra
        NonLaurentNormalForm: the normal form needs a non-unit denominator
    """
    if isinstance(g, AlgebraPresentation):
        g = g.groebner_basis
    if a.algebra != g.algebra:
        raise AlgebraMismatch("element and Groebner basis live in different algebras")
    if not g.basis or a.is_zero():
        return a
    r, mult = pseudo_reduce(a, g.basis)
    if mult.is_one():
        return r
    return Element(r.algebra, {m: c.exquo(mult) for m, c in r.items()})


def _monomials_up_to(n: int, cap: int) -> Iterator[Monomial]:
    for total in range(cap + 1):
        for combo in combinations_with_replacement(range(n), total):
            e = [0] * n
            for i in combo:
                e[i] += 1
            yield tuple(e)


def standard_monomials(p: AlgebraPresentation, hdeg: Optional[DegreeVector],
                       total_cap: int) -> List[Monomial]:
    """
    Monomials of H-degree hdeg (any degree when None) and total degree at most
    total_cap that no leading monomial divides, in ascending monomial order.
    """
    gb = p.groebner_basis
    leads = gb.leading_monomials
    alg = p.algebra
    if hdeg is not None:
        hdeg = p.deformation.check_degree(hdeg)
    out = []
    for e in _monomials_up_to(alg.ngens, total_cap):
        if hdeg is not None and alg.monomial_degree(e) != hdeg:
            continue
        if any(monomial_divides(lm, e) for lm in leads):
            continue
        out.append(e)
    out.sort(key=monomial_key)
    return out


# ============================================================================
# Categorical constructions
# ============================================================================

def _fresh_name(name: str, taken: set) -> str:
    if name not in taken:
        return name
    k = 2
    while f"{name}_{k}" in taken:
        k += 1
    return f"{name}_{k}"


def coproduct(a: AlgebraPresentation, b: AlgebraPresentation):
    """
    A ⊔ B: a's generators followed by b's, relations f_k ⊗ 1 and 1 ⊗ f'_k.

    Clashing names in b get suffixes _2, _3, ...; inverse companions follow
    their base generator. Returns (presentation, iota_1, iota_2).
    """
    from morphisms import AlgebraMorphism

    if a.deformation != b.deformation:
        raise DeformationMismatch("coproduct factors have different deformation data")
    taken = set(a.algebra.names)
    renamed: Dict[str, str] = {}
    for g in b.generators:
        if not g.inverse_of:
            renamed[g.name] = _fresh_name(g.name, taken | set(renamed.values()))
    specs = list(a.generators)
    for g in b.generators:
        if g.inverse_of:
            base = renamed[g.inverse_of]
            new = _fresh_name(base + INVERSE_SUFFIX, taken | set(renamed.values()))
            renamed[g.name] = new
            specs.append(GeneratorSpec(new, g.degree, inverse_of=base))
        else:
            specs.append(GeneratorSpec(renamed[g.name], g.degree, g.invertible))

    target = FreeAlgebra(a.deformation, specs)
    left = list(range(a.ngens))
    right = [a.ngens + i for i in range(b.ngens)]
    rels = [remap(r, target, left) for r in a.relations] + [remap(r, target, right) for r in b.relations]
    degrees = list(a.relation_degrees) + list(b.relation_degrees)
    out = AlgebraPresentation(a.deformation, specs, rels, degrees)
    iota1 = AlgebraMorphism(a, out, [out.algebra.gen(i) for i in left])
    iota2 = AlgebraMorphism(b, out, [out.algebra.gen(i) for i in right])
    return out, iota1, iota2


def pushout(c: AlgebraPresentation, a: AlgebraPresentation, b: AlgebraPresentation, kappa, zeta):
    """
    A ⊔_C B = A ⊔ B / (kappa(x_i) ⊗ 1 - 1 ⊗ zeta(x_i)) over the generators x_i of C.

    Returns (presentation, leg_a, leg_b).
    """
    from morphisms import AlgebraMorphism

    if kappa.source != c or zeta.source != c:
        raise MorphismSourceMismatch("pushout legs must both start at the common source")
    if kappa.target != a or zeta.target != b:
        raise MorphismSourceMismatch("pushout legs must end at the two factors")
    co, _, _ = coproduct(a, b)
    rels = list(co.relations)
    degrees = list(co.relation_degrees)
    left = list(range(a.ngens))
    right = [a.ngens + i for i in range(b.ngens)]
    for i in range(c.ngens):
        extra = remap(kappa.images[i], co.algebra, left) - remap(zeta.images[i], co.algebra, right)
        if extra.is_zero() or extra in rels:
            continue
        rels.append(extra)
        degrees.append(c.algebra.degree(i))
    out = AlgebraPresentation(co.deformation, co.generators, rels, degrees)
    leg_a = AlgebraMorphism(a, out, [out.algebra.gen(i) for i in range(a.ngens)])
    leg_b = AlgebraMorphism(b, out, [out.algebra.gen(a.ngens + i) for i in range(b.ngens)])
    return out, leg_a, leg_b


def localize(a: AlgebraPresentation, s: ElementLike, name: str = "y"):
    """
    A[s^-1] = A ⊔ F_0 / (s ⊗ y - 1) for an H-coinvariant s.

    Returns (presentation, ell_s).

    Raises:
        NotCoinvariant: s is not of degree 0
        ZeroElement: s reduces to zero in A
    """
    from morphisms import AlgebraMorphism

    s = a.element(s)
    deg = h_degree(s)
    if deg is INHOMOGENEOUS or deg != a.deformation.zero:
        raise NotCoinvariant(f"cannot localize at {s}: it is not H-coinvariant", residue=s)
    if a.reduce(s).is_zero():
        raise ZeroElement(f"cannot localize at {s}: it reduces to zero", residue=s)
    y = free_algebra(a.deformation, [GeneratorSpec(name, a.deformation.zero)])
    co, _, iota2 = coproduct(a, y)
    yy = iota2.images[0]
    rels = list(co.relations) + [remap(s, co.algebra, list(range(a.ngens))) * yy - co.algebra.one()]
    degrees = list(co.relation_degrees) + [a.deformation.zero]
    out = AlgebraPresentation(a.deformation, co.generators, rels, degrees)
    ell = AlgebraMorphism(a, out, [out.algebra.gen(i) for i in range(a.ngens)])
    return out, ell


def localize_many(a: AlgebraPresentation, elements: Sequence[ElementLike],
                  names: Optional[Sequence[str]] = None):
    """Iterated localization in declaration order; returns (presentation, ell)."""
    from morphisms import AlgebraMorphism

    current = a
    for k, s in enumerate(elements):
        s = a.element(s)
        moved = remap(s, current.algebra, list(range(a.ngens)))
        current, _ = localize(current, moved, names[k] if names else "y")
    return current, AlgebraMorphism(a, current, [current.algebra.gen(i) for i in range(a.ngens)])


def specialize_presentation(p: AlgebraPresentation) -> AlgebraPresentation:
    """The commutative shadow of p: same generators, q -> 1 in every relation."""
    d = p.deformation.specialize_q1()
    target = FreeAlgebra(d, p.generators)
    rels = [specialize_q1(r, target) for r in p.relations]
    return AlgebraPresentation(d, p.generators, [r for r in rels if not r.is_zero()], name=p.name)


# ============================================================================
# Builders
# ============================================================================

def _specs(generators) -> List[GeneratorSpec]:
    out = []
    for g in generators:
        if isinstance(g, GeneratorSpec):
            out.append(g)
        else:
            out.append(GeneratorSpec(*g))
    return out


def free_algebra(deformation: DeformationData, generators) -> AlgebraPresentation:
    """F_{m_1..m_N}; generators are GeneratorSpecs or (name, degree[, invertible]) tuples."""
    return AlgebraPresentation(deformation, _specs(generators))


def ground_field(deformation: DeformationData) -> AlgebraPresentation:
    """The initial object K: no generators, no relations."""
    return AlgebraPresentation(deformation, [], name="K")


def _torus_names(n: int) -> List[Tuple[str, str]]:
    if n == 1:
        return [("x", "xs")]
    return [(f"x{i}", f"xs{i}") for i in range(1, n + 1)]


def _conjugate_pairs(deformation: DeformationData, degrees: Sequence[DegreeVector]) -> List[GeneratorSpec]:
    specs = []
    for (x, xs), m in zip(_torus_names(len(degrees)), degrees):
        m = deformation.check_degree(m)
        specs.append(GeneratorSpec(x, m))
        specs.append(GeneratorSpec(xs, degree_neg(m)))
    return specs


def nc_torus(deformation: DeformationData, degrees: Sequence[DegreeVector]) -> AlgebraPresentation:
    """Noncommutative torus: generators x_i, x_i* of degrees m_i, -m_i with x_i* x_i - 1."""
    specs = _conjugate_pairs(deformation, degrees)
    alg = FreeAlgebra(deformation, specs)
    rels = [normalize_word(alg, [2 * i + 1, 2 * i]) - alg.one() for i in range(len(degrees))]
    return AlgebraPresentation(deformation, specs, rels, name="T")


def _sphere_sum(alg: FreeAlgebra, n: int) -> Element:
    total = alg.zero()
    for i in range(n):
        total = total + normalize_word(alg, [2 * i + 1, 2 * i])
    return total


def odd_sphere(deformation: DeformationData, degrees: Sequence[DegreeVector]) -> AlgebraPresentation:
    """S^{2N-1}: sum_i x_i* x_i - 1."""
    specs = _conjugate_pairs(deformation, degrees)
    alg = FreeAlgebra(deformation, specs)
    return AlgebraPresentation(deformation, specs, [_sphere_sum(alg, len(degrees)) - alg.one()], name="S")


def even_sphere(deformation: DeformationData, degrees: Sequence[DegreeVector]) -> AlgebraPresentation:
    """S^{2N}: extra coinvariant z with sum_i x_i* x_i + z^2 - 1."""
    specs = _conjugate_pairs(deformation, degrees) + [GeneratorSpec("z", deformation.zero)]
    alg = FreeAlgebra(deformation, specs)
    z = alg.gen("z")
    rel = _sphere_sum(alg, len(degrees)) + z * z - alg.one()
    return AlgebraPresentation(deformation, specs, [rel], name="S")


def nc_circle(deformation: DeformationData, m: DegreeVector, name: str = "y") -> AlgebraPresentation:
    """One invertible generator y of degree -m."""
    spec = GeneratorSpec(name, degree_neg(deformation.check_degree(m)), invertible=True)
    return AlgebraPresentation(deformation, [spec], name="A_T")


def dual_numbers(deformation: DeformationData, name: str = "eps") -> AlgebraPresentation:
    """D = F_0/(eps^2)."""
    spec = GeneratorSpec(name, deformation.zero)
    alg = FreeAlgebra(deformation, [spec])
    e = alg.gen(0)
    return AlgebraPresentation(deformation, [spec], [e * e], name="D")


# ============================================================================
# JSON documents
# ============================================================================

def presentation_to_dict(p: AlgebraPresentation) -> Dict:
    gens = [
        {"name": g.name, "degree": list(g.degree), "invertible": g.invertible}
        for g in p.generators if not g.inverse_of
    ]
    rels = [str(r) for k, r in enumerate(p.relations) if not p.is_automatic_relation(k)]
    doc = {
        "version": PRESENTATION_VERSION,
        "rank": p.deformation.rank,
        "theta": [list(row) for row in p.deformation.theta],
        "generators": gens,
        "relations": rels,
    }
    if p.name:
        doc["name"] = p.name
    return doc


def presentation_from_dict(doc: Dict) -> AlgebraPresentation:
    version = doc.get("version", PRESENTATION_VERSION)
    if version != PRESENTATION_VERSION:
        raise ValidationError(f"unsupported presentation document version {version}")
    deformation = DeformationData(rank=int(doc["rank"]), theta=tuple(tuple(r) for r in doc["theta"]))
    specs = [
        GeneratorSpec(g["name"], tuple(g["degree"]), bool(g.get("invertible", False)))
        for g in doc.get("generators", [])
    ]
    return AlgebraPresentation(deformation, specs, list(doc.get("relations", [])), name=doc.get("name"))
