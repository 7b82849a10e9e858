# -*- coding: utf-8 -*-
"""
Stage-wise mapping spaces and infinitesimal automorphisms.

A point of the mapping space X_A^{X_A} at stage B is an algebra morphism
A -> B ⊔ A (the stage generators come first). Composition of such points is

    (g • h)(x) = sum  b * h(a)    over the terms b ⊗ a of g(x),

products taken in B ⊔ A. The identity point is the second coproduct leg.

At the dual-numbers stage D ⊔ B a point pointed at the identity splits as
g = iota_A + eps * g_1 and g_1 is an H-derivation A -> B ⊔ A. HDerivations are
stored by generator images and evaluated on arbitrary elements through the
Leibniz rule v(a a') = v(a) a' + a v(a').
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from comodule_algebra import INHOMOGENEOUS, Element, FreeAlgebra, Monomial, h_degree
from errors import (
    DegreeViolation, InvariantBreach, LeibnizViolation, NotCoinvariant, NotPointed,
    StageMismatch, ValidationError,
)
from morphisms import AlgebraMorphism, apply, morphisms_equal, validate_morphism
from phase_ring import Laurent, format_degree, linsolve
from presentations import (
    AlgebraPresentation, ElementLike, coproduct, dual_numbers, standard_monomials,
)


# ============================================================================
# Stages
# ============================================================================

@dataclass(frozen=True)
class StageProduct:
    """B ⊔ A with its legs iota_stage: B -> B ⊔ A and iota_space: A -> B ⊔ A."""

    presentation: AlgebraPresentation
    iota_stage: AlgebraMorphism
    iota_space: AlgebraMorphism

    @property
    def stage_ngens(self) -> int:
        return self.iota_stage.source.ngens

    def split(self, e: Monomial) -> Tuple[Monomial, Monomial]:
        n = self.stage_ngens
        return e[:n], e[n:]

    def stage_monomial(self, e_b: Monomial) -> Monomial:
        return tuple(e_b) + (0,) * (self.presentation.ngens - len(e_b))

    def space_monomial(self, e_a: Monomial) -> Monomial:
        return (0,) * self.stage_ngens + tuple(e_a)


@lru_cache(maxsize=64)
def stage_product(space: AlgebraPresentation, stage: AlgebraPresentation) -> StageProduct:
    pres, iota_b, iota_a = coproduct(stage, space)
    return StageProduct(pres, iota_b, iota_a)


@dataclass(frozen=True)
class DualStage:
    """D ⊔ B with D = F_0/(eps^2); eps is generator 0."""

    base: AlgebraPresentation
    presentation: AlgebraPresentation


@lru_cache(maxsize=32)
def dual_stage(base: AlgebraPresentation) -> DualStage:
    pres, _, _ = coproduct(dual_numbers(base.deformation), base)
    return DualStage(base, pres)


def recognize_dual_stage(stage: AlgebraPresentation) -> Optional[DualStage]:
    """
    The DualStage presented by stage when stage is D ⊔ B for some B, else None.

    B is read off the generators after eps and the relations not touching eps.
    """
    gens = stage.generators
    d = stage.deformation
    if not gens or gens[0].invertible or gens[0].inverse_of or gens[0].degree != d.zero:
        return None
    eps = stage.algebra.gen(0)
    if not stage.relations or stage.relations[0] != eps * eps:
        return None
    base_alg = FreeAlgebra(d, list(gens[1:]))
    rels = []
    for r in stage.relations[1:]:
        if any(mono[0] for mono in r.monomials()):
            return None
        rels.append(Element(base_alg, {mono[1:]: c for mono, c in r.items()}))
    try:
        base = AlgebraPresentation(d, list(gens[1:]), rels, stage.relation_degrees[1:])
    except ValidationError:
        return None
    candidate = dual_stage(base)
    return candidate if candidate.presentation == stage else None


class MappingStageElement:
    """A stage-B point of the mapping space: inner morphism A -> B ⊔ A."""

    def __init__(self, space: AlgebraPresentation, stage: AlgebraPresentation,
                 inner: AlgebraMorphism, dual: Optional[DualStage] = None):
        self.space = space
        self.stage = stage
        self.product = stage_product(space, stage)
        if inner.source != space or inner.target != self.product.presentation:
            raise StageMismatch("inner morphism must map the space into stage ⊔ space")
        self.inner = inner
        self.dual = dual

    def __repr__(self) -> str:
        return f"MappingStageElement({self.inner!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, MappingStageElement):
            return NotImplemented
        return self.space == other.space and self.stage == other.stage and morphisms_equal(self.inner, other.inner)

    def __hash__(self) -> int:
        return hash((self.space, self.stage))

    def apply(self, a: ElementLike) -> Element:
        return apply(self.inner, a)


def stage_element(space: AlgebraPresentation, stage: AlgebraPresentation,
                  images: Sequence[ElementLike], dual: Optional[DualStage] = None) -> MappingStageElement:
    prod = stage_product(space, stage)
    inner = AlgebraMorphism(space, prod.presentation, list(images))
    return MappingStageElement(space, stage, inner, dual)


def identity_stage(space: AlgebraPresentation, stage: AlgebraPresentation) -> MappingStageElement:
    """The point a -> 1 ⊗ a."""
    prod = stage_product(space, stage)
    return MappingStageElement(space, stage, prod.iota_space)


def scaling_stage(space: AlgebraPresentation, stage: AlgebraPresentation, c) -> MappingStageElement:
    """x -> 1 ⊗ c x on every generator; inverse companions scale by 1/c."""
    c = Laurent.coerce(c)
    prod = stage_product(space, stage)
    images = []
    for img, g in zip(prod.iota_space.images, space.generators):
        images.append(img.scale(c.inverse() if g.inverse_of else c))
    return MappingStageElement(space, stage, AlgebraMorphism(space, prod.presentation, images))


def _check_same(g, h):
    if g.space != h.space or g.stage != h.stage:
        raise StageMismatch("stage elements live over different stages or spaces")


def _push_through(prod: StageProduct, image: Element, h_value) -> Element:
    """sum over terms c b⊗a of image of c * b * h_value(a)."""
    target = prod.presentation
    out = target.algebra.zero()
    for mono, c in target.reduce(image).items():
        e_b, e_a = prod.split(mono)
        out = out + h_value(e_a).left_monomial_mul(prod.stage_monomial(e_b)).scale(c)
    return target.reduce(out)


def monoid_compose(g: MappingStageElement, h: MappingStageElement) -> MappingStageElement:
    """
    g • h, dual to g∘(id × h)∘(diag × id).

    Raises:
        StageMismatch: g and h differ in stage or space
    """
    _check_same(g, h)
    prod = g.product
    space = g.space

    def h_value(e_a: Monomial) -> Element:
        return apply(h.inner, space.algebra.monomial(e_a))

    images = [_push_through(prod, img, h_value) for img in g.inner.images]
    inner = AlgebraMorphism(space, prod.presentation, images)
    return MappingStageElement(space, g.stage, inner, g.dual)


def verify_inverse(g: MappingStageElement, gi: MappingStageElement) -> bool:
    """g • gi = gi • g = e, generator-wise."""
    _check_same(g, gi)
    e = identity_stage(g.space, g.stage)
    return monoid_compose(g, gi) == e and monoid_compose(gi, g) == e


# ============================================================================
# H-derivations
# ============================================================================

class HDerivation:
    """Generator images v(x_i) in B ⊔ A of an H-derivation A -> B ⊔ A."""

    def __init__(self, space: AlgebraPresentation, stage: AlgebraPresentation,
                 images: Sequence[ElementLike], cap: Optional[int] = None, name: Optional[str] = None):
        if len(images) != space.ngens:
            raise ValidationError(f"derivation needs {space.ngens} images, got {len(images)}", name=name)
        self.space = space
        self.stage = stage
        self.product = stage_product(space, stage)
        target = self.product.presentation
        self.images: Tuple[Element, ...] = tuple(target.reduce(_rehome(target, img)) for img in images)
        self.cap = cap
        self.name = name

    def __repr__(self) -> str:
        pairs = ", ".join(f"{g.name} -> {img}" for g, img in zip(self.space.generators, self.images))
        return f"HDerivation({{{pairs}}})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, HDerivation):
            return NotImplemented
        return self.space == other.space and self.stage == other.stage and self.images == other.images

    def __hash__(self) -> int:
        return hash((self.space, self.stage, self.images))

    def is_zero(self) -> bool:
        return all(img.is_zero() for img in self.images)

    def _combine(self, other: "HDerivation", sign: int) -> "HDerivation":
        _check_same(self, other)
        images = [a + b.scale(sign) for a, b in zip(self.images, other.images)]
        return HDerivation(self.space, self.stage, images, self.cap)

    def __add__(self, other: "HDerivation") -> "HDerivation":
        return self._combine(other, 1)

    def __sub__(self, other: "HDerivation") -> "HDerivation":
        return self._combine(other, -1)

    def __neg__(self) -> "HDerivation":
        return self.scale(-1)

    def scale(self, c) -> "HDerivation":
        return HDerivation(self.space, self.stage, [img.scale(c) for img in self.images], self.cap)

    def apply(self, a: ElementLike) -> Element:
        return leibniz_extend(self, a)


def _rehome(p: AlgebraPresentation, a: ElementLike) -> Element:
    a = p.element(a)
    if a.algebra is not p.algebra:
        a = Element(p.algebra, dict(a.items()))
    return a


def zero_hderivation(space: AlgebraPresentation, stage: AlgebraPresentation) -> HDerivation:
    prod = stage_product(space, stage)
    return HDerivation(space, stage, [prod.presentation.algebra.zero()] * space.ngens)


def _leibniz_unreduced(prod: StageProduct, images: Sequence[Element], a: Element) -> Element:
    target = prod.presentation
    out = target.algebra.zero()
    for mono, c in a.items():
        word = [i for i, k in enumerate(mono) for _ in range(k)]
        for p, letter in enumerate(word):
            if images[letter].is_zero():
                continue
            pre = [0] * len(mono)
            suf = [0] * len(mono)
            for i in word[:p]:
                pre[i] += 1
            for i in word[p + 1:]:
                suf[i] += 1
            term = images[letter].left_monomial_mul(prod.space_monomial(pre))
            term = term.right_monomial_mul(prod.space_monomial(suf))
            out = out + term.scale(c)
    return out


def leibniz_extend(v: HDerivation, a: ElementLike) -> Element:
    """v on an arbitrary element of the free algebra of A, reduced in B ⊔ A."""
    a = v.space.element(a)
    return v.product.presentation.reduce(_leibniz_unreduced(v.product, v.images, a))


def validate_hderivation(v: HDerivation) -> bool:
    """
    Raises:
        DegreeViolation: v(x_i) is not of degree m_i
        LeibnizViolation: the Leibniz extension does not kill relation k
    """
    for i, img in enumerate(v.images):
        if img.is_zero():
            continue
        deg = h_degree(img)
        expected = v.space.algebra.degree(i)
        if deg is INHOMOGENEOUS or deg != expected:
            shown = "inhomogeneous" if deg is INHOMOGENEOUS else format_degree(deg)
            raise DegreeViolation(
                f"v({v.space.generators[i].name}) has degree {shown}, expected {format_degree(expected)}",
                index=i, name=v.name, residue=img,
            )
    for k, f in enumerate(v.space.relations):
        residue = leibniz_extend(v, f)
        if not residue.is_zero():
            raise LeibnizViolation(f"relation {k} ({f}) is sent to {residue}", index=k, name=v.name, residue=residue)
    return True


# ============================================================================
# Tangent correspondence
# ============================================================================

def _drop_eps(prod_dual: StageProduct, prod: StageProduct, a: Element) -> Tuple[Element, Element]:
    """Split an element of (D ⊔ B) ⊔ A into its eps^0 and eps^1 parts in B ⊔ A."""
    alg = prod.presentation.algebra
    parts: Tuple[Dict, Dict] = ({}, {})
    for mono, c in prod_dual.presentation.reduce(a).items():
        if mono[0] > 1:
            raise InvariantBreach("eps^2 survived reduction at the dual stage")
        parts[mono[0]][mono[1:]] = c
    return Element(alg, parts[0]), Element(alg, parts[1])


def tangent_split(g: MappingStageElement) -> Tuple[AlgebraMorphism, HDerivation]:
    """
    g = iota_A + eps * g_1  ->  (g_0, g_1).

    A stage equal to coproduct(D, B) is accepted even when it was not built
    by dual_stage.

    Raises:
        StageMismatch: g does not live at a dual-numbers stage
        NotPointed: g_0 is not the identity point
    """
    dual = g.dual or recognize_dual_stage(g.stage)
    if dual is None:
        raise StageMismatch("tangent_split needs a point at a dual-numbers stage D ⊔ B")
    base = dual.base
    prod = stage_product(g.space, base)
    zeroth, first = [], []
    for img in g.inner.images:
        a0, a1 = _drop_eps(g.product, prod, img)
        zeroth.append(a0)
        first.append(a1)
    g0 = AlgebraMorphism(g.space, prod.presentation, zeroth)
    if not morphisms_equal(g0, prod.iota_space):
        raise NotPointed("the eps-free part of the point is not the identity")
    g1 = HDerivation(g.space, base, first)
    validate_hderivation(g1)
    return g0, g1


def tangent_lift(d: HDerivation) -> Tuple[MappingStageElement, MappingStageElement]:
    """
    The point iota_A + eps * d at stage D ⊔ B and its inverse iota_A - eps * d.

    Raises:
        LeibnizViolation: d is not an H-derivation
    """
    validate_hderivation(d)
    dual = dual_stage(d.stage)
    prod = stage_product(d.space, dual.presentation)
    alg = prod.presentation.algebra
    eps = alg.gen(0)

    def lift(sign: int) -> MappingStageElement:
        images = []
        for ident, img in zip(prod.iota_space.images, d.images):
            moved = Element(alg, {(0,) + m: c for m, c in img.items()})
            images.append(ident + (eps * moved).scale(sign))
        inner = AlgebraMorphism(d.space, prod.presentation, images)
        validate_morphism(inner)
        return MappingStageElement(d.space, dual.presentation, inner, dual)

    g, g_inv = lift(1), lift(-1)
    if not verify_inverse(g, g_inv):
        raise InvariantBreach("lifted tangent vector failed its inverse check")
    return g, g_inv


def te_aut_basis(space: AlgebraPresentation, stage: AlgebraPresentation, total_cap: int) -> List[HDerivation]:
    """
    Kernel basis of v -> (v(f_k))_k over images spanned by standard monomials of
    B ⊔ A in degree m_i up to total_cap.
    """
    prod = stage_product(space, stage)
    target = prod.presentation
    alg = target.algebra
    unknowns: List[Tuple[int, Monomial]] = []
    for i in range(space.ngens):
        for u in standard_monomials(target, space.algebra.degree(i), total_cap):
            unknowns.append((i, u))
    if not unknowns:
        return []

    columns: List[List[Element]] = []
    for i, u in unknowns:
        images = [alg.zero()] * space.ngens
        images[i] = alg.monomial(u)
        columns.append([target.reduce(_leibniz_unreduced(prod, images, f)) for f in space.relations])

    rows: List[Dict[int, Laurent]] = []
    for k in range(len(space.relations)):
        monomials = sorted({m for col in columns for m in col[k].monomials()})
        for w in monomials:
            row = {j: col[k].coefficient(w) for j, col in enumerate(columns) if not col[k].coefficient(w).is_zero()}
            if row:
                rows.append(row)
    solution = linsolve(rows, ncols=len(unknowns))

    basis = []
    for vec in solution.kernel:
        images = [alg.zero()] * space.ngens
        for (i, u), coeff in zip(unknowns, vec):
            if not coeff.is_zero():
                images[i] = images[i] + alg.monomial(u, coeff)
        basis.append(HDerivation(space, stage, images, cap=total_cap))
    return basis


def hder_bracket(v: HDerivation, w: HDerivation) -> HDerivation:
    """
    [v, w](x) = sum_{b⊗a in w(x)} b v(a) - sum_{b⊗a in v(x)} b w(a).

    Raises:
        StageMismatch: v and w differ in stage or space
    """
    _check_same(v, w)
    prod = v.product
    space = v.space

    def extend(d: HDerivation):
        return lambda e_a: leibniz_extend(d, space.algebra.monomial(e_a))

    images = []
    for vi, wi in zip(v.images, w.images):
        images.append(_push_through(prod, wi, extend(v)) - _push_through(prod, vi, extend(w)))
    out = HDerivation(space, v.stage, images, cap=v.cap)
    validate_hderivation(out)
    return out


def hder_scalar_action(b: ElementLike, v: HDerivation) -> HDerivation:
    """
    (b·v)(a) = (b ⊗ 1) v(a) for coinvariant b of the stage.

    Raises:
        NotCoinvariant: b is not of degree 0
    """
    b = v.stage.element(b)
    deg = h_degree(b)
    if deg is INHOMOGENEOUS or (not b.is_zero() and deg != v.stage.deformation.zero):
        raise NotCoinvariant(f"{b} is not a coinvariant of the stage", residue=b)
    lifted = v.product.iota_stage.apply(b)
    images = [lifted * img for img in v.images]
    return HDerivation(v.space, v.stage, images, cap=v.cap)


def hderivation_to_dict(v: HDerivation, space_name: Optional[str] = None,
                        stage_name: Optional[str] = None) -> Dict:
    return {
        "space": space_name or v.space.name,
        "stage": stage_name or v.stage.name,
        "images": [str(img) for img in v.images],
        "cap": v.cap,
    }


def hderivation_from_dict(doc: Dict, algebras: Dict[str, AlgebraPresentation]) -> HDerivation:
    try:
        space = algebras[doc["space"]]
        stage = algebras[doc["stage"]]
    except KeyError as exc:
        raise ValidationError(f"derivation refers to unknown algebra {exc.args[0]!r}") from None
    return HDerivation(space, stage, list(doc["images"]), cap=doc.get("cap"), name=doc.get("name"))
