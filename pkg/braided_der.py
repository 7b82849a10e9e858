# -*- coding: utf-8 -*-
"""
Braided derivations of a finitely presented algebra A.

A braided derivation is a formal sum L = sum_j L_j ∂_j with coefficients in A.
The partial derivatives obey the braided Leibniz rule

    ∂_j(a a') = ∂_j(a) a' + chi(deg a, -m_j) a ∂_j(a')

and L is admissible when sum_j L_j ∂_j(f_k) vanishes in A for every relation.
A homogeneous L has degree deg(L_j) - m_j (the same for every nonzero L_j).

The comparison map xi sends a coinvariant tensor b ⊗ L (b in a stage B) to the
H-derivation x -> b ⊗ ev(L, x); psi merges two such tensors with a phase so the
Lie brackets on both sides can be compared.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from comodule_algebra import INHOMOGENEOUS, Element, Monomial, h_degree
from errors import DegreeError, InvalidGenerator, LeibnizViolation, NotCoinvariant, ValidationError
from mapping_aut import HDerivation, hder_bracket, stage_product, te_aut_basis, validate_hderivation
from phase_ring import (
    DegreeVector, Laurent, chi, degree_add, degree_neg, degree_sub, linsolve,
)
from presentations import AlgebraPresentation, ElementLike, standard_monomials


# ============================================================================
# Partial derivatives and evaluation
# ============================================================================

def partial(j: int, a: Element) -> Element:
    """
    ∂_j on the free algebra: x^e -> e_j chi(sum_{i<j} e_i m_i, -m_j) x^(e - δ_j).

    Raises:
        InvalidGenerator: j is not a generator index
    """
    alg = a.algebra
    if not 0 <= j < alg.ngens:
        raise InvalidGenerator(f"generator index {j} out of range", index=j)
    d = alg.deformation
    minus_mj = degree_neg(alg.degree(j))
    terms: Dict[Monomial, Laurent] = {}
    for mono, c in a.items():
        k = mono[j]
        if not k:
            continue
        prefix = [0] * alg.ngens
        prefix[:j] = mono[:j]
        phase = d.pairing(alg.monomial_degree(tuple(prefix)), minus_mj)
        rest = list(mono)
        rest[j] -= 1
        terms[tuple(rest)] = (c * k).shift(phase)
    return Element(alg, terms)


class BraidedDerivation:
    """L = sum_j L_j ∂_j with reduced coefficients in A."""

    def __init__(self, algebra: AlgebraPresentation, coeffs: Sequence[ElementLike],
                 cap: Optional[int] = None, name: Optional[str] = None):
        if len(coeffs) != algebra.ngens:
            raise ValidationError(f"derivation needs {algebra.ngens} coefficients, got {len(coeffs)}", name=name)
        self.algebra = algebra
        self.coeffs: Tuple[Element, ...] = tuple(algebra.reduce(algebra.element(c)) for c in coeffs)
        self.cap = cap
        self.name = name

    def __repr__(self) -> str:
        parts = [f"({c})*d_{g.name}" for c, g in zip(self.coeffs, self.algebra.generators) if not c.is_zero()]
        return "BraidedDerivation(" + (" + ".join(parts) or "0") + ")"

    def __eq__(self, other) -> bool:
        if not isinstance(other, BraidedDerivation):
            return NotImplemented
        return self.algebra == other.algebra and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.algebra, self.coeffs))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other: "BraidedDerivation") -> "BraidedDerivation":
        return BraidedDerivation(self.algebra, [a + b for a, b in zip(self.coeffs, other.coeffs)], self.cap)

    def __sub__(self, other: "BraidedDerivation") -> "BraidedDerivation":
        return self + other.scale(-1)

    def __neg__(self) -> "BraidedDerivation":
        return self.scale(-1)

    def scale(self, c) -> "BraidedDerivation":
        return BraidedDerivation(self.algebra, [a.scale(c) for a in self.coeffs], self.cap)

    def left_mul(self, a: Element) -> "BraidedDerivation":
        """a · L = sum_j (a L_j) ∂_j."""
        return BraidedDerivation(self.algebra, [a * c for c in self.coeffs], self.cap)


def derivation_degree(L: BraidedDerivation):
    """Common degree deg(L_j) - m_j, INHOMOGENEOUS when the components disagree; zero for L = 0."""
    alg = L.algebra.algebra
    found = None
    for j, c in enumerate(L.coeffs):
        if c.is_zero():
            continue
        deg = h_degree(c)
        if deg is INHOMOGENEOUS:
            return INHOMOGENEOUS
        shifted = degree_sub(deg, alg.degree(j))
        if found is None:
            found = shifted
        elif found != shifted:
            return INHOMOGENEOUS
    return found if found is not None else L.algebra.deformation.zero


def derivation_components(L: BraidedDerivation) -> Dict[DegreeVector, BraidedDerivation]:
    """Split L into homogeneous components keyed by derivation degree."""
    alg = L.algebra.algebra
    parts: Dict[DegreeVector, List[Dict[Monomial, Laurent]]] = {}
    for j, c in enumerate(L.coeffs):
        for mono, coeff in c.items():
            d = degree_sub(alg.monomial_degree(mono), alg.degree(j))
            parts.setdefault(d, [dict() for _ in L.coeffs])[j][mono] = coeff
    return {
        d: BraidedDerivation(L.algebra, [Element(alg, t) for t in parts[d]], L.cap)
        for d in sorted(parts)
    }


def ev(L: BraidedDerivation, a: ElementLike) -> Element:
    """sum_j L_j ∂_j(a), reduced in A."""
    p = L.algebra
    a = p.element(a)
    out = p.algebra.zero()
    for j, c in enumerate(L.coeffs):
        if not c.is_zero():
            out = out + c * partial(j, a)
    return p.reduce(out)


def validate_braided_derivation(L: BraidedDerivation) -> bool:
    """
    Raises:
        LeibnizViolation: sum_j L_j ∂_j(f_k) is nonzero for relation k
    """
    for k, f in enumerate(L.algebra.relations):
        residue = ev(L, f)
        if not residue.is_zero():
            raise LeibnizViolation(f"relation {k} ({f}) is sent to {residue}", index=k, name=L.name, residue=residue)
    return True


def der_basis(a: AlgebraPresentation, total_cap: int,
              degree: Optional[DegreeVector] = None) -> List[BraidedDerivation]:
    """
    Kernel basis of L -> (sum_j L_j ∂_j(f_k))_k with coefficients spanned by
    standard monomials up to total_cap, solved degree by degree.

    With degree given only that homogeneous component is returned.
    """
    alg = a.algebra
    monomials = standard_monomials(a, None, total_cap)
    groups: Dict[DegreeVector, List[Tuple[int, Monomial]]] = {}
    for j in range(a.ngens):
        for u in monomials:
            d = degree_sub(alg.monomial_degree(u), alg.degree(j))
            if degree is None or d == tuple(degree):
                groups.setdefault(d, []).append((j, u))

    partials = [[partial(j, f) for f in a.relations] for j in range(a.ngens)]
    basis: List[BraidedDerivation] = []
    for d in sorted(groups):
        unknowns = groups[d]
        columns = [[a.reduce(alg.monomial(u) * partials[j][k]) for k in range(len(a.relations))]
                   for j, u in unknowns]
        rows = []
        for k in range(len(a.relations)):
            for w in sorted({m for col in columns for m in col[k].monomials()}):
                row = {c: col[k].coefficient(w) for c, col in enumerate(columns)
                       if not col[k].coefficient(w).is_zero()}
                if row:
                    rows.append(row)
        solution = linsolve(rows, ncols=len(unknowns))
        for vec in solution.kernel:
            coeffs = [alg.zero()] * a.ngens
            for (j, u), c in zip(unknowns, vec):
                if not c.is_zero():
                    coeffs[j] = coeffs[j] + alg.monomial(u, c)
            basis.append(BraidedDerivation(a, coeffs, cap=total_cap))
    return basis


def der_bracket(L: BraidedDerivation, Lp: BraidedDerivation) -> BraidedDerivation:
    """
    [L, L']_k = sum_j L_j ∂_j(L'_k)
              - sum_j chi(deg t - m_j, deg s - m_k) t ∂_j(s)

    with t running over the terms of L'_j and s over the terms of L_k.
    """
    p = L.algebra
    if Lp.algebra != p:
        raise ValidationError("derivations of different algebras")
    alg = p.algebra
    d = p.deformation
    out = []
    for k in range(p.ngens):
        total = alg.zero()
        for j in range(p.ngens):
            if not L.coeffs[j].is_zero():
                total = total + L.coeffs[j] * partial(j, Lp.coeffs[k])
        m_k = alg.degree(k)
        for j in range(p.ngens):
            m_j = alg.degree(j)
            for u, cu in Lp.coeffs[j].items():
                deg_t = degree_sub(alg.monomial_degree(u), m_j)
                for w, cw in L.coeffs[k].items():
                    ds = partial(j, alg.monomial(w))
                    if ds.is_zero():
                        continue
                    deg_s = degree_sub(alg.monomial_degree(w), m_k)
                    phase = chi(d, deg_t, deg_s)
                    total = total - (alg.monomial(u) * ds).scale(cu * cw * phase)
        out.append(p.reduce(total))
    return BraidedDerivation(p, out, cap=L.cap)


def derivation_to_dict(L: BraidedDerivation, algebra_name: Optional[str] = None) -> Dict:
    return {
        "algebra": algebra_name or L.algebra.name,
        "coeffs": [str(c) for c in L.coeffs],
        "cap": L.cap,
    }


def derivation_from_dict(doc: Dict, algebras: Dict[str, AlgebraPresentation]) -> BraidedDerivation:
    try:
        algebra = algebras[doc["algebra"]]
    except KeyError:
        raise ValidationError(f"derivation refers to unknown algebra {doc.get('algebra')!r}") from None
    return BraidedDerivation(algebra, list(doc["coeffs"]), cap=doc.get("cap"), name=doc.get("name"))


# ============================================================================
# Stage tensors, xi and psi
# ============================================================================

@dataclass
class JStageVector:
    """Finite sum of coinvariant tensors b ⊗ L with b in the stage B."""

    stage: AlgebraPresentation
    space: AlgebraPresentation
    terms: List[Tuple[Element, BraidedDerivation]] = field(default_factory=list)

    def scale_by(self, b: ElementLike) -> "JStageVector":
        b = self.stage.element(b)
        return JStageVector(self.stage, self.space, [(self.stage.reduce(b * x), L) for x, L in self.terms])

    def __repr__(self) -> str:
        return "JStageVector(" + " + ".join(f"({b})⊗{L!r}" for b, L in self.terms) + ")"


def _pair_degrees(b: Element, L: BraidedDerivation) -> Tuple[DegreeVector, DegreeVector]:
    db = h_degree(b)
    dl = derivation_degree(L)
    if db is INHOMOGENEOUS or dl is INHOMOGENEOUS:
        raise DegreeError("stage tensor pair is not homogeneous")
    return db, dl


def xi(stage: AlgebraPresentation, t: JStageVector) -> HDerivation:
    """
    ξ(b ⊗ L)(x_i) = b ⊗ ev(L, x_i) summed over the pairs of t.

    Raises:
        NotCoinvariant: some pair has deg b + deg L != 0
    """
    space = t.space
    prod = stage_product(space, stage)
    alg = prod.presentation.algebra
    zero = space.deformation.zero
    images = [alg.zero()] * space.ngens
    for b, L in t.terms:
        b = stage.element(b)
        if b.is_zero() or L.is_zero():
            continue
        db, dl = _pair_degrees(b, L)
        if degree_add(db, dl) != zero:
            raise NotCoinvariant(f"pair ({b}) ⊗ L has nonzero total degree")
        for i in range(space.ngens):
            value = ev(L, space.algebra.gen(i))
            for mb, cb in b.items():
                for ma, ca in value.items():
                    images[i] = images[i] + alg.monomial(tuple(mb) + tuple(ma), cb * ca)
    return HDerivation(space, stage, images, cap=t.terms[0][1].cap if t.terms else None)


def j_stage_basis(space: AlgebraPresentation, stage: AlgebraPresentation, total_cap: int) -> List[JStageVector]:
    """
    Pairs b ⊗ L with b a standard monomial of the stage of degree n and L a
    basis derivation of degree -n whose coefficients fit in total_cap - |b|.
    """
    out = []
    for u in standard_monomials(stage, None, total_cap):
        b = stage.algebra.monomial(u)
        n = stage.algebra.monomial_degree(u)
        for L in der_basis(space, total_cap - sum(u), degree=degree_neg(n)):
            out.append(JStageVector(stage, space, [(b, L)]))
    return out


@dataclass
class StageTensor:
    """Coinvariant sum of b ⊗ v ⊗ w with b in the stage."""

    stage: AlgebraPresentation
    terms: List[Tuple[Element, BraidedDerivation, BraidedDerivation]] = field(default_factory=list)


def psi(stage: AlgebraPresentation, t1: JStageVector, t2: JStageVector) -> StageTensor:
    """
    (b ⊗ v) ⊗ (b' ⊗ w) -> chi(deg b', deg v) (b b') ⊗ v ⊗ w.

    Raises:
        DegreeError: a pair is not homogeneous
    """
    d = stage.deformation
    terms = []
    for b, v in t1.terms:
        _, dv = _pair_degrees(b, v)
        for b2, w in t2.terms:
            db2, _ = _pair_degrees(b2, w)
            merged = stage.reduce(b * b2).scale(chi(d, db2, dv))
            if not merged.is_zero():
                terms.append((merged, v, w))
    return StageTensor(stage, terms)


def bracket_tensor(t: StageTensor, space: AlgebraPresentation) -> JStageVector:
    """Apply the derivation bracket in the last two slots: b ⊗ v ⊗ w -> b ⊗ [v, w]."""
    out = []
    for b, v, w in t.terms:
        bracket = der_bracket(v, w)
        if not bracket.is_zero():
            out.append((b, bracket))
    return JStageVector(t.stage, space, out)


@dataclass
class XiReport:
    space: str
    stage: str
    cap: int
    j_dim: int
    te_dim: int
    rank: int
    injective: bool
    surjective: bool
    bracket_ok: bool
    failures: List[str] = field(default_factory=list)

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


def _coordinates(v: HDerivation, index: Dict[Tuple[int, Monomial], int]) -> Dict[int, Laurent]:
    row = {}
    for i, img in enumerate(v.images):
        for mono, c in img.items():
            key = (i, mono)
            if key not in index:
                index[key] = len(index)
            row[index[key]] = c
    return row


def verify_xi_iso(space: AlgebraPresentation, stage: AlgebraPresentation, total_cap: int) -> XiReport:
    """Compare j-stage and T_eAut bases at one cap: rank of ξ and bracket compatibility."""
    j_basis = j_stage_basis(space, stage, total_cap)
    te = te_aut_basis(space, stage, total_cap)
    failures: List[str] = []
    images = []
    all_valid = True
    for n, t in enumerate(j_basis):
        v = xi(stage, t)
        try:
            validate_hderivation(v)
        except ValidationError as exc:
            all_valid = False
            failures.append(f"xi image {n} is not an H-derivation: {exc}")
        images.append(v)

    index: Dict[Tuple[int, Monomial], int] = {}
    rows = [_coordinates(v, index) for v in images]
    rank = linsolve(rows, ncols=len(index)).rank if rows else 0

    bracket_ok = True
    for a, t1 in enumerate(j_basis):
        for b, t2 in enumerate(j_basis):
            lhs = xi(stage, bracket_tensor(psi(stage, t1, t2), space))
            rhs = hder_bracket(images[a], images[b])
            if lhs != rhs:
                bracket_ok = False
                failures.append(f"bracket diagram fails on basis pair ({a}, {b})")

    return XiReport(
        space=space.name or "A",
        stage=stage.name or "B",
        cap=total_cap,
        j_dim=len(j_basis),
        te_dim=len(te),
        rank=rank,
        injective=rank == len(j_basis),
        surjective=rank == len(te) and all_valid,
        bracket_ok=bracket_ok,
        failures=failures,
    )
