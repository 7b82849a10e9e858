# -*- coding: utf-8 -*-
"""
Zariski covers by principal localizations and desk-scale sheaf checks.

A cover of A is a finite family of H-coinvariant elements s_i with witnesses
a_i such that sum_i a_i s_i = 1 in A. Charts are the localizations A[s_i^-1];
overlaps are the iterated localizations A[s_i^-1, s_j^-1].

Gluing is cap-bounded exact linear algebra over the standard-monomial span of
the base: results are verified up to the requested total degree only.
"""

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from comodule_algebra import INHOMOGENEOUS, Element, h_degree
from errors import (
    AmbiguousAtCap, EmptyCover, Inconsistent, IndexOutOfRange, MorphismSourceMismatch,
    NonLaurentNormalForm, NoSolutionAtCap, NotCoinvariant, NotMatching,
    PartitionOfUnityFails, ValidationError,
)
from morphisms import AlgebraMorphism
from phase_ring import linsolve
from presentations import AlgebraPresentation, ElementLike, localize, standard_monomials


class ZariskiCover:
    """Covering family {A -> A[s_i^-1]} with partition-of-unity witnesses."""

    def __init__(self, base: AlgebraPresentation, elements: Sequence[ElementLike],
                 witnesses: Sequence[ElementLike], name: Optional[str] = None):
        if not elements:
            raise EmptyCover("a cover needs at least one element", name=name)
        if len(witnesses) != len(elements):
            raise ValidationError(
                f"cover has {len(elements)} elements but {len(witnesses)} witnesses", name=name
            )
        self.base = base
        self.elements: Tuple[Element, ...] = tuple(base.element(s) for s in elements)
        self.witnesses: Tuple[Element, ...] = tuple(base.element(a) for a in witnesses)
        self.name = name
        self._charts: Dict[int, Tuple[AlgebraPresentation, AlgebraMorphism]] = {}
        self._overlaps: Dict[Tuple[int, int], Tuple[AlgebraPresentation, AlgebraMorphism, AlgebraMorphism]] = {}

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        pairs = ", ".join(f"{s} : {a}" for s, a in zip(self.elements, self.witnesses))
        return f"ZariskiCover({pairs})"

    def _check_index(self, i: int):
        if not 0 <= i < len(self.elements):
            raise IndexOutOfRange(f"cover index {i} outside 0..{len(self.elements) - 1}", index=i, name=self.name)

    def localization(self, i: int) -> Tuple[AlgebraPresentation, AlgebraMorphism]:
        """(A[s_i^-1], ell_{s_i}), cached."""
        self._check_index(i)
        if i not in self._charts:
            self._charts[i] = localize(self.base, self.elements[i], f"y{i + 1}")
        return self._charts[i]

    @property
    def localizations(self) -> List[Tuple[AlgebraPresentation, AlgebraMorphism]]:
        return [self.localization(i) for i in range(len(self.elements))]

    def chart_element(self, i: int, a: ElementLike) -> Element:
        chart, _ = self.localization(i)
        return chart.element(a)


def validate_cover(c: ZariskiCover) -> bool:
    """
    Raises:
        NotCoinvariant: s_i is not of degree 0 (index i)
        PartitionOfUnityFails: sum a_i s_i - 1 has a nonzero residue
    """
    zero = c.base.deformation.zero
    for i, s in enumerate(c.elements):
        deg = h_degree(s)
        if deg is INHOMOGENEOUS or deg != zero:
            raise NotCoinvariant(f"cover element {i} ({s}) is not H-coinvariant", index=i, name=c.name, residue=s)
    total = c.base.algebra.zero()
    for a, s in zip(c.witnesses, c.elements):
        total = total + a * s
    residue = c.base.reduce(total - c.base.algebra.one())
    if not residue.is_zero():
        raise PartitionOfUnityFails(
            f"sum of witnesses times elements differs from 1 by {residue}", name=c.name, residue=residue
        )
    return True


def restrict(c: ZariskiCover, i: int, a: ElementLike) -> Element:
    """Image of a base element in the chart A[s_i^-1]."""
    _, ell = c.localization(i)
    return ell.apply(a)


def intersection(c: ZariskiCover, i: int, j: int) -> Tuple[AlgebraPresentation, AlgebraMorphism, AlgebraMorphism]:
    """
    A[s_i^-1, s_j^-1] with the restrictions f_{i;j}: A[s_i^-1] -> A_ij and
    f_{j;i}: A[s_j^-1] -> A_ij.

    Raises:
        IndexOutOfRange: i or j is not a cover index
    """
    c._check_index(i)
    c._check_index(j)
    if (i, j) in c._overlaps:
        return c._overlaps[(i, j)]
    chart_i, ell_i = c.localization(i)
    chart_j, _ = c.localization(j)
    overlap, f_ij = localize(chart_i, ell_i.apply(c.elements[j]), f"y{j + 1}")
    n = c.base.ngens
    alg = overlap.algebra
    images = [alg.gen(k) for k in range(n)] + [alg.gen(overlap.ngens - 1)]
    f_ji = AlgebraMorphism(chart_j, overlap, images)
    c._overlaps[(i, j)] = (overlap, f_ij, f_ji)
    return overlap, f_ij, f_ji


def matching_defects(c: ZariskiCover, parts: Sequence[ElementLike]) -> List[Tuple[int, int]]:
    """Index pairs (i, j), i < j, whose restrictions to the overlap disagree."""
    if len(parts) != len(c.elements):
        raise ValidationError(f"expected {len(c.elements)} parts, got {len(parts)}", name=c.name)
    parts = [c.chart_element(i, p) for i, p in enumerate(parts)]
    defects = []
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            _, f_ij, f_ji = intersection(c, i, j)
            if f_ij.apply(parts[i]) != f_ji.apply(parts[j]):
                defects.append((i, j))
    return defects


def check_matching_family(c: ZariskiCover, parts: Sequence[ElementLike]) -> bool:
    return not matching_defects(c, parts)


def _restriction_rows(c: ZariskiCover, basis: List[Element], parts: Optional[List[Element]] = None):
    """Rows of the stacked restriction map, one per (chart, chart monomial)."""
    rows: List[Dict[int, object]] = []
    rhs: List[object] = []
    for i in range(len(c.elements)):
        _, ell = c.localization(i)
        images = [ell.apply(u) for u in basis]
        target = parts[i] if parts is not None else None
        monomials = set()
        for img in images:
            monomials.update(img.monomials())
        if target is not None:
            monomials.update(target.monomials())
        for w in sorted(monomials):
            row = {k: img.coefficient(w) for k, img in enumerate(images) if not img.coefficient(w).is_zero()}
            rows.append(row)
            rhs.append(target.coefficient(w) if target is not None else 0)
    return rows, rhs


def _base_span(c: ZariskiCover, total_cap: int) -> List[Element]:
    alg = c.base.algebra
    return [alg.monomial(u) for u in standard_monomials(c.base, None, total_cap)]


def separation_kernel(c: ZariskiCover, total_cap: int) -> List[Element]:
    """Base elements up to total_cap that restrict to zero in every chart."""
    basis = _base_span(c, total_cap)
    rows, _ = _restriction_rows(c, basis)
    solution = linsolve(rows, ncols=len(basis))
    alg = c.base.algebra
    kernel = []
    for vec in solution.kernel:
        elem = alg.zero()
        for k, coeff in enumerate(vec):
            elem = elem + basis[k].scale(coeff)
        kernel.append(elem)
    return kernel


def glue(c: ZariskiCover, parts: Sequence[ElementLike], total_cap: int) -> Element:
    """
    The unique base element restricting to parts[i] in every chart, searched
    in the standard-monomial span up to total_cap.

    Raises:
        NotMatching: parts disagree on some overlap
        NoSolutionAtCap: no base element up to total_cap restricts to the parts
        AmbiguousAtCap: the restriction map has a kernel at this cap
    """
    defects = matching_defects(c, parts)
    if defects:
        i, j = defects[0]
        raise NotMatching(f"parts {i} and {j} disagree on their overlap", index=i, name=c.name)
    targets = [c.localization(i)[0].reduce(c.chart_element(i, p)) for i, p in enumerate(parts)]
    basis = _base_span(c, total_cap)
    rows, rhs = _restriction_rows(c, basis, targets)
    try:
        solution = linsolve(rows, rhs, ncols=len(basis))
    except Inconsistent:
        raise NoSolutionAtCap(f"no base element of total degree <= {total_cap} glues the parts",
                              name=c.name) from None
    if solution.nullity:
        raise AmbiguousAtCap(
            f"restriction map has a {solution.nullity}-dimensional kernel at cap {total_cap}", name=c.name
        )
    try:
        coeffs = solution.particular_laurent()
    except NonLaurentNormalForm:
        raise NoSolutionAtCap(f"glued element at cap {total_cap} has non-Laurent coefficients",
                              name=c.name) from None
    out = c.base.algebra.zero()
    for u, coeff in zip(basis, coeffs):
        out = out + u.scale(coeff)
    return out


def pullback_cover(c: ZariskiCover, g: AlgebraMorphism) -> ZariskiCover:
    """
    Cover of g.target by the images g(s_i) with witnesses g(a_i), validated.

    Raises:
        MorphismSourceMismatch: g does not start at the cover's base
    """
    if g.source != c.base:
        raise MorphismSourceMismatch("pullback morphism must start at the cover's base")
    pulled = ZariskiCover(
        g.target,
        [g.apply(s) for s in c.elements],
        [g.apply(a) for a in c.witnesses],
        name=f"{c.name}*" if c.name else None,
    )
    validate_cover(pulled)
    return pulled


def sphere_cover(sphere: AlgebraPresentation) -> ZariskiCover:
    """North/south cover of an even sphere: s = (1-z)/2, (1+z)/2 with witnesses 1, 1."""
    alg = sphere.algebra
    z = alg.gen("z")
    half = Fraction(1, 2)
    s1 = (alg.one() - z).scale(half)
    s2 = (alg.one() + z).scale(half)
    return ZariskiCover(sphere, [s1, s2], [alg.one(), alg.one()], name="north_south")


def cover_to_dict(c: ZariskiCover, base_name: Optional[str] = None) -> Dict:
    return {
        "base": base_name or c.base.name,
        "elements": [str(s) for s in c.elements],
        "witnesses": [str(a) for a in c.witnesses],
    }


def cover_from_dict(doc: Dict, algebras: Dict[str, AlgebraPresentation]) -> ZariskiCover:
    try:
        base = algebras[doc["base"]]
    except KeyError:
        raise ValidationError(f"cover refers to unknown algebra {doc.get('base')!r}") from None
    return ZariskiCover(base, list(doc["elements"]), list(doc["witnesses"]), name=doc.get("name"))
