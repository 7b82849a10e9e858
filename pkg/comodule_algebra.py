# -*- coding: utf-8 -*-
"""
Elements of braided-commutative algebras over a torus bicharacter.

A FreeAlgebra fixes the deformation and an ordered list of graded generators.
Elements are finite sums of canonical monomials (exponent vectors in generator
order) with Laurent coefficients. Moving a generator x_i rightward past x_j
costs the phase chi(m_j, m_i):

    x_i x_j = chi(m_j, m_i) x_j x_i

so products of canonical monomials only pick up a power of q.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from errors import AlgebraMismatch, InvalidGenerator, ValidationError
from phase_ring import (
    LAURENT_ONE, LAURENT_ZERO, DeformationData, DegreeVector, Laurent,
    format_degree,
)

Monomial = Tuple[int, ...]

NAME_PATTERN = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
RESERVED_NAMES = {"q"}


@dataclass(frozen=True)
class GeneratorSpec:
    """A named generator x with coaction t_m (x) x."""

    name: str
    degree: DegreeVector
    invertible: bool = False
    inverse_of: Optional[str] = None

    def __post_init__(self):
        if not NAME_PATTERN.match(self.name) or self.name in RESERVED_NAMES:
            raise InvalidGenerator(f"invalid generator name {self.name!r}", name=self.name)
        object.__setattr__(self, "degree", tuple(int(a) for a in self.degree))


def monomial_key(e: Monomial) -> Tuple:
    """Degree-reverse-lexicographic sort key; larger key means larger monomial."""
    return (sum(e), tuple(-x for x in reversed(e)))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomial_sub(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


class FreeAlgebra:
    """Free braided-commutative algebra F_{m_1..m_N} on ordered generators."""

    def __init__(self, deformation: DeformationData, generators: Sequence[GeneratorSpec]):
        self.deformation = deformation
        self.generators: Tuple[GeneratorSpec, ...] = tuple(generators)
        self._index: Dict[str, int] = {}
        for i, g in enumerate(self.generators):
            deformation.check_degree(g.degree)
            if g.name in self._index:
                raise InvalidGenerator(f"duplicate generator name {g.name!r}", index=i, name=g.name)
            self._index[g.name] = i
        self._companion: Dict[str, int] = {
            g.inverse_of: i for i, g in enumerate(self.generators) if g.inverse_of
        }
        n = len(self.generators)
        # _phase[j][i] = m_j^T theta m_i
        self._phase = [
            [deformation.pairing(self.generators[j].degree, self.generators[i].degree) for i in range(n)]
            for j in range(n)
        ]
        self._trivial_phases = all(v == 0 for row in self._phase for v in row)
        self._key = (deformation, self.generators)
        self._hash = hash(self._key)

    # -- identity -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FreeAlgebra):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        gens = ", ".join(f"{g.name}:{format_degree(g.degree)}" for g in self.generators)
        return f"FreeAlgebra({gens})"

    # -- generators -------------------------------------------------------------

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def names(self) -> List[str]:
        return [g.name for g in self.generators]

    def index(self, name_or_index: Union[str, int]) -> int:
        if isinstance(name_or_index, int):
            if not 0 <= name_or_index < self.ngens:
                raise InvalidGenerator(f"generator index {name_or_index} out of range", index=name_or_index)
            return name_or_index
        try:
            return self._index[name_or_index]
        except KeyError:
            raise InvalidGenerator(f"unknown generator {name_or_index!r}", name=name_or_index) from None

    def has_generator(self, name: str) -> bool:
        return name in self._index

    def companion_index(self, name: str) -> Optional[int]:
        """Index of the inverse companion of an invertible generator."""
        return self._companion.get(name)

    def degree(self, i: int) -> DegreeVector:
        return self.generators[i].degree

    def phase(self, j: int, i: int) -> int:
        return self._phase[j][i]

    # -- monomials ----------------------------------------------------------------

    def monomial_degree(self, e: Monomial) -> DegreeVector:
        deg = [0] * self.deformation.rank
        for i, k in enumerate(e):
            if k:
                for c, v in enumerate(self.generators[i].degree):
                    deg[c] += k * v
        return tuple(deg)

    def product_phase(self, e: Monomial, f: Monomial) -> int:
        """Exponent p with x^e x^f = q^p x^(e+f)."""
        if self._trivial_phases:
            return 0
        total = 0
        n = len(e)
        # walk j downward accumulating sum_{i>j} e_i P[j][i]
        for j in range(n - 1, -1, -1):
            if f[j]:
                row = self._phase[j]
                s = 0
                for i in range(j + 1, n):
                    if e[i]:
                        s += e[i] * row[i]
                total += f[j] * s
        return total

    def monomial_mul(self, e: Monomial, f: Monomial) -> Tuple[int, Monomial]:
        return self.product_phase(e, f), tuple(a + b for a, b in zip(e, f))

    # -- element constructors -------------------------------------------------------

    @property
    def unit_monomial(self) -> Monomial:
        return (0,) * self.ngens

    def zero(self) -> "Element":
        return Element._raw(self, {})

    def one(self) -> "Element":
        return Element._raw(self, {self.unit_monomial: LAURENT_ONE})

    def scalar(self, c) -> "Element":
        c = Laurent.coerce(c)
        return Element._raw(self, {self.unit_monomial: c} if c else {})

    def gen(self, name_or_index: Union[str, int]) -> "Element":
        i = self.index(name_or_index)
        e = [0] * self.ngens
        e[i] = 1
        return Element._raw(self, {tuple(e): LAURENT_ONE})

    def monomial(self, e: Sequence[int], c=1) -> "Element":
        e = tuple(int(x) for x in e)
        if len(e) != self.ngens:
            raise InvalidGenerator(f"monomial {e} has {len(e)} entries, algebra has {self.ngens} generators")
        if any(x < 0 for x in e):
            raise InvalidGenerator(f"negative exponent in {e}; use the inverse companion generator")
        c = Laurent.coerce(c)
        return Element._raw(self, {e: c} if c else {})

    def element(self, terms: Dict[Monomial, Laurent]) -> "Element":
        return Element(self, terms)


class Element:
    """Canonical finite sum of monomials with Laurent coefficients."""

    __slots__ = ("algebra", "_terms", "_hash")

    def __init__(self, algebra: FreeAlgebra, terms: Optional[Dict[Monomial, object]] = None):
        self.algebra = algebra
        clean: Dict[Monomial, Laurent] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(x) for x in mono)
            if len(mono) != algebra.ngens:
                raise InvalidGenerator(f"monomial {mono} does not match {algebra.ngens} generators")
            c = Laurent.coerce(c)
            if mono in clean:
                c = clean[mono] + c
            if c.is_zero():
                clean.pop(mono, None)
            else:
                clean[mono] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, algebra: FreeAlgebra, terms: Dict[Monomial, Laurent]) -> "Element":
        obj = cls.__new__(cls)
        obj.algebra = algebra
        obj._terms = terms
        obj._hash = None
        return obj

    # -- inspection -----------------------------------------------------------------

    def items(self) -> List[Tuple[Monomial, Laurent]]:
        """Terms sorted by descending monomial order."""
        return sorted(self._terms.items(), key=lambda t: monomial_key(t[0]), reverse=True)

    def monomials(self) -> List[Monomial]:
        return [m for m, _ in self.items()]

    def coefficient(self, mono: Monomial) -> Laurent:
        return self._terms.get(tuple(mono), LAURENT_ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def leading_term(self) -> Tuple[Monomial, Laurent]:
        if not self._terms:
            raise ValueError("zero element has no leading term")
        mono = max(self._terms, key=monomial_key)
        return mono, self._terms[mono]

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=0)

    def is_scalar(self) -> bool:
        return all(sum(m) == 0 for m in self._terms)

    # -- arithmetic -------------------------------------------------------------------

    def _check(self, other: "Element"):
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise AlgebraMismatch("elements belong to different algebras")

    def _coerce(self, other) -> Optional["Element"]:
        if isinstance(other, Element):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Laurent)):
            return self.algebra.scalar(other)
        return None

    def __add__(self, other) -> "Element":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, LAURENT_ZERO) + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return Element._raw(self.algebra, out)

    __radd__ = __add__

    def __neg__(self) -> "Element":
        return Element._raw(self.algebra, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Element":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Element":
        return (-self) + other

    def scale(self, c) -> "Element":
        c = Laurent.coerce(c)
        if c.is_zero():
            return self.algebra.zero()
        if c.is_one():
            return self
        return Element._raw(self.algebra, {m: v * c for m, v in self._terms.items()})

    def __mul__(self, other) -> "Element":
        if isinstance(other, (int, Fraction, Laurent)):
            return self.scale(other)
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        return multiply(self, other)

    def __rmul__(self, other) -> "Element":
        if isinstance(other, (int, Fraction, Laurent)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "Element":
        if n < 0:
            raise ValidationError("negative powers of elements are not defined; use an inverse generator")
        result, base = self.algebra.one(), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def left_monomial_mul(self, u: Monomial) -> "Element":
        """x^u * self."""
        alg = self.algebra
        out: Dict[Monomial, Laurent] = {}
        for m, c in self._terms.items():
            p, prod = alg.monomial_mul(u, m)
            out[prod] = c.shift(p) if p else c
        return Element._raw(alg, out)

    def right_monomial_mul(self, u: Monomial) -> "Element":
        """self * x^u."""
        alg = self.algebra
        out: Dict[Monomial, Laurent] = {}
        for m, c in self._terms.items():
            p, prod = alg.monomial_mul(m, u)
            out[prod] = c.shift(p) if p else c
        return Element._raw(alg, out)

    # -- comparison / text ---------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Laurent)):
            other = self.algebra.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        return (other.algebra is self.algebra or other.algebra == self.algebra) and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.algebra, frozenset(self._terms.items())))
        return self._hash

    def __str__(self) -> str:
        return render_element(self)

    def __repr__(self) -> str:
        return f"Element({self})"


# ============================================================================
# Operations
# ============================================================================

def normalize_word(algebra: FreeAlgebra, word: Sequence[Union[int, str]], c=1) -> Element:
    """
    Sort a generator word into canonical order by adjacent transpositions.

    Each swap of a left generator i past a right generator j < i multiplies the
    coefficient by chi(m_j, m_i).
    """
    letters = [algebra.index(w) for w in word]
    exponent = 0
    # insertion sort, one adjacent swap at a time
    for k in range(1, len(letters)):
        pos = k
        while pos > 0 and letters[pos - 1] > letters[pos]:
            left, right = letters[pos - 1], letters[pos]
            exponent += algebra.phase(right, left)
            letters[pos - 1], letters[pos] = right, left
            pos -= 1
    e = [0] * algebra.ngens
    for i in letters:
        e[i] += 1
    coeff = Laurent.coerce(c).shift(exponent)
    return Element._raw(algebra, {tuple(e): coeff} if coeff else {})


def multiply(a: Element, b: Element) -> Element:
    """Bilinear extension of concatenate-then-normalize."""
    if b.algebra is not a.algebra and b.algebra != a.algebra:
        raise AlgebraMismatch("cannot multiply elements of different algebras")
    alg = a.algebra
    if not a._terms or not b._terms:
        return alg.zero()
    out: Dict[Monomial, Laurent] = {}
    for m1, c1 in a._terms.items():
        for m2, c2 in b._terms.items():
            p, prod = alg.monomial_mul(m1, m2)
            c = c1 * c2
            if p:
                c = c.shift(p)
            prev = out.get(prod)
            if prev is not None:
                c = prev + c
                if c.is_zero():
                    del out[prod]
                    continue
            out[prod] = c
    return Element._raw(alg, out)


class _Inhomogeneous:
    """Marker returned by h_degree for elements mixing several H-degrees."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INHOMOGENEOUS"

    def __bool__(self) -> bool:
        return False


INHOMOGENEOUS = _Inhomogeneous()


def h_degree(a: Element):
    """H-degree of a homogeneous element, INHOMOGENEOUS otherwise; zero has degree 0."""
    alg = a.algebra
    if a.is_zero():
        return alg.deformation.zero
    degrees = {alg.monomial_degree(m) for m in a._terms}
    if len(degrees) == 1:
        return degrees.pop()
    return INHOMOGENEOUS


def is_homogeneous(a: Element) -> bool:
    return h_degree(a) is not INHOMOGENEOUS


def graded_decompose(a: Element) -> Dict[DegreeVector, Element]:
    """Split into homogeneous components keyed by H-degree (sorted keys)."""
    alg = a.algebra
    parts: Dict[DegreeVector, Dict[Monomial, Laurent]] = {}
    for m, c in a._terms.items():
        parts.setdefault(alg.monomial_degree(m), {})[m] = c
    return {deg: Element._raw(alg, parts[deg]) for deg in sorted(parts)}


def coinvariant_part(a: Element) -> Element:
    """Degree-zero component."""
    return graded_decompose(a).get(a.algebra.deformation.zero, a.algebra.zero())


def remap(a: Element, target: FreeAlgebra, index_map: Sequence[int]) -> Element:
    """
    Transport a along generator index_map[i] of target for source generator i.

    Strictly increasing maps preserve canonical order and need no phases;
    other maps re-normalize each monomial as a word.
    """
    increasing = all(x < y for x, y in zip(index_map, index_map[1:]))
    if increasing:
        terms: Dict[Monomial, Laurent] = {}
        for m, c in a._terms.items():
            e = [0] * target.ngens
            for i, k in enumerate(m):
                if k:
                    e[index_map[i]] += k
            terms[tuple(e)] = c
        return Element._raw(target, terms)
    out = target.zero()
    for m, c in a._terms.items():
        word = [index_map[i] for i, k in enumerate(m) for _ in range(k)]
        out = out + normalize_word(target, word, c)
    return out


def specialize_q1(a: Element, target: FreeAlgebra) -> Element:
    """Apply q -> 1 to every coefficient, landing in a (commutative) algebra with the same generators."""
    return Element(target, {m: Laurent.const(c.specialize_q1()) for m, c in a._terms.items()})


# ============================================================================
# Text form
# ============================================================================

def render_monomial(algebra: FreeAlgebra, e: Monomial) -> str:
    factors = []
    for i, k in enumerate(e):
        if not k:
            continue
        g = algebra.generators[i]
        if g.inverse_of:
            factors.append(f"{g.inverse_of}^-{k}")
        elif k == 1:
            factors.append(g.name)
        else:
            factors.append(f"{g.name}^{k}")
    return "*".join(factors)


def _render_term(algebra: FreeAlgebra, e: Monomial, c: Laurent) -> str:
    mono = render_monomial(algebra, e)
    if c.needs_parentheses():
        coeff = f"({c})"
        return f"{coeff}*{mono}" if mono else coeff
    if not mono:
        return str(c)
    if c.is_one():
        return mono
    if c == -1:
        return "-" + mono
    return f"{c}*{mono}"


def render_element(a: Element) -> str:
    if a.is_zero():
        return "0"
    parts = [_render_term(a.algebra, m, c) for m, c in a.items()]
    text = parts[0]
    for part in parts[1:]:
        text += part if part.startswith("-") else "+" + part
    return text


def parse_element(algebra: FreeAlgebra, text: str) -> Element:
    """Parse the text form, e.g. '3/2*q^-1*x1^2*x2 + (1-q)*x^-1'."""
    from textform import parse_element_text
    return parse_element_text(algebra, text)
