# -*- coding: utf-8 -*-
"""
Exact coefficient arithmetic for toric noncommutative algebras.

Provides:
1. DeformationData - torus rank n and the integer antisymmetric matrix theta
2. Laurent - elements of Q[q, q^-1] stored as exponent -> Fraction maps
3. RationalFunction - reduced fractions of Laurent polynomials
4. chi - the bicharacter chi(m, m') = q^(m^T theta m')
5. linsolve - exact sparse fraction-free elimination

Univariate gcd and exact division are delegated to sympy's polynomial rings.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import QQ
from sympy.polys.rings import ring

from errors import DimensionMismatch, Inconsistent, NonLaurentNormalForm, ValidationError

_QRING, _QGEN = ring("q", QQ)

DegreeVector = Tuple[int, ...]
Scalar = Union[int, Fraction]


# ============================================================================
# Degree bookkeeping
# ============================================================================

def degree_add(m: DegreeVector, m2: DegreeVector) -> DegreeVector:
    return tuple(a + b for a, b in zip(m, m2))


def degree_sub(m: DegreeVector, m2: DegreeVector) -> DegreeVector:
    return tuple(a - b for a, b in zip(m, m2))


def degree_neg(m: DegreeVector) -> DegreeVector:
    return tuple(-a for a in m)


def degree_scale(k: int, m: DegreeVector) -> DegreeVector:
    return tuple(k * a for a in m)


def format_degree(m: DegreeVector) -> str:
    return "(" + ",".join(str(a) for a in m) + ")"


@dataclass(frozen=True)
class DeformationData:
    """Torus rank and antisymmetric integer deformation matrix."""

    rank: int
    theta: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise ValidationError(f"torus rank must be a positive integer, got {self.rank!r}")
        rows = tuple(tuple(int(x) for x in row) for row in self.theta)
        if len(rows) != self.rank or any(len(row) != self.rank for row in rows):
            raise DimensionMismatch(f"theta must be {self.rank}x{self.rank}")
        for i in range(self.rank):
            for j in range(self.rank):
                if rows[i][j] != -rows[j][i]:
                    raise ValidationError(
                        f"theta is not antisymmetric at ({i},{j}): {rows[i][j]} vs {rows[j][i]}"
                    )
        object.__setattr__(self, "theta", rows)

    @classmethod
    def from_matrix(cls, theta: Sequence[Sequence[int]]) -> "DeformationData":
        return cls(rank=len(theta), theta=tuple(tuple(row) for row in theta))

    @classmethod
    def commutative(cls, rank: int) -> "DeformationData":
        return cls(rank=rank, theta=tuple((0,) * rank for _ in range(rank)))

    @property
    def zero(self) -> DegreeVector:
        return (0,) * self.rank

    def check_degree(self, m: Sequence[int]) -> DegreeVector:
        if len(m) != self.rank:
            raise DimensionMismatch(
                f"degree vector {tuple(m)} has length {len(m)}, torus rank is {self.rank}"
            )
        return tuple(int(a) for a in m)

    def pairing(self, m: DegreeVector, m2: DegreeVector) -> int:
        """Exponent m^T theta m' of the bicharacter."""
        self.check_degree(m)
        self.check_degree(m2)
        total = 0
        for j, mj in enumerate(m):
            if mj:
                row = self.theta[j]
                total += mj * sum(row[k] * m2[k] for k in range(self.rank))
        return total

    def specialize_q1(self) -> "DeformationData":
        """Commutative limit: every phase becomes 1."""
        return DeformationData.commutative(self.rank)


# ============================================================================
# Laurent polynomials
# ============================================================================

class Laurent:
    """Immutable element of Q[q, q^-1]; the empty map is zero."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Union[Dict[int, Scalar], Iterable[Tuple[int, Scalar]]]] = None):
        clean: Dict[int, Fraction] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for k, v in items:
                k = int(k)
                clean[k] = clean.get(k, Fraction(0)) + Fraction(v)
        self._terms = {k: v for k, v in clean.items() if v != 0}
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[int, Fraction]) -> "Laurent":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Scalar) -> "Laurent":
        c = Fraction(c)
        return cls._raw({0: c} if c else {})

    @classmethod
    def q_power(cls, k: int, c: Scalar = 1) -> "Laurent":
        c = Fraction(c)
        return cls._raw({int(k): c} if c else {})

    @classmethod
    def coerce(cls, value) -> "Laurent":
        if isinstance(value, Laurent):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        if isinstance(value, RationalFunction):
            return value.to_laurent()
        raise TypeError(f"cannot convert {type(value).__name__} to a Laurent coefficient")

    # -- inspection ---------------------------------------------------------

    def items(self) -> List[Tuple[int, Fraction]]:
        """Terms sorted by ascending exponent."""
        return sorted(self._terms.items())

    def coefficient(self, k: int) -> Fraction:
        return self._terms.get(k, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_one(self) -> bool:
        return len(self._terms) == 1 and self._terms.get(0) == 1

    def is_unit(self) -> bool:
        """Units of Q[q, q^-1] are the single terms c*q^k with c != 0."""
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {0}

    @property
    def min_exp(self) -> int:
        return min(self._terms) if self._terms else 0

    @property
    def max_exp(self) -> int:
        return max(self._terms) if self._terms else 0

    @property
    def leading_coefficient(self) -> Fraction:
        return self._terms[self.max_exp] if self._terms else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other) -> "Laurent":
        if not isinstance(other, Laurent):
            if isinstance(other, (int, Fraction)):
                other = Laurent.const(other)
            else:
                return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Laurent._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Laurent":
        return Laurent._raw({k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> "Laurent":
        if isinstance(other, (int, Fraction)):
            other = Laurent.const(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Laurent":
        return (-self) + other

    def __mul__(self, other) -> "Laurent":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return LAURENT_ZERO
            return Laurent._raw({k: v * other for k, v in self._terms.items()})
        if not isinstance(other, Laurent):
            return NotImplemented
        if not self._terms or not other._terms:
            return LAURENT_ZERO
        if len(other._terms) == 1:
            (k2, v2), = other._terms.items()
            return Laurent._raw({k + k2: v * v2 for k, v in self._terms.items()})
        if len(self._terms) == 1:
            (k1, v1), = self._terms.items()
            return Laurent._raw({k1 + k: v1 * v for k, v in other._terms.items()})
        out: Dict[int, Fraction] = {}
        for k1, v1 in self._terms.items():
            for k2, v2 in other._terms.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + v1 * v2
        return Laurent._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Laurent":
        if n < 0:
            return self.inverse() ** (-n)
        result, base = LAURENT_ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "Laurent":
        if not self.is_unit():
            raise NonLaurentNormalForm(f"{self} is not a unit of Q[q,q^-1]")
        (k, v), = self._terms.items()
        return Laurent._raw({-k: 1 / v})

    def shift(self, k: int) -> "Laurent":
        """Multiply by q^k."""
        return Laurent._raw({e + k: v for e, v in self._terms.items()})

    def exquo(self, other: "Laurent") -> "Laurent":
        """Exact quotient self / other; raises NonLaurentNormalForm when it leaves Q[q, q^-1]."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if self.is_zero():
            return LAURENT_ZERO
        if other.is_unit():
            return self * other.inverse()
        sa, pa = _to_poly(self)
        sb, pb = _to_poly(other)
        quotient, remainder = divmod(pa, pb)
        if remainder:
            raise NonLaurentNormalForm(f"{other} does not divide {self}")
        return _from_poly(quotient, sa - sb)

    def divides(self, other: "Laurent") -> bool:
        try:
            other.exquo(self)
        except NonLaurentNormalForm:
            return False
        return True

    def gcd(self, other: "Laurent") -> "Laurent":
        """Monic gcd with lowest exponent 0; gcd(0, 0) is 0."""
        if self.is_zero() and other.is_zero():
            return LAURENT_ZERO
        if self.is_zero():
            return other.normalized()
        if other.is_zero():
            return self.normalized()
        if self.is_unit() or other.is_unit():
            return LAURENT_ONE
        _, pa = _to_poly(self)
        _, pb = _to_poly(other)
        return _from_poly(pa.gcd(pb), 0)

    def normalized(self) -> "Laurent":
        """Associate with lowest exponent 0 and leading coefficient 1."""
        if self.is_zero():
            return self
        return (self.shift(-self.min_exp)) * (1 / self.leading_coefficient)

    def specialize_q1(self) -> Fraction:
        """The q -> 1 ring homomorphism."""
        return sum(self._terms.values(), Fraction(0))

    def evaluate(self, q_value: Scalar) -> Fraction:
        q_value = Fraction(q_value)
        return sum((v * q_value ** k for k, v in self._terms.items()), Fraction(0))

    # -- comparison / text ----------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Laurent):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({0: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, v in sorted(self._terms.items(), reverse=True):
            parts.append(_format_scalar_term(v, k))
        text = parts[0]
        for part in parts[1:]:
            text += part if part.startswith("-") else "+" + part
        return text

    def __repr__(self) -> str:
        return f"Laurent({self})"

    def needs_parentheses(self) -> bool:
        return len(self._terms) > 1


LAURENT_ZERO = Laurent._raw({})
LAURENT_ONE = Laurent._raw({0: Fraction(1)})


def _format_scalar_term(c: Fraction, k: int) -> str:
    if k == 0:
        return str(c)
    qpart = "q" if k == 1 else f"q^{k}"
    if c == 1:
        return qpart
    if c == -1:
        return "-" + qpart
    return f"{c}*{qpart}"


def _to_poly(a: Laurent):
    """Return (shift, poly) with a = q^shift * poly and poly(0) != 0."""
    if a.is_zero():
        return 0, _QRING.zero
    lo = a.min_exp
    return lo, _QRING.from_dict(
        {(k - lo,): QQ(v.numerator, v.denominator) for k, v in a._terms.items()}
    )


def _from_poly(poly, shift: int) -> Laurent:
    terms = {}
    for (k,), c in poly.terms():
        terms[k + shift] = Fraction(int(c.numerator), int(c.denominator))
    return Laurent._raw({k: v for k, v in terms.items() if v})


def coeff_add(a: Laurent, b: Laurent) -> Laurent:
    return a + b


def coeff_mul(a: Laurent, b: Laurent) -> Laurent:
    return a * b


def coeff_neg(a: Laurent) -> Laurent:
    return -a


def chi(d: DeformationData, m: DegreeVector, m2: DegreeVector) -> Laurent:
    """Bicharacter value q^(m^T theta m')."""
    return Laurent.q_power(d.pairing(m, m2))


# ============================================================================
# Rational functions
# ============================================================================

class RationalFunction:
    """Reduced fraction num/den: gcd 1, den lowest exponent 0, den leading coefficient 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = Laurent.coerce(num)
        den = LAURENT_ONE if den is None else Laurent.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num, self.den = _canonical_fraction(num, den)

    @classmethod
    def coerce(cls, value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        return cls(value)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def to_laurent(self) -> Laurent:
        if not self.den.is_one():
            raise NonLaurentNormalForm(f"({self.num})/({self.den}) is not a Laurent polynomial")
        return self.num

    def __add__(self, other) -> "RationalFunction":
        other = RationalFunction.coerce(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        out = RationalFunction.__new__(RationalFunction)
        out.num, out.den = -self.num, self.den
        return out

    def __sub__(self, other) -> "RationalFunction":
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other) -> "RationalFunction":
        return RationalFunction.coerce(other) - self

    def __mul__(self, other) -> "RationalFunction":
        other = RationalFunction.coerce(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = RationalFunction.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Laurent)):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def _canonical_fraction(num: Laurent, den: Laurent) -> Tuple[Laurent, Laurent]:
    if num.is_zero():
        return LAURENT_ZERO, LAURENT_ONE
    if den.is_unit():
        (k, v), = den._terms.items()
        return num.shift(-k) * (1 / v), LAURENT_ONE
    sn, pn = _to_poly(num)
    sd, pd = _to_poly(den)
    g = pn.gcd(pd)
    pn = pn.exquo(g)
    pd = pd.exquo(g)
    lc = pd.LC
    pn = pn.quo_ground(lc)
    pd = pd.quo_ground(lc)
    return _from_poly(pn, sn - sd), _from_poly(pd, 0)


# ============================================================================
# Exact linear solving
# ============================================================================

@dataclass(frozen=True)
class LinearSolution:
    """Affine solution set: particular + span(kernel)."""

    particular: Tuple[RationalFunction, ...]
    kernel: Tuple[Tuple[Laurent, ...], ...]
    rank: int

    @property
    def nullity(self) -> int:
        return len(self.kernel)

    def particular_laurent(self) -> Tuple[Laurent, ...]:
        return tuple(x.to_laurent() for x in self.particular)


def _coerce_row(row, ncols: int) -> Dict[int, object]:
    if isinstance(row, dict):
        items = row.items()
    else:
        if len(row) != ncols:
            raise DimensionMismatch(f"row of length {len(row)} in a system with {ncols} columns")
        items = enumerate(row)
    out = {}
    for c, v in items:
        if not 0 <= c < ncols:
            raise DimensionMismatch(f"column index {c} outside 0..{ncols - 1}")
        if isinstance(v, RationalFunction):
            if v.is_zero():
                continue
        else:
            v = Laurent.coerce(v)
            if v.is_zero():
                continue
        out[c] = v
    return out


def _clear_denominators(row: Dict[int, object], b) -> Tuple[Dict[int, Laurent], Laurent]:
    """Scale a row with rational-function entries into Q[q, q^-1]."""
    entries = list(row.values()) + [b]
    dens = [v.den for v in entries if isinstance(v, RationalFunction) and not v.den.is_one()]
    if not dens:
        return ({c: Laurent.coerce(v) for c, v in row.items()}, Laurent.coerce(b))
    lcm = LAURENT_ONE
    for d in dens:
        lcm = (lcm * d).exquo(lcm.gcd(d))
    scaled = {c: (RationalFunction.coerce(v) * lcm).to_laurent() for c, v in row.items()}
    return scaled, (RationalFunction.coerce(b) * lcm).to_laurent()


def _row_content(row: Dict[int, Laurent], b: Laurent) -> Laurent:
    g = LAURENT_ZERO
    for v in list(row.values()) + [b]:
        if v.is_zero():
            continue
        g = v.normalized() if g.is_zero() else g.gcd(v)
        if g.is_one():
            break
    return g


def _eliminate(row: Dict[int, Laurent], b: Laurent, col: int,
               prow: Dict[int, Laurent], pb: Laurent) -> Tuple[Dict[int, Laurent], Laurent]:
    """Remove column col from row using a pivot row whose pivot sits at col."""
    factor = row[col]
    pivot = prow[col]
    if pivot.is_one():
        scale = None
        mult = factor
    elif pivot.is_unit():
        scale = None
        mult = factor * pivot.inverse()
    else:
        scale = pivot
        mult = factor
    out = dict(row) if scale is None else {c: v * scale for c, v in row.items()}
    nb = b if scale is None else b * scale
    for c, v in prow.items():
        nv = out.get(c, LAURENT_ZERO) - mult * v
        if nv.is_zero():
            out.pop(c, None)
        else:
            out[c] = nv
    out.pop(col, None)
    nb = nb - mult * pb
    if scale is not None:
        g = _row_content(out, nb)
        if not g.is_zero() and not g.is_one():
            out = {c: v.exquo(g) for c, v in out.items()}
            nb = nb.exquo(g)
    return out, nb


def linsolve(rows: Sequence, rhs: Optional[Sequence] = None,
             ncols: Optional[int] = None) -> LinearSolution:
    """
    Solve rows * x = rhs exactly over Q(q).

    Rows may be dense sequences or sparse {column: entry} dicts. Entries are
    Laurent, RationalFunction, int or Fraction. Pivots are chosen as the first
    nonzero entry in a row-major scan; the reduced pivot rows give the particular
    solution (free variables zero) and one primitive kernel vector per free column.

    Raises:
        Inconsistent: when rhs lies outside the column space.
    """
    if ncols is None:
        if not rows or isinstance(rows[0], dict):
            raise DimensionMismatch("ncols is required for empty or sparse systems")
        ncols = len(rows[0])
    if rhs is None:
        rhs = [LAURENT_ZERO] * len(rows)
    if len(rhs) != len(rows):
        raise DimensionMismatch(f"{len(rows)} rows but {len(rhs)} right-hand entries")

    pivots: Dict[int, Tuple[Dict[int, Laurent], Laurent]] = {}
    pivot_order: List[int] = []

    for index, raw in enumerate(rows):
        b_raw = rhs[index]
        if not isinstance(b_raw, RationalFunction):
            b_raw = Laurent.coerce(b_raw)
        row, b = _clear_denominators(_coerce_row(raw, ncols), b_raw)
        for col in sorted(c for c in row if c in pivots):
            if col in row:
                row, b = _eliminate(row, b, col, *pivots[col])
        if not row:
            if not b.is_zero():
                raise Inconsistent(f"equation {index} reduces to 0 = {b}", index=index)
            continue
        col = min(row)
        pivot = row[col]
        if pivot.is_unit() and not pivot.is_one():
            inv = pivot.inverse()
            row = {c: v * inv for c, v in row.items()}
            b = b * inv
        for other in pivot_order:
            orow, ob = pivots[other]
            if col in orow:
                pivots[other] = _eliminate(orow, ob, col, row, b)
        pivots[col] = (row, b)
        pivot_order.append(col)

    free = [c for c in range(ncols) if c not in pivots]
    particular: List[RationalFunction] = [RationalFunction(0)] * ncols
    for col, (row, b) in pivots.items():
        particular[col] = RationalFunction(b, row[col])

    kernel = []
    for f in free:
        vec: List[RationalFunction] = [RationalFunction(0)] * ncols
        vec[f] = RationalFunction(1)
        for col, (row, _) in pivots.items():
            if f in row:
                vec[col] = RationalFunction(-row[f], row[col])
        kernel.append(_primitive_vector(vec))

    return LinearSolution(particular=tuple(particular), kernel=tuple(kernel), rank=len(pivots))


def _primitive_vector(vec: Sequence[RationalFunction]) -> Tuple[Laurent, ...]:
    """Clear denominators, remove content, normalize the first nonzero entry."""
    lcm = LAURENT_ONE
    for v in vec:
        if not v.den.is_one():
            lcm = (lcm * v.den).exquo(lcm.gcd(v.den))
    out = [(v * lcm).to_laurent() for v in vec]
    content = LAURENT_ZERO
    for v in out:
        if not v.is_zero():
            content = v.normalized() if content.is_zero() else content.gcd(v)
    if not content.is_zero() and not content.is_one():
        out = [v.exquo(content) for v in out]
    first = next((v for v in out if not v.is_zero()), None)
    if first is not None:
        unit = Laurent.q_power(first.min_exp, first.leading_coefficient)
        inv = unit.inverse()
        out = [v * inv for v in out]
    return tuple(out)
