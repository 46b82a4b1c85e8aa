"""
Exact coefficient arithmetic.

Symbolic values live in a sympy rational function field over F_p or Q whose
generators are the named l.s.o.p. variables (``PolyContext``). Specialized
values live in a galois finite field (``FiniteScalarField``) or in sympy's QQ
(``RationalScalarField``). The three share one small interface so that the
Ψ engine and the linear algebra run unchanged on either.
"""
import math
import re
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import galois
import numpy as np
from sympy import GF, QQ, Symbol
from sympy.polys.fields import FracElement, FracField
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement

from models.errors import (
    DenominatorVanishes,
    DivisionByZeroPoly,
    WrongCharacteristic,
)

VAR_KINDS = ("a", "b", "c", "w")
NEG_INFINITY = float("-inf")
_VAR_PATTERN = re.compile(r"^([abcw])\[(\d+)\](?:\[(\d+)\])?$")


@dataclass(frozen=True)
class VarId:
    """Named variable: a[i][j] (matrix entry), b[i], c[i] (replacement), w[i] (Lefschetz form)."""

    kind: str
    i: int
    j: int = 0

    def sort_key(self) -> Tuple[int, int, int]:
        return VAR_KINDS.index(self.kind), self.i, self.j

    def __lt__(self, other: "VarId") -> bool:
        return self.sort_key() < other.sort_key()

    @property
    def name(self) -> str:
        if self.kind == "a":
            return f"a[{self.i}][{self.j}]"
        return f"{self.kind}[{self.i}]"

    def __str__(self) -> str:
        return self.name

    @classmethod
    def parse(cls, name: str) -> "VarId":
        match = _VAR_PATTERN.match(name.strip())
        if not match:
            raise ValueError(f"Not a variable name: {name!r}")
        kind, i, j = match.groups()
        if (kind == "a") != (j is not None):
            raise ValueError(f"Wrong index count for {name!r}")
        return cls(kind, int(i), int(j or 0))


def A(i: int, j: int) -> VarId:
    return VarId("a", i, j)


def B(i: int) -> VarId:
    return VarId("b", i)


def C(i: int) -> VarId:
    return VarId("c", i)


def W(i: int) -> VarId:
    return VarId("w", i)


RatFunc = FracElement
MultiPoly = PolyElement


# ----------------------------------------------------------------------
# Specialized fields
# ----------------------------------------------------------------------
class FiniteScalarField:
    """F_q via galois; matrices become galois FieldArrays for rank/det/kernel."""

    is_symbolic = False

    def __init__(self, characteristic: int, degree: int = 1):
        self.characteristic = int(characteristic)
        self.degree = int(degree)
        self.order = self.characteristic ** self.degree
        self.GF = galois.GF(self.order)
        self.name = f"GF({self.characteristic}^{self.degree})" if self.degree > 1 else f"GF({self.characteristic})"

    @property
    def zero(self):
        return self.GF(0)

    @property
    def one(self):
        return self.GF(1)

    def element(self, n: int):
        return self.GF(int(n) % self.characteristic)

    def coefficient(self, c, domain):
        if domain.is_QQ:
            num, den = int(domain.numer(c)), int(domain.denom(c))
            if den % self.characteristic == 0:
                raise DenominatorVanishes(f"Coefficient {c} has no image in {self.name}")
            return self.element(num) / self.element(den)
        if domain.characteristic() != self.characteristic:
            raise WrongCharacteristic(f"Cannot map {domain} into {self.name}")
        return self.element(domain.to_int(c))

    def random_element(self, rng: np.random.Generator):
        return self.GF(int(rng.integers(0, self.order)))

    def random_nonzero(self, rng: np.random.Generator):
        return self.GF(int(rng.integers(1, self.order)))

    def is_zero(self, x) -> bool:
        return int(x) == 0

    def key(self, x) -> int:
        return int(x)

    def to_int(self, x) -> int:
        return int(x)

    def matrix(self, rows: Sequence[Sequence[Any]]):
        return self.GF(np.array([[int(x) for x in row] for row in rows], dtype=np.int64))

    def det(self, rows):
        if not rows:
            return self.one
        return np.linalg.det(self.matrix(rows))

    def rank(self, rows) -> int:
        if not rows or not rows[0]:
            return 0
        return int(np.linalg.matrix_rank(self.matrix(rows)))

    def kernel(self, rows) -> List[List[Any]]:
        """Basis of {x : M x = 0}."""
        basis = self.matrix(rows).null_space()
        return [[self.GF(int(x)) for x in vec] for vec in basis]

    def pivots(self, rows) -> List[int]:
        if not rows:
            return []
        reduced = self.matrix(rows).row_reduce()
        pivots = []
        for r in range(reduced.shape[0]):
            nonzero = np.nonzero(np.asarray(reduced[r]))[0]
            if len(nonzero):
                pivots.append(int(nonzero[0]))
        return pivots

    def __repr__(self) -> str:
        return self.name


class RationalScalarField:
    """Q with sympy's exact DomainMatrix linear algebra."""

    is_symbolic = False
    characteristic = 0
    name = "QQ"

    zero = QQ(0)
    one = QQ(1)

    def element(self, n: int):
        return QQ(int(n))

    def coefficient(self, c, domain):
        if not domain.is_QQ:
            raise WrongCharacteristic(f"Cannot map {domain} into QQ")
        return c

    def random_element(self, rng: np.random.Generator, bound: int = 1 << 20):
        return QQ(int(rng.integers(-bound, bound)))

    def random_nonzero(self, rng: np.random.Generator, bound: int = 1 << 20):
        value = int(rng.integers(1, bound))
        return QQ(value if rng.random() < 0.5 else -value)

    def is_zero(self, x) -> bool:
        return x == 0

    def key(self, x):
        return x

    def to_int(self, x):
        return str(x)

    def _dm(self, rows):
        return DomainMatrix([[QQ(x) for x in row] for row in rows], (len(rows), len(rows[0])), QQ)

    def det(self, rows):
        return self._dm(rows).det() if rows else self.one

    def rank(self, rows) -> int:
        return self._dm(rows).rank() if rows and rows[0] else 0

    def kernel(self, rows):
        return self._dm(rows).nullspace().to_list()

    def pivots(self, rows) -> List[int]:
        return list(self._dm(rows).rref()[1]) if rows else []

    def __repr__(self) -> str:
        return self.name


def witness_field(characteristic: int, field_bits: int = 20, witness_prime: int = 2147483647):
    """Finite field of the right characteristic with at least 2**field_bits elements."""
    if characteristic == 0:
        return FiniteScalarField(witness_prime)
    if characteristic == 2:
        return FiniteScalarField(2, field_bits)
    degree = max(1, math.ceil(field_bits / math.log2(characteristic)))
    return FiniteScalarField(characteristic, degree)


# ----------------------------------------------------------------------
# Symbolic field
# ----------------------------------------------------------------------
class PolyContext:
    """Rational function field F(vars) over F_p or Q, graded-lex term order."""

    is_symbolic = True

    def __init__(self, variables: Iterable[VarId], characteristic: int):
        self.variables: Tuple[VarId, ...] = tuple(sorted(set(variables), key=VarId.sort_key))
        if not self.variables:
            raise ValueError("A polynomial context needs at least one variable")
        self.characteristic = int(characteristic)
        self.domain = QQ if self.characteristic == 0 else GF(self.characteristic)
        self.field = FracField([Symbol(v.name) for v in self.variables], self.domain, grlex)
        self.ring = self.field.ring
        self._index = {v: k for k, v in enumerate(self.variables)}
        self.name = f"{'QQ' if self.characteristic == 0 else f'GF({self.characteristic})'}({len(self.variables)} vars)"

    # --- elements -----------------------------------------------------
    @property
    def zero(self) -> RatFunc:
        return self.field.zero

    @property
    def one(self) -> RatFunc:
        return self.field.one

    def element(self, n: int) -> RatFunc:
        return self.field.new(self.ring.ground_new(self.domain(int(n))))

    def index(self, v: VarId) -> int:
        try:
            return self._index[v]
        except KeyError as e:
            raise KeyError(f"{v} is not a variable of this context") from e

    def var(self, v: VarId) -> RatFunc:
        return self.field.gens[self.index(v)]

    def poly_var(self, v: VarId) -> MultiPoly:
        return self.ring.gens[self.index(v)]

    def __contains__(self, v: VarId) -> bool:
        return v in self._index

    def lift(self, value: Union[int, VarId, RatFunc, MultiPoly]) -> RatFunc:
        if isinstance(value, VarId):
            return self.var(value)
        if isinstance(value, FracElement):
            return value
        if isinstance(value, PolyElement):
            return self.field.new(value)
        return self.element(value)

    def ratfunc(self, num: MultiPoly, den: MultiPoly) -> RatFunc:
        if not den:
            raise DivisionByZeroPoly("Zero denominator")
        return normalize(self.field.new(num, den))

    def is_zero(self, x) -> bool:
        return not x

    def key(self, x):
        return x

    def coefficient(self, c, domain):
        return self.field.new(self.ring.ground_new(c))

    # --- linear algebra ----------------------------------------------
    def _cleared(self, rows: Sequence[Sequence[RatFunc]]) -> Tuple[List[List[MultiPoly]], MultiPoly]:
        """Rows scaled by the lcm of their denominators; returns the product of the scales."""
        cleared, scale = [], self.ring.one
        for row in rows:
            lcm = self.ring.one
            for x in row:
                lcm = lcm.lcm(x.denom)
            cleared.append([x.numer * lcm.exquo(x.denom) for x in row])
            scale *= lcm
        return cleared, scale

    def _ring_matrix(self, rows: List[List[MultiPoly]]) -> DomainMatrix:
        dom = self.ring.to_domain()
        return DomainMatrix([[dom.convert(x) for x in row] for row in rows], (len(rows), len(rows[0])), dom)

    def det(self, rows) -> RatFunc:
        """Fraction-free (Bareiss) determinant over the polynomial ring."""
        if not rows:
            return self.one
        cleared, scale = self._cleared(rows)
        return self.field.new(self._ring_matrix(cleared).det(), scale)

    def rank(self, rows) -> int:
        if not rows or not rows[0]:
            return 0
        cleared, _ = self._cleared(rows)
        return len(self._ring_matrix(cleared).rref_den()[2])

    def kernel(self, rows) -> List[List[RatFunc]]:
        cleared, _ = self._cleared(rows)
        basis = self._ring_matrix(cleared).to_field().nullspace()
        return [[self.lift(self.field.field_new(x)) if not isinstance(x, FracElement) else x for x in vec]
                for vec in basis.to_list()]

    def pivots(self, rows) -> List[int]:
        cleared, _ = self._cleared(rows)
        return list(self._ring_matrix(cleared).rref_den()[2])

    # --- specialization ------------------------------------------------
    def random_point(self, rng: np.random.Generator, target) -> Dict[VarId, Any]:
        return {v: target.random_element(rng) for v in self.variables}

    def witness(self, field_bits: int = 20, witness_prime: int = 2147483647) -> FiniteScalarField:
        return witness_field(self.characteristic, field_bits, witness_prime)

    def __repr__(self) -> str:
        return f"PolyContext({self.name})"


def normalize(f: RatFunc) -> RatFunc:
    """Scale numerator and denominator so the denominator's leading coefficient is 1."""
    lc = f.denom.LC
    if lc == f.field.domain.one:
        return f
    return f.field.dtype(f.numer.quo_ground(lc), f.denom.quo_ground(lc))


# ----------------------------------------------------------------------
# Arithmetic helpers
# ----------------------------------------------------------------------
def _parent(f):
    return f.field if isinstance(f, FracElement) else f.ring


def _check_same(f, g) -> None:
    if _parent(f) != _parent(g):
        raise WrongCharacteristic("Operands live in different coefficient fields")


def add(f, g):
    _check_same(f, g)
    return f + g


def mul(f, g):
    _check_same(f, g)
    return f * g


def neg(f):
    return -f


def power(f, k: int):
    if k < 0 and isinstance(f, FracElement) and not f:
        raise DivisionByZeroPoly("Negative power of zero")
    return f ** k


def divide(f, g):
    _check_same(f, g)
    if not g:
        raise DivisionByZeroPoly("Division by the zero polynomial")
    if isinstance(f, PolyElement):
        return normalize(f.ring.to_field().new(f, g))
    return normalize(f / g)


def partial_derivative(f, v: VarId, ctx: PolyContext):
    """Formal partial derivative; quotient rule for rational functions."""
    if isinstance(f, FracElement):
        return f.diff(ctx.var(v))
    return f.diff(ctx.poly_var(v))


# ----------------------------------------------------------------------
# Characteristic-2 parity decomposition
# ----------------------------------------------------------------------
@dataclass
class ParityDecomposition:
    """f = Σ_e m_e · P_e² with m_e the squarefree monomial of parity class e."""

    ring: Any
    classes: Dict[Tuple[int, ...], MultiPoly]

    def class_monomial(self, e: Tuple[int, ...]) -> MultiPoly:
        return self.ring.from_dict({e: self.ring.domain.one})

    def reassemble(self) -> MultiPoly:
        total = self.ring.zero
        for e, P in self.classes.items():
            total += self.class_monomial(e) * P ** 2
        return total


def frobenius_decompose(f: Union[MultiPoly, RatFunc]) -> ParityDecomposition:
    if isinstance(f, FracElement):
        if f.denom != f.field.ring.one:
            raise ValueError("Parity decomposition needs a polynomial")
        f = f.numer
    domain = f.ring.domain
    if domain.characteristic() != 2:
        raise WrongCharacteristic("Parity decomposition needs characteristic 2")
    classes: Dict[Tuple[int, ...], Dict[Tuple[int, ...], Any]] = {}
    for monom, coeff in f.terms():
        parity = tuple(k % 2 for k in monom)
        half = tuple(k // 2 for k in monom)
        classes.setdefault(parity, {})[half] = coeff  # sqrt is the identity on F_2
    return ParityDecomposition(f.ring, {e: f.ring.from_dict(terms) for e, terms in classes.items()})


# ----------------------------------------------------------------------
# Degree and leading coefficient in one variable
# ----------------------------------------------------------------------
def _leading_in(poly: MultiPoly, idx: int) -> Tuple[int, MultiPoly]:
    top = max(monom[idx] for monom in poly.monoms())
    lead = {}
    for monom, coeff in poly.terms():
        if monom[idx] == top:
            lead[monom[:idx] + (0,) + monom[idx + 1:]] = coeff
    return top, poly.ring.from_dict(lead)


def degree_lc(phi: RatFunc, v: VarId, ctx: PolyContext) -> Tuple[Union[int, float], RatFunc]:
    """deg_v φ = deg num - deg den and L(φ) = L(num)/L(den); (-inf, 0) for φ = 0."""
    if not phi:
        return NEG_INFINITY, ctx.zero
    idx = ctx.index(v)
    dn, ln = _leading_in(phi.numer, idx)
    dd, ld = _leading_in(phi.denom, idx)
    return dn - dd, ctx.ratfunc(ln, ld)


def total_degree(f: Union[MultiPoly, RatFunc]) -> int:
    if isinstance(f, FracElement):
        return max(total_degree(f.numer), total_degree(f.denom))
    return max((sum(m) for m in f.monoms()), default=0)


# ----------------------------------------------------------------------
# Specialization
# ----------------------------------------------------------------------
def _evaluate(poly: MultiPoly, ctx: PolyContext, point: Mapping[VarId, Any], target) -> Any:
    powers: Dict[Tuple[int, int], Any] = {}
    total = target.zero
    for monom, coeff in poly.terms():
        term = target.coefficient(coeff, ctx.domain)
        for idx, e in enumerate(monom):
            if not e:
                continue
            if (idx, e) not in powers:
                var = ctx.variables[idx]
                if var not in point:
                    raise ValueError(f"Assignment misses {var}")
                powers[idx, e] = point[var] ** e
            term = term * powers[idx, e]
        total = total + term
    return total


def specialize(f: Union[MultiPoly, RatFunc], point: Mapping[VarId, Any], ctx: PolyContext, target) -> Any:
    """Evaluate at a point of the target field; DenominatorVanishes if the denominator dies."""
    if isinstance(f, FracElement):
        den = _evaluate(f.denom, ctx, point, target)
        if target.is_zero(den):
            raise DenominatorVanishes("Denominator vanishes at this point")
        return _evaluate(f.numer, ctx, point, target) / den
    return _evaluate(f, ctx, point, target)


def point_to_dict(point: Mapping[VarId, Any], target) -> Dict[str, Any]:
    return {v.name: target.to_int(x) for v, x in sorted(point.items(), key=lambda kv: kv[0].sort_key())}


def point_from_dict(data: Mapping[str, Any], target) -> Dict[VarId, Any]:
    if isinstance(target, FiniteScalarField):
        return {VarId.parse(k): target.GF(int(v)) for k, v in data.items()}
    return {VarId.parse(k): QQ(v) for k, v in data.items()}
