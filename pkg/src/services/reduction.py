"""
Artinian reductions through the canonical function Ψ.

Ψ is evaluated by Lee's determinant formula: for a degree-d monomial x^r with
support σ,

    Ψ(x^r) = Σ_{F ⊇ σ facet} s(F) · ∏_{i∈σ} A_F(i)^{r_i-1} / (A_F · ∏_{i∈F∖σ} A_F(i))

with minors taken in sorted vertex order and s(F) the orientation sign, so
that Ψ(x_F) = s(F)/det M(F). Zero tests, bases and pairings all go through Ψ.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from configuration.configuration import logger
from models.errors import (
    BadParameters,
    DegreeOutOfRange,
    DenominatorVanishes,
    DimensionMismatch,
    MinorVanishes,
    NotHomologyBall,
    NotHomologySphere,
    SupportNotAFace,
    SupportNotInterior,
    WitnessSearchFailed,
    WrongDegree,
)
from services import polytext
from services.algebra import point_from_dict, point_to_dict, specialize as specialize_value
from services.complex import (
    Face,
    OrientedComplex,
    SimplicialComplex,
    boundary_complex,
    fh_vectors,
    is_homology_ball,
    is_homology_sphere,
    make_face,
    orient,
)
from services.linalg import miss_bound_log2
from services.lsop import LsopMatrix, replacement_vector
from services.memory import PsiMemory
from utils.utils import make_rng

Monomial = Tuple[Tuple[int, int], ...]

DEFAULT_FIELD_BITS = 20
DEFAULT_WITNESS_PRIME = 2147483647


# ----------------------------------------------------------------------
# Monomials
# ----------------------------------------------------------------------
def make_monomial(exps: Mapping[int, int]) -> Monomial:
    for v, e in exps.items():
        if int(e) < 0:
            raise ValueError(f"Negative exponent at vertex {v}")
    return tuple(sorted((int(v), int(e)) for v, e in exps.items() if int(e) > 0))


def face_monomial(face: Sequence[int], power: int = 1) -> Monomial:
    return tuple((v, power) for v in make_face(face)) if power else ()


def monomial_support(mono: Monomial) -> Face:
    return tuple(v for v, _ in mono)


def monomial_degree(mono: Monomial) -> int:
    return sum(e for _, e in mono)


def monomial_product(*monos: Monomial) -> Monomial:
    exps: Dict[int, int] = {}
    for mono in monos:
        for v, e in mono:
            exps[v] = exps.get(v, 0) + e
    return make_monomial(exps)


# ----------------------------------------------------------------------
# Ring elements
# ----------------------------------------------------------------------
class RingElement:
    """Homogeneous element of k[Δ]; terms whose support is not a face are dropped."""

    def __init__(self, complex_: SimplicialComplex, scalars, degree: int, terms: Optional[Mapping[Monomial, Any]] = None):
        self.complex = complex_
        self.scalars = scalars
        self.degree = int(degree)
        self.terms: Dict[Monomial, Any] = {}
        for mono, coeff in (terms or {}).items():
            if monomial_degree(mono) != self.degree:
                raise WrongDegree(f"Monomial {mono} is not of degree {self.degree}")
            if monomial_support(mono) not in complex_.face_set or scalars.is_zero(coeff):
                continue
            self.terms[mono] = coeff

    @classmethod
    def monomial(cls, complex_, scalars, mono: Monomial, coeff=None) -> "RingElement":
        return cls(complex_, scalars, monomial_degree(mono), {mono: scalars.one if coeff is None else coeff})

    @classmethod
    def face(cls, complex_, scalars, face: Sequence[int], power: int = 1) -> "RingElement":
        return cls.monomial(complex_, scalars, face_monomial(face, power))

    @classmethod
    def linear(cls, complex_, scalars, coeffs: Mapping[int, Any]) -> "RingElement":
        return cls(complex_, scalars, 1, {((v, 1),): c for v, c in coeffs.items() if v in complex_.vertices})

    @classmethod
    def zero(cls, complex_, scalars, degree: int) -> "RingElement":
        return cls(complex_, scalars, degree)

    def is_empty(self) -> bool:
        return not self.terms

    def _same_degree(self, other: "RingElement") -> None:
        if other.degree != self.degree:
            raise WrongDegree(f"Cannot add degrees {self.degree} and {other.degree}")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._same_degree(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            terms[mono] = terms[mono] + c if mono in terms else c
        return RingElement(self.complex, self.scalars, self.degree, terms)

    def __neg__(self) -> "RingElement":
        return RingElement(self.complex, self.scalars, self.degree, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def scale(self, c) -> "RingElement":
        return RingElement(self.complex, self.scalars, self.degree, {m: c * x for m, x in self.terms.items()})

    def __mul__(self, other: "RingElement") -> "RingElement":
        terms: Dict[Monomial, Any] = {}
        faces = self.complex.face_set
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = monomial_product(m1, m2)
                if monomial_support(mono) not in faces:
                    continue
                terms[mono] = terms[mono] + c1 * c2 if mono in terms else c1 * c2
        return RingElement(self.complex, self.scalars, self.degree + other.degree, terms)

    def power(self, k: int) -> "RingElement":
        result = RingElement.monomial(self.complex, self.scalars, ())
        for _ in range(k):
            result = result * self
        return result

    def to_dict(self) -> List[dict]:
        return [
            {"exps": {str(v): e for v, e in mono}, "coeff": polytext.format_value(c, self.scalars)}
            for mono, c in sorted(self.terms.items())
        ]

    @classmethod
    def from_dict(cls, data: List[dict], complex_, scalars) -> "RingElement":
        terms, degree = {}, None
        for item in data:
            mono = make_monomial({int(v): int(e) for v, e in item["exps"].items()})
            degree = monomial_degree(mono) if degree is None else degree
            raw = item.get("coeff", 1)
            if scalars.is_symbolic:
                coeff = polytext.parse_ratfunc(str(raw), scalars)
            else:
                coeff = scalars.element(int(raw))
            terms[mono] = terms[mono] + coeff if mono in terms else coeff
        return cls(complex_, scalars, degree or 0, terms)

    def __repr__(self) -> str:
        return f"RingElement(degree={self.degree}, terms={len(self.terms)})"


# ----------------------------------------------------------------------
# Ψ
# ----------------------------------------------------------------------
class PsiContext:
    """Oriented complex + l.s.o.p. + replacement vector, in sphere or ball-relative mode."""

    def __init__(
            self,
            oriented: OrientedComplex,
            lsop: LsopMatrix,
            replacement: Optional[Sequence[Any]] = None,
            mode: str = "sphere",
            check: bool = True,
            strategy: str = "fresh",
            rng: Optional[np.random.Generator] = None,
    ):
        K = oriented.complex
        if mode not in ("sphere", "ball"):
            raise BadParameters(f"Unknown Ψ mode: {mode}")
        if lsop.d != K.dim + 1:
            raise DimensionMismatch(f"l.s.o.p. has {lsop.d} rows, complex needs {K.dim + 1}")
        missing = set(K.vertices) - set(lsop.vertices)
        if missing:
            raise DimensionMismatch(f"No l.s.o.p. columns for vertices {sorted(missing)}")
        if check:
            p = lsop.field.characteristic
            if mode == "sphere" and not is_homology_sphere(K, p):
                raise NotHomologySphere(f"Complex is not a homology sphere over characteristic {p}")
            if mode == "ball" and not is_homology_ball(K, p):
                raise NotHomologyBall(f"Complex is not a homology ball over characteristic {p}")
        self.oriented = oriented
        self.complex = K
        self.lsop = lsop
        self.field = lsop.field
        self.mode = mode
        self.d = K.dim + 1
        self.boundary = boundary_complex(K) if mode == "ball" else None
        self.replacement = tuple(replacement) if replacement is not None else replacement_vector(lsop, strategy, rng=rng)
        self.memory = PsiMemory(minors=lsop.memo)

    # --- faces --------------------------------------------------------
    def is_interior(self, face: Sequence[int]) -> bool:
        return self.boundary is None or make_face(face) not in self.boundary.face_set

    def faces_of_degree(self, i: int) -> List[Face]:
        return face_monomial_span(self.complex, i)

    def column_faces(self, i: int) -> List[Face]:
        """Degree-i faces paired against: all of them, or the interior ones in ball mode."""
        return [f for f in self.faces_of_degree(i) if self.is_interior(f)]

    # --- elements -----------------------------------------------------
    def element(self, mono: Monomial, coeff=None) -> RingElement:
        return RingElement.monomial(self.complex, self.field, mono, coeff)

    def face_element(self, face: Sequence[int], power: int = 1) -> RingElement:
        return RingElement.face(self.complex, self.field, face, power)

    def theta(self, j: int) -> RingElement:
        return RingElement.linear(self.complex, self.field, self.lsop.row(j))

    # --- evaluation ---------------------------------------------------
    def _nonzero(self, value, what: str):
        if self.field.is_zero(value):
            if self.field.is_symbolic:
                raise MinorVanishes(f"{what} vanishes identically")
            raise DenominatorVanishes(f"{what} vanishes at this point")
        return value

    def _lee(self, mono: Monomial):
        exps = dict(mono)
        sigma = monomial_support(mono)
        total = self.field.zero
        for F in self.complex.facets_containing(sigma):
            A_F = self._nonzero(self.lsop.minor(F), f"A_{list(F)}")
            replaced = {i: self._nonzero(self.lsop.minor_replaced(F, i, self.replacement), f"A_{list(F)}({i})")
                        for i in F}
            num, den = self.field.one, A_F
            for i in sigma:
                if exps[i] > 1:
                    num = num * replaced[i] ** (exps[i] - 1)
            for i in F:
                if i not in exps:
                    den = den * replaced[i]
            term = num / den
            total = total + term if self.oriented.sign[F] > 0 else total - term
        return total

    def psi_monomial(self, exps) -> Any:
        mono = exps if isinstance(exps, tuple) else make_monomial(exps)
        if monomial_degree(mono) != self.d:
            raise WrongDegree(f"Ψ needs degree {self.d}, got {monomial_degree(mono)}")
        sigma = monomial_support(mono)
        if sigma not in self.complex.face_set:
            raise SupportNotAFace(f"Support {list(sigma)} is not a face")
        if not self.is_interior(sigma):
            raise SupportNotInterior(f"Support {list(sigma)} lies on the boundary")
        return self.memory.psi.get_or_compute(mono, lambda: self._lee(mono))

    def psi_element(self, alpha: RingElement):
        if alpha.degree != self.d:
            raise WrongDegree(f"Ψ needs degree {self.d}, got {alpha.degree}")
        total = self.field.zero
        for mono, coeff in alpha.terms.items():
            total = total + coeff * self.psi_monomial(mono)
        return total

    def psi_product(self, *monos: Monomial):
        """Ψ of a product of monomials; zero when the support is not a face."""
        mono = monomial_product(*monos)
        if monomial_support(mono) not in self.complex.face_set:
            return self.field.zero
        return self.psi_monomial(mono)

    def oriented_minor(self, facet: Sequence[int]):
        """det M of the facet ordered compatibly with the orientation."""
        facet = make_face(facet)
        return self.lsop.minor(facet) if self.oriented.sign[facet] > 0 else -self.lsop.minor(facet)

    # --- specialization -----------------------------------------------
    def specialize(self, point, target) -> "PsiContext":
        if not self.field.is_symbolic:
            return self
        replacement = [specialize_value(x, point, self.field, target) for x in self.replacement]
        return PsiContext(self.oriented, self.lsop.specialize(point, target), replacement, self.mode, check=False)

    def random_specialization(self, rng: np.random.Generator, target) -> Tuple[dict, "PsiContext"]:
        point = self.field.random_point(rng, target)
        return point, self.specialize(point, target)

    def witness_field(self, field_bits: int = DEFAULT_FIELD_BITS, witness_prime: int = DEFAULT_WITNESS_PRIME):
        if self.field.is_symbolic:
            return self.field.witness(field_bits, witness_prime)
        return self.field


def make_context(K: SimplicialComplex, lsop: LsopMatrix, mode: str = "sphere", **kwargs) -> PsiContext:
    return PsiContext(orient(K), lsop, mode=mode, **kwargs)


# ----------------------------------------------------------------------
# Spanning sets, bases, pairings
# ----------------------------------------------------------------------
def face_monomial_span(K: SimplicialComplex, i: int) -> List[Face]:
    """Faces with i vertices, lexicographic; they span k(Δ)_i."""
    d = K.dim + 1
    if not 0 <= i <= d:
        raise DegreeOutOfRange(f"Degree {i} outside [0, {d}]")
    return sorted(f for f in K.face_set if len(f) == i)


@dataclass
class DegreeBasis:
    degree: int
    faces: List[Face]
    witness: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"degree": self.degree, "faces": [list(f) for f in self.faces], "witness": self.witness}


def _pairing_row(ctx: PsiContext, face: Face, cols: Sequence[Face]) -> List[Any]:
    mono = face_monomial(face)
    return [ctx.psi_product(mono, face_monomial(g)) for g in cols]


def _greedy(ctx: PsiContext, order: Sequence[Face], cols: Sequence[Face], target: int, pinned: int):
    chosen: List[Face] = []
    rows: List[List[Any]] = []
    for k, face in enumerate(order):
        if len(chosen) == target:
            break
        row = _pairing_row(ctx, face, cols)
        if ctx.field.rank(rows + [row]) > len(rows):
            chosen.append(face)
            rows.append(row)
        elif k < pinned:
            return None, None
    if len(chosen) < target:
        return None, None
    return chosen, rows


def select_basis(
        ctx: PsiContext,
        i: int,
        seed: int,
        must_include: Sequence[Sequence[int]] = (),
        candidates: Optional[Iterable[Sequence[int]]] = None,
        attempts: int = 8,
        field_bits: int = DEFAULT_FIELD_BITS,
        witness_prime: int = DEFAULT_WITNESS_PRIME,
) -> DegreeBasis:
    """Greedy lexicographic basis of k(Δ)_i of size h_i, certified by a nonzero minor at a point.

    ``must_include`` faces are taken first; ``candidates`` restricts the rest.
    """
    span = face_monomial_span(ctx.complex, i)
    pinned = [make_face(f) for f in must_include]
    for f in pinned:
        if len(f) != i:
            raise WrongDegree(f"Face {list(f)} is not of degree {i}")
        if f not in ctx.complex.face_set:
            raise SupportNotAFace(f"{list(f)} is not a face")
    pool = [make_face(f) for f in candidates] if candidates is not None else span
    order = pinned + [f for f in pool if f not in pinned]
    target = fh_vectors(ctx.complex).h[i]
    cols = ctx.column_faces(ctx.d - i)
    witness = ctx.witness_field(field_bits, witness_prime)
    for attempt in range(attempts):
        rng = make_rng(seed, i, attempt)
        point, spec = ctx.random_specialization(rng, witness) if ctx.field.is_symbolic else ({}, ctx)
        try:
            chosen, rows = _greedy(spec, order, cols, target, len(pinned))
        except DenominatorVanishes:
            logger.debug(f"⚠️ Degenerate point in degree {i}, attempt {attempt}")
            continue
        if chosen is None:
            logger.debug(f"⚠️ No independent selection in degree {i} at attempt {attempt}")
            continue
        pivots = spec.field.pivots(rows)
        minor = spec.field.det([[row[p] for p in pivots] for row in rows])
        return DegreeBasis(i, chosen, {
            "field": repr(spec.field),
            "point": point_to_dict(point, spec.field),
            "columns": [list(cols[p]) for p in pivots],
            "minor": polytext.format_value(minor, spec.field),
            "attempt": attempt,
        })
    raise WitnessSearchFailed(f"No certified basis in degree {i} after {attempts} attempts")


def verify_basis_witness(ctx: PsiContext, basis: DegreeBasis, field_bits: int = DEFAULT_FIELD_BITS,
                         witness_prime: int = DEFAULT_WITNESS_PRIME) -> bool:
    """Recompute the recorded minor at the recorded point."""
    target = ctx.witness_field(field_bits, witness_prime)
    spec = ctx.specialize(point_from_dict(basis.witness["point"], target), target) if ctx.field.is_symbolic else ctx
    cols = [make_face(c) for c in basis.witness["columns"]]
    rows = [_pairing_row(spec, f, cols) for f in basis.faces]
    return not spec.field.is_zero(spec.field.det(rows))


def psi_degree_bound(ctx: PsiContext) -> int:
    """Degree in the l.s.o.p. entries bounding both the numerator and the common denominator of every Ψ value."""
    return len(ctx.complex.facets) * ctx.d * (ctx.d + 1)


def basis_error_bound_log2(ctx: PsiContext, i: int, attempts: int = 8, field_bits: int = DEFAULT_FIELD_BITS,
                           witness_prime: int = DEFAULT_WITNESS_PRIME) -> int:
    """log2 bound on ``select_basis`` missing at every attempt although a basis exists; 0 on exact contexts."""
    if not ctx.field.is_symbolic:
        return 0
    h = fh_vectors(ctx.complex).h[i]
    order = ctx.witness_field(field_bits, witness_prime).order
    return miss_bound_log2((h + 1) * psi_degree_bound(ctx), order, attempts)


@dataclass
class PairingMatrix:
    degree: int
    rows: List[Face]
    cols: List[Face]
    entries: List[List[Any]]
    scalars: Any

    @property
    def is_square(self) -> bool:
        return len(self.rows) == len(self.cols)

    def rank(self) -> int:
        return self.scalars.rank(self.entries)

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "rows": [list(f) for f in self.rows],
            "cols": [list(f) for f in self.cols],
            "entries": [[polytext.format_value(x, self.scalars) for x in row] for row in self.entries],
        }


def pairing_matrix(ctx: PsiContext, i: int, row_basis: Sequence[Sequence[int]], col_basis: Sequence[Sequence[int]]) -> PairingMatrix:
    """[Ψ(x_σ x_τ)] for σ of degree i and τ of degree d-i."""
    rows = [make_face(f) for f in row_basis]
    cols = [make_face(f) for f in col_basis]
    for f in rows:
        if len(f) != i:
            raise WrongDegree(f"Row face {list(f)} is not of degree {i}")
    for f in cols:
        if len(f) != ctx.d - i:
            raise WrongDegree(f"Column face {list(f)} is not of degree {ctx.d - i}")
        if not ctx.is_interior(f):
            raise SupportNotInterior(f"Column face {list(f)} lies on the boundary")
    entries = [_pairing_row(ctx, f, cols) for f in rows]
    return PairingMatrix(i, rows, cols, entries, ctx.field)


def is_zero(ctx: PsiContext, alpha: RingElement) -> bool:
    """α = 0 in the reduction iff Ψ(α·x_τ) = 0 for every complementary face τ."""
    if not 0 <= alpha.degree <= ctx.d:
        raise DegreeOutOfRange(f"Degree {alpha.degree} outside [0, {ctx.d}]")
    if alpha.is_empty():
        return True
    for tau in ctx.column_faces(ctx.d - alpha.degree):
        if not ctx.field.is_zero(ctx.psi_element(alpha * ctx.face_element(tau))):
            return False
    return True


def generator_difference(ctx: PsiContext, first: Sequence[int], second: Sequence[int]) -> RingElement:
    """det M(σ₁)·x_σ₁ - det M(σ₂)·x_σ₂ for facets ordered by the orientation; zero in the reduction."""
    return (ctx.face_element(first).scale(ctx.oriented_minor(first))
            - ctx.face_element(second).scale(ctx.oriented_minor(second)))
