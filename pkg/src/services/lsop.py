"""
Linear systems of parameters.

An ``LsopMatrix`` stores one column λ_v per vertex; θ_i = Σ_v M[i][v]·x_v.
Entries live in a ``PolyContext`` (symbolic) or in a specialized scalar field.
"""
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from configuration.configuration import logger
from models.errors import (
    BadIndex,
    BadLabeling,
    BadParameters,
    DimensionMismatch,
    NoPinningFacet,
    NotACone,
    NotPure,
)
from services.algebra import A, B, C, PolyContext, VarId, specialize
from services.complex import SimplicialComplex, link, make_face
from services.memory import MemoTable
from services.moves import is_move
from services import polytext

Entry = Union[int, VarId]


def _permutation_sign(seq: Sequence[int]) -> int:
    sign = 1
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                sign = -sign
    return sign


def unit_column(k: int, d: int) -> Tuple[int, ...]:
    """e_k (1-based) of length d."""
    return tuple(1 if i == k else 0 for i in range(1, d + 1))


class LsopMatrix:
    def __init__(self, columns: Mapping[int, Sequence[Any]], field, name: str = "custom",
                 params: Optional[dict] = None, memo: Optional[MemoTable] = None):
        self.columns: Dict[int, Tuple[Any, ...]] = {int(v): tuple(col) for v, col in sorted(columns.items())}
        lengths = {len(col) for col in self.columns.values()}
        if len(lengths) != 1:
            raise DimensionMismatch("Columns must all have the same length")
        self.d = lengths.pop()
        self.field = field
        self.name = name
        self.params = dict(params or {})
        self._memo = memo or MemoTable(f"minors:{name}")

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(self.columns)

    @property
    def m(self) -> int:
        return max(self.columns) if self.columns else 0

    @property
    def memo(self) -> MemoTable:
        return self._memo

    def column(self, v: int) -> Tuple[Any, ...]:
        try:
            return self.columns[int(v)]
        except KeyError as e:
            raise BadIndex(f"No column for vertex {v}") from e

    def row(self, i: int) -> Dict[int, Any]:
        """Coefficients of θ_i (1-based)."""
        if not 1 <= i <= self.d:
            raise BadIndex(f"Row {i} outside [1, {self.d}]")
        return {v: col[i - 1] for v, col in self.columns.items()}

    def submatrix(self, cols: Sequence[Sequence[Any]]) -> List[List[Any]]:
        return [[col[r] for col in cols] for r in range(self.d)]

    def _check_index(self, I: Sequence[int]) -> Tuple[int, ...]:
        I = tuple(int(v) for v in I)
        if len(I) != self.d or len(set(I)) != len(I):
            raise BadIndex(f"Minor needs {self.d} distinct vertices, got {list(I)}")
        for v in I:
            self.column(v)
        return I

    def minor(self, I: Sequence[int]):
        """A_I = det M(I) for the ordered vertex list I."""
        I = self._check_index(I)
        key = tuple(sorted(I))
        value = self._memo.get_or_compute(
            ("minor", key), lambda: self.field.det(self.submatrix([self.columns[v] for v in key]))
        )
        return value if _permutation_sign(I) > 0 else -value

    def minor_replaced(self, I: Sequence[int], i: int, a: Sequence[Any]):
        """A_I(i): the minor with column λ_i replaced by a."""
        I = self._check_index(I)
        if int(i) not in I:
            raise BadIndex(f"Vertex {i} is not in {list(I)}")
        if len(a) != self.d:
            raise DimensionMismatch("Replacement vector has the wrong length")
        key = tuple(sorted(I))
        a_key = tuple(self.field.key(x) for x in a)
        cols = [tuple(a) if v == int(i) else self.columns[v] for v in key]
        value = self._memo.get_or_compute(
            ("replaced", key, int(i), a_key), lambda: self.field.det(self.submatrix(cols))
        )
        return value if _permutation_sign(I) > 0 else -value

    def with_column(self, v: int, col: Sequence[Any]) -> "LsopMatrix":
        if len(col) != self.d:
            raise DimensionMismatch("Column has the wrong length")
        columns = dict(self.columns)
        columns[int(v)] = tuple(col)
        return LsopMatrix(columns, self.field, self.name, self.params)

    def restrict(self, vertices: Iterable[int], rows: Optional[Sequence[int]] = None, name: Optional[str] = None) -> "LsopMatrix":
        """Columns of ``vertices`` and the given (1-based) rows, in the same field."""
        rows = list(rows) if rows is not None else list(range(1, self.d + 1))
        for r in rows:
            if not 1 <= r <= self.d:
                raise BadIndex(f"Row {r} outside [1, {self.d}]")
        columns = {v: tuple(self.column(v)[r - 1] for r in rows) for v in vertices}
        return LsopMatrix(columns, self.field, name or f"{self.name}|restricted", {**self.params, "rows": rows})

    def relabel(self, mapping: Mapping[int, int]) -> "LsopMatrix":
        columns = {mapping.get(v, v): col for v, col in self.columns.items()}
        return LsopMatrix(columns, self.field, self.name, self.params)

    def specialize(self, point: Mapping[VarId, Any], target) -> "LsopMatrix":
        if not self.field.is_symbolic:
            return self
        columns = {
            v: tuple(specialize(x, point, self.field, target) for x in col)
            for v, col in self.columns.items()
        }
        return LsopMatrix(columns, target, self.name, self.params)

    def variables(self) -> List[VarId]:
        if not self.field.is_symbolic:
            return []
        used = set()
        for col in self.columns.values():
            for x in col:
                for monom in list(x.numer.monoms()) + list(x.denom.monoms()):
                    used.update(self.field.variables[k] for k, e in enumerate(monom) if e)
        return sorted(used, key=VarId.sort_key)

    def to_dict(self) -> dict:
        return {
            "v": 1,
            "name": self.name,
            "params": self.params,
            "d": self.d,
            "columns": {str(v): [polytext.format_value(x, self.field) for x in col] for v, col in self.columns.items()},
        }

    @classmethod
    def from_dict(cls, data: dict, characteristic: int) -> "LsopMatrix":
        texts = [str(x) for col in data["columns"].values() for x in col]
        d = len(next(iter(data["columns"].values())))
        variables = set().union(*(polytext.scan_variables(t) for t in texts)) | {C(k) for k in range(1, d + 1)}
        ctx = PolyContext(variables, characteristic)
        columns = {int(v): [polytext.parse_ratfunc(str(x), ctx) for x in col] for v, col in data["columns"].items()}
        return cls(columns, ctx, data.get("name", "custom"), data.get("params"))

    def __repr__(self) -> str:
        return f"LsopMatrix({self.name}, d={self.d}, vertices={len(self.columns)}, field={self.field!r})"


# ----------------------------------------------------------------------
# Constructors
# ----------------------------------------------------------------------
def _dimension(K: SimplicialComplex) -> int:
    if not K.is_pure or not K.facets:
        raise NotPure("An l.s.o.p. needs a pure nonempty complex")
    return K.dim + 1


def generic_lsop(
        K: SimplicialComplex,
        characteristic: int = 2,
        fixed: Optional[Mapping[int, Sequence[Entry]]] = None,
        offset: int = 0,
        replacement_sets: int = 1,
        name: str = "generic",
        params: Optional[dict] = None,
) -> LsopMatrix:
    """Fresh variables a[i+offset][v] in every column not listed in ``fixed``.

    ``offset`` shifts the row index in variable names so that two calls can use
    disjoint variable sets. The context also carries the replacement variables
    c[1..replacement_sets*d].
    """
    d = _dimension(K)
    fixed = {int(v): tuple(col) for v, col in (fixed or {}).items()}
    for v, col in fixed.items():
        if v not in K.vertices:
            raise BadIndex(f"Fixed column for unknown vertex {v}")
        if len(col) != d:
            raise DimensionMismatch(f"Fixed column of vertex {v} has length {len(col)} != {d}")
    variables = [A(i + offset, v) for i in range(1, d + 1) for v in K.vertices if v not in fixed]
    variables += [C(k) for k in range(1, replacement_sets * d + 1)]
    variables += [x for col in fixed.values() for x in col if isinstance(x, VarId)]
    ctx = PolyContext(variables, characteristic)
    columns = {}
    for v in K.vertices:
        if v in fixed:
            columns[v] = tuple(ctx.lift(x) for x in fixed[v])
        else:
            columns[v] = tuple(ctx.var(A(i + offset, v)) for i in range(1, d + 1))
    logger.debug(f"Built {name} l.s.o.p. with {len(ctx.variables)} variables over {ctx.name}")
    return LsopMatrix(columns, ctx, name, params)


def normalized_lsop(
        K: SimplicialComplex,
        characteristic: int = 2,
        pin: Optional[Sequence[int]] = None,
        require_facet: bool = True,
        replacement_sets: int = 1,
) -> LsopMatrix:
    """(I_d | A): the pinned vertices (lexicographically least facet by default) get e_1..e_d."""
    d = _dimension(K)
    pin = make_face(pin) if pin is not None else K.sorted_facets[0]
    if len(pin) != d or any(v not in K.vertices for v in pin):
        raise NoPinningFacet(f"{list(pin)} cannot be pinned to I_{d}")
    if require_facet and pin not in K.facets:
        raise NoPinningFacet(f"{list(pin)} is not a facet")
    fixed = {v: unit_column(k + 1, d) for k, v in enumerate(pin)}
    return generic_lsop(K, characteristic, fixed=fixed, replacement_sets=replacement_sets,
                        name="normalized", params={"pin": list(pin)})


def structured_move_lsop(K: SimplicialComplex, n: int, q: int, characteristic: int = 2) -> LsopMatrix:
    """The l.s.o.p. shared by both sides of a q-move with τ = [q+1], σ = [2n+1] ∖ [q+1].

    λ_j generic for j ≥ 2n+2, λ_{2n+1} = (b_1..b_{2n-q-1}, 0..0), and for j ≤ 2n
    λ_ij = 1 if i = j, b_i if i - j = 2n-q-1, else 0. det M([2n]) = 1.
    """
    if not 0 < q < n:
        raise BadParameters(f"Need 0 < q < n, got q={q}, n={n}")
    d = _dimension(K)
    if d != 2 * n:
        raise BadParameters(f"Complex has dimension {d - 1}, expected {2 * n - 1}")
    tau = tuple(range(1, q + 2))
    sigma = tuple(range(q + 2, 2 * n + 2))
    if not (is_move(K, sigma, tau) or is_move(K, tau, sigma)):
        raise BadLabeling(f"Move faces must be σ={list(sigma)}, τ={list(tau)}")
    offset = 2 * n - q - 1
    variables = [A(i, v) for i in range(1, d + 1) for v in K.vertices if v >= 2 * n + 2]
    variables += [B(i) for i in range(1, 2 * n + 1)] + [C(k) for k in range(1, d + 1)]
    ctx = PolyContext(variables, characteristic)
    columns = {}
    for v in K.vertices:
        if v >= 2 * n + 2:
            columns[v] = tuple(ctx.var(A(i, v)) for i in range(1, d + 1))
        elif v == 2 * n + 1:
            columns[v] = tuple(ctx.var(B(i)) if i <= offset else ctx.zero for i in range(1, d + 1))
        else:
            columns[v] = tuple(
                ctx.one if i == v else ctx.var(B(i)) if i - v == offset else ctx.zero
                for i in range(1, d + 1)
            )
    return LsopMatrix(columns, ctx, "structured-move", {"n": n, "q": q})


def _check_cone(K: SimplicialComplex, apex: int) -> None:
    if not all(apex in f for f in K.facets):
        raise NotACone(f"Vertex {apex} is not a cone apex")


def _check_suspension(K: SimplicialComplex, v: int, w: int) -> None:
    if not all((v in f) != (w in f) for f in K.facets):
        raise NotACone(f"Every facet must contain exactly one of {v}, {w}")
    if link(K, [v]).ambient() != link(K, [w]).ambient():
        raise NotACone(f"Links of {v} and {w} differ")


def cone_lsop(
        K: SimplicialComplex,
        variant: str = "apex",
        apex: Optional[Union[int, Sequence[int]]] = None,
        characteristic: int = 2,
        fixed: Optional[Mapping[int, Sequence[Entry]]] = None,
) -> LsopMatrix:
    """Apex column e_1 ("apex") or apex pair (e_1, e_2) ("suspension"); other columns generic.

    Apices default to the largest labels.
    """
    d = _dimension(K)
    fixed = dict(fixed or {})
    if variant == "apex":
        v = int(apex) if apex is not None else K.vertices[-1]
        _check_cone(K, v)
        fixed[v] = unit_column(1, d)
        params = {"apex": v}
    elif variant == "suspension":
        if d < 2:
            raise NotACone("A suspension has dimension at least 0")
        v, w = tuple(apex) if apex is not None else K.vertices[-2:]
        _check_suspension(K, v, w)
        fixed[v] = unit_column(1, d)
        fixed[w] = unit_column(2, d)
        params = {"apex": [v, w]}
    else:
        raise BadParameters(f"Unknown cone variant: {variant}")
    return generic_lsop(K, characteristic, fixed=fixed, name=f"cone-{variant}", params=params)


def is_lsop(K: SimplicialComplex, M: LsopMatrix) -> bool:
    """det M(F) ≠ 0 for every facet F (exact for symbolic and specialized entries)."""
    if M.d != K.dim + 1:
        raise DimensionMismatch(f"Matrix has {M.d} rows, complex needs {K.dim + 1}")
    missing = set(K.vertices) - set(M.vertices)
    if missing:
        raise DimensionMismatch(f"No columns for vertices {sorted(missing)}")
    return all(not M.field.is_zero(M.minor(F)) for F in K.sorted_facets)


def replacement_vector(M: LsopMatrix, strategy: str = "fresh", index: int = 0,
                       rng: Optional[np.random.Generator] = None) -> Tuple[Any, ...]:
    """The vector a of A_I(i).

    ``fresh`` uses c[index*d+1 .. index*d+d] in a symbolic context and random
    nonzero scalars otherwise; ``ones`` is the all-ones vector.
    """
    field = M.field
    if strategy == "ones":
        return tuple(field.one for _ in range(M.d))
    if strategy != "fresh":
        raise BadParameters(f"Unknown replacement strategy: {strategy}")
    if field.is_symbolic:
        return tuple(field.var(C(index * M.d + k)) for k in range(1, M.d + 1))
    if rng is None:
        raise BadParameters("A random replacement vector needs a generator")
    return tuple(field.random_nonzero(rng) for _ in range(M.d))
