"""Exact linear algebra over any of the scalar fields of ``services.algebra``."""
import math
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from models.errors import DenominatorVanishes
from services.algebra import PolyContext, specialize

Matrix = Sequence[Sequence[Any]]


def _check_rectangular(rows: Matrix) -> None:
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("Matrix rows have different lengths")


def exact_rank(rows: Matrix, field) -> int:
    _check_rectangular(rows)
    return field.rank([list(r) for r in rows])


def exact_det(rows: Matrix, field):
    _check_rectangular(rows)
    if rows and len(rows) != len(rows[0]):
        raise ValueError("Determinant of a non-square matrix")
    return field.det([list(r) for r in rows])


def exact_kernel(rows: Matrix, field) -> List[List[Any]]:
    """Basis of the right kernel {x : M x = 0}."""
    _check_rectangular(rows)
    return field.kernel([list(r) for r in rows])


def pivot_columns(rows: Matrix, field) -> List[int]:
    _check_rectangular(rows)
    return field.pivots([list(r) for r in rows])


def specialize_matrix(rows: Matrix, point, ctx: PolyContext, target) -> List[List[Any]]:
    return [[specialize(x, point, ctx, target) for x in row] for row in rows]


def specialized_rank(rows: Matrix, ctx: PolyContext, target, rng: np.random.Generator, trials: int) -> Tuple[int, dict]:
    """Largest rank over ``trials`` random points; a lower bound for the generic rank.

    Returns the rank and the point realizing it.
    """
    best, best_point = -1, {}
    for _ in range(trials):
        point = ctx.random_point(rng, target)
        try:
            rank = target.rank(specialize_matrix(rows, point, ctx, target))
        except DenominatorVanishes:
            continue
        if rank > best:
            best, best_point = rank, point
    return max(best, 0), best_point


def miss_bound_log2(degree: int, order: int, tries: int, misses: Optional[int] = None) -> int:
    """log2 of the Schwartz–Zippel bound on ``misses`` of ``tries`` random points hitting
    the zero set of a nonzero polynomial of ``degree`` over a field of ``order`` elements.

    0 when the field is too small to guarantee anything.
    """
    misses = tries if misses is None else misses
    if misses <= 0 or misses > tries:
        return 0
    per_point = math.log2(max(degree, 1)) - math.log2(order)
    if per_point >= 0:
        return 0
    return min(0, math.ceil(math.log2(math.comb(tries, misses)) + misses * per_point))
