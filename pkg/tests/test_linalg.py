import pytest
from sympy import QQ

from services.algebra import B, FiniteScalarField, PolyContext, RationalScalarField
from services.linalg import exact_det, exact_kernel, exact_rank, miss_bound_log2, pivot_columns, specialized_rank
from utils.utils import make_rng


class TestExactLinearAlgebra:
    """Rank, determinant, kernel and pivots over each field."""

    def test_finite_rank(self):
        assert exact_rank([[1, 2], [2, 4]], FiniteScalarField(7)) == 1

    def test_rational_kernel(self):
        kernel = exact_kernel([[QQ(1), QQ(1)]], RationalScalarField())
        assert len(kernel) == 1
        assert kernel[0][0] + kernel[0][1] == 0

    def test_pivots(self):
        assert pivot_columns([[0, 1, 1], [0, 0, 1]], FiniteScalarField(5)) == [1, 2]

    def test_non_square_determinant(self):
        with pytest.raises(ValueError):
            exact_det([[1, 2]], FiniteScalarField(5))

    def test_ragged_rows(self):
        with pytest.raises(ValueError):
            exact_rank([[1, 2], [1]], FiniteScalarField(5))

    def test_symbolic_determinant(self):
        ctx = PolyContext([B(1), B(2)], 0)
        b1, b2 = ctx.var(B(1)), ctx.var(B(2))
        assert not (exact_det([[b1, ctx.one], [ctx.one, b2]], ctx) - (b1 * b2 - 1))

    def test_symbolic_determinant_with_denominators(self):
        ctx = PolyContext([B(1), B(2)], 0)
        b1, b2 = ctx.var(B(1)), ctx.var(B(2))
        assert not (exact_det([[1 / b1, ctx.one], [ctx.zero, b2]], ctx) - b2 / b1)

    def test_symbolic_rank(self):
        ctx = PolyContext([B(1), B(2)], 2)
        b1, b2 = ctx.var(B(1)), ctx.var(B(2))
        assert exact_rank([[b1, b2], [b1 ** 2, b1 * b2]], ctx) == 1
        assert exact_rank([[b1, b2], [b2, b1]], ctx) == 2


class TestSpecializedRank:
    """Rank lower bounds at random points."""

    def test_generic_matrix(self):
        ctx = PolyContext([B(1), B(2)], 0)
        b1, b2 = ctx.var(B(1)), ctx.var(B(2))
        rank, point = specialized_rank([[b1, ctx.one], [ctx.one, b2]], ctx, FiniteScalarField(2 ** 31 - 1),
                                       make_rng(0), trials=3)
        assert rank == 2
        assert set(point) == {B(1), B(2)}


class TestMissBound:
    """Schwartz–Zippel failure bounds."""

    def test_every_point_misses(self):
        assert miss_bound_log2(4, 2 ** 20, 3) == -54

    def test_some_points_miss(self):
        # C(4, 2) = 6 patterns, each (2 / 2^10)^2
        assert miss_bound_log2(2, 2 ** 10, 4, 2) == -15

    def test_field_too_small(self):
        assert miss_bound_log2(2 ** 21, 2 ** 20, 5) == 0

    def test_no_misses_allowed(self):
        assert miss_bound_log2(4, 2 ** 20, 3, 0) == 0


class TestGenericRankAgreement:
    """Exact symbolic rank against the rank at random points."""

    @pytest.mark.parametrize("characteristic", [0, 2])
    def test_vandermonde(self, characteristic):
        ctx = PolyContext([B(1), B(2), B(3)], characteristic)
        xs = [ctx.var(B(k)) for k in (1, 2, 3)]
        rows = [[ctx.one, x, x ** 2] for x in xs]
        target = ctx.witness(20)
        rank, _ = specialized_rank(rows, ctx, target, make_rng(0), trials=3)
        assert exact_rank(rows, ctx) == rank == 3

    def test_rational_functions_with_a_dependent_row(self):
        ctx = PolyContext([B(1), B(2), B(3)], 0)
        xs = [ctx.var(B(k)) for k in (1, 2, 3)]
        rows = [[1 / x, ctx.one, x] for x in xs]
        rows.append([a + b for a, b in zip(rows[0], rows[1])])
        target = ctx.witness(20)
        rank, _ = specialized_rank(rows, ctx, target, make_rng(1), trials=3)
        assert exact_rank(rows, ctx) == rank == 3
