import math

import pytest
from sympy import QQ

from models.errors import DenominatorVanishes, DivisionByZeroPoly, WrongCharacteristic
from services.algebra import (
    A,
    B,
    C,
    FiniteScalarField,
    NEG_INFINITY,
    PolyContext,
    RationalScalarField,
    VarId,
    add,
    degree_lc,
    divide,
    frobenius_decompose,
    partial_derivative,
    point_from_dict,
    point_to_dict,
    specialize,
    witness_field,
)


class TestVariables:
    """Variable names and ordering."""

    def test_parse(self):
        assert VarId.parse("a[2][5]") == A(2, 5)
        assert VarId.parse(" c[3] ") == C(3)
        assert A(1, 4).name == "a[1][4]"

    def test_parse_rejects_wrong_index_count(self):
        with pytest.raises(ValueError):
            VarId.parse("a[1]")
        with pytest.raises(ValueError):
            VarId.parse("b[1][2]")
        with pytest.raises(ValueError):
            VarId.parse("x[1]")

    def test_ordering(self):
        assert sorted([C(1), B(2), A(3, 1), B(1)]) == [A(3, 1), B(1), B(2), C(1)]


class TestScalarFields:
    """Finite and rational scalar fields."""

    def test_binary_witness_field(self):
        field = witness_field(2, 20)
        assert field.order == 2 ** 20
        assert field.name == "GF(2^20)"

    def test_odd_witness_field_has_enough_elements(self):
        field = witness_field(3, 20)
        assert field.degree == math.ceil(20 / math.log2(3))
        assert field.order >= 2 ** 20

    def test_zero_characteristic_uses_the_prime(self):
        assert witness_field(0).order == 2147483647

    def test_half_has_no_image_in_gf2(self):
        with pytest.raises(DenominatorVanishes):
            FiniteScalarField(2).coefficient(QQ(1, 2), QQ)

    def test_rational_determinant(self):
        field = RationalScalarField()
        assert field.det([[QQ(1), QQ(2)], [QQ(3), QQ(4)]]) == QQ(-2)
        assert field.rank([[QQ(1), QQ(2)], [QQ(2), QQ(4)]]) == 1

    def test_finite_kernel(self):
        field = FiniteScalarField(7)
        kernel = field.kernel([[1, 2, 3]])
        assert len(kernel) == 2
        for vec in kernel:
            assert int(vec[0] + 2 * vec[1] + 3 * vec[2]) % 7 == 0


class TestPolyContext:
    """Symbolic arithmetic."""

    def test_mixed_contexts_are_rejected(self):
        first = PolyContext([B(1)], 2)
        second = PolyContext([B(1)], 3)
        with pytest.raises(WrongCharacteristic):
            add(first.var(B(1)), second.var(B(1)))

    def test_division_by_zero(self):
        ctx = PolyContext([B(1)], 0)
        with pytest.raises(DivisionByZeroPoly):
            divide(ctx.var(B(1)), ctx.zero)

    def test_unknown_variable(self):
        ctx = PolyContext([B(1)], 0)
        with pytest.raises(KeyError):
            ctx.var(B(2))

    def test_square_has_zero_derivative_in_characteristic_two(self):
        ctx = PolyContext([B(1), B(2)], 2)
        f = ctx.poly_var(B(1)) ** 3 * ctx.poly_var(B(2)) + ctx.poly_var(B(1)) + 1
        assert not partial_derivative(f ** 2, B(1), ctx)
        assert partial_derivative(f, B(1), ctx)

    def test_quotient_rule(self):
        ctx = PolyContext([B(1)], 0)
        b = ctx.var(B(1))
        assert not (partial_derivative(1 / b, B(1), ctx) + 1 / b ** 2)


class TestParity:
    """Characteristic-2 parity decomposition."""

    def test_classes(self):
        ctx = PolyContext([B(1), B(2)], 2)
        b1, b2 = ctx.poly_var(B(1)), ctx.poly_var(B(2))
        f = b1 ** 3 * b2 ** 2 + b1 + b2 ** 2
        dec = frobenius_decompose(f)
        assert set(dec.classes) == {(1, 0), (0, 0)}
        assert dec.classes[(1, 0)] == b1 * b2 + 1
        assert dec.classes[(0, 0)] == b2
        assert dec.reassemble() == f

    def test_needs_characteristic_two(self):
        ctx = PolyContext([B(1)], 3)
        with pytest.raises(WrongCharacteristic):
            frobenius_decompose(ctx.poly_var(B(1)))

    def test_needs_a_polynomial(self):
        ctx = PolyContext([B(1)], 2)
        with pytest.raises(ValueError):
            frobenius_decompose(1 / ctx.var(B(1)))


class TestDegreeLc:
    """Degree and leading coefficient in one variable."""

    def test_rational_function(self):
        ctx = PolyContext([B(1), B(2)], 0)
        b1, b2 = ctx.var(B(1)), ctx.var(B(2))
        degree, lc = degree_lc((b1 ** 2 * b2 + b1) / (3 * b1 + 1), B(1), ctx)
        assert degree == 1
        assert not (lc - b2 / 3)

    def test_negative_degree(self):
        ctx = PolyContext([B(1), B(2)], 0)
        b1, b2 = ctx.var(B(1)), ctx.var(B(2))
        degree, lc = degree_lc(b2 / (b1 ** 2 + b2), B(1), ctx)
        assert degree == -2
        assert not (lc - b2)

    def test_zero(self):
        ctx = PolyContext([B(1)], 0)
        degree, lc = degree_lc(ctx.zero, B(1), ctx)
        assert degree == NEG_INFINITY
        assert not lc


class TestSpecialization:
    """Evaluation at points of finite fields."""

    def test_value(self):
        ctx = PolyContext([B(1), B(2)], 0)
        target = FiniteScalarField(101)
        f = (ctx.var(B(1)) ** 2 + 1) / ctx.var(B(2))
        point = {B(1): target.GF(3), B(2): target.GF(5)}
        assert int(specialize(f, point, ctx, target)) == 2

    def test_vanishing_denominator(self):
        ctx = PolyContext([B(1), B(2)], 0)
        target = FiniteScalarField(101)
        f = 1 / (ctx.var(B(1)) - ctx.var(B(2)))
        with pytest.raises(DenominatorVanishes):
            specialize(f, {B(1): target.GF(3), B(2): target.GF(3)}, ctx, target)

    def test_missing_variable(self):
        ctx = PolyContext([B(1), B(2)], 0)
        target = FiniteScalarField(101)
        with pytest.raises(ValueError):
            specialize(ctx.var(B(2)), {B(1): target.GF(1)}, ctx, target)

    def test_point_text(self):
        target = FiniteScalarField(101)
        point = {B(2): target.GF(7), A(1, 3): target.GF(4)}
        data = point_to_dict(point, target)
        assert list(data) == ["a[1][3]", "b[2]"]
        assert point_from_dict(data, target) == point
