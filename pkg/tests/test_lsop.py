import pytest

from models.errors import BadIndex, BadLabeling, BadParameters, NoPinningFacet, NotACone
from services.algebra import B, C, FiniteScalarField
from services.complex import cone
from services.corpus import cross_polytope, move_fixture
from services.lsop import (
    LsopMatrix,
    cone_lsop,
    generic_lsop,
    is_lsop,
    normalized_lsop,
    replacement_vector,
    structured_move_lsop,
    unit_column,
)
from utils.utils import make_rng


class TestNormalizedLsop:
    """(I_d | A) with the pinned facet first."""

    def test_pinned_columns(self, tetrahedron):
        M = normalized_lsop(tetrahedron, 0)
        assert M.params == {"pin": [1, 2, 3]}
        assert M.column(1) == (M.field.one, M.field.zero, M.field.zero)
        assert M.minor([1, 2, 3]) == M.field.one
        assert M.minor([2, 1, 3]) == -M.field.one
        assert is_lsop(tetrahedron, M)

    def test_pin_must_be_a_facet(self, octahedron):
        with pytest.raises(NoPinningFacet):
            normalized_lsop(octahedron, 2, pin=[1, 2, 3])
        with pytest.raises(NoPinningFacet):
            normalized_lsop(octahedron, 2, pin=[1, 3])
        assert normalized_lsop(octahedron, 2, pin=[1, 2, 3], require_facet=False).params["pin"] == [1, 2, 3]

    def test_minor_index_checks(self, tetrahedron):
        M = normalized_lsop(tetrahedron, 2)
        with pytest.raises(BadIndex):
            M.minor([1, 2])
        with pytest.raises(BadIndex):
            M.minor([1, 2, 7])
        with pytest.raises(BadIndex):
            M.minor_replaced([1, 2, 3], 4, replacement_vector(M))

    def test_generic_variables(self, square):
        M = generic_lsop(square, 2)
        assert len(M.variables()) == 8
        assert C(1) in M.field and C(2) in M.field


class TestStructuredMoveLsop:
    """The l.s.o.p. shared by both sides of a labelled move."""

    def test_columns(self):
        delta, _ = move_fixture()
        M = structured_move_lsop(delta, 2, 1)
        field = M.field
        assert M.minor([1, 2, 3, 4]) == field.one
        assert M.column(5) == (field.var(B(1)), field.var(B(2)), field.zero, field.zero)
        assert M.column(1) == (field.one, field.zero, field.var(B(3)), field.zero)
        assert is_lsop(delta, M)

    def test_parameter_checks(self, octahedron):
        delta, _ = move_fixture()
        with pytest.raises(BadParameters):
            structured_move_lsop(delta, 2, 0)
        with pytest.raises(BadParameters):
            structured_move_lsop(octahedron, 2, 1)

    def test_move_must_sit_on_the_first_labels(self):
        with pytest.raises(BadLabeling):
            structured_move_lsop(cross_polytope(4), 2, 1)


class TestConeLsop:
    """Apex and suspension variants."""

    def test_apex(self, square):
        K, apex = cone(square)
        M = cone_lsop(K)
        assert M.params == {"apex": apex}
        assert M.column(apex) == tuple(M.field.lift(x) for x in unit_column(1, 3))

    def test_suspension(self, octahedron):
        M = cone_lsop(octahedron, "suspension")
        assert M.params == {"apex": [5, 6]}
        assert M.column(6) == tuple(M.field.lift(x) for x in unit_column(2, 3))

    def test_not_a_cone(self, octahedron):
        with pytest.raises(NotACone):
            cone_lsop(octahedron, "apex")

    def test_unknown_variant(self, octahedron):
        with pytest.raises(BadParameters):
            cone_lsop(octahedron, "double")


class TestReplacementVector:
    """Strategies for the vector a of A_I(i)."""

    def test_strategies(self, tetrahedron):
        M = normalized_lsop(tetrahedron, 2)
        assert replacement_vector(M, "ones") == (M.field.one,) * 3
        assert replacement_vector(M, "fresh", index=0) == tuple(M.field.var(C(k)) for k in (1, 2, 3))
        with pytest.raises(BadParameters):
            replacement_vector(M, "zeros")

    def test_specialized_needs_a_generator(self, tetrahedron):
        target = FiniteScalarField(101)
        M = normalized_lsop(tetrahedron, 0)
        point = M.field.random_point(make_rng(0), target)
        spec = M.specialize(point, target)
        with pytest.raises(BadParameters):
            replacement_vector(spec)
        assert len(replacement_vector(spec, rng=make_rng(1))) == 3


class TestLsopText:
    """Reading an l.s.o.p. back from its text form."""

    def test_from_dict_recovers_minors(self, tetrahedron):
        M = normalized_lsop(tetrahedron, 2)
        restored = LsopMatrix.from_dict(M.to_dict(), 2)
        assert restored.name == "normalized"
        assert str(restored.minor([2, 3, 4])) == str(M.minor([2, 3, 4]))

    def test_restrict_rows(self, tetrahedron):
        M = normalized_lsop(tetrahedron, 2)
        assert M.restrict([1, 4], rows=[1, 2]).d == 2
        with pytest.raises(BadIndex):
            M.restrict([1], rows=[4])
