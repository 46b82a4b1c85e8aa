import pytest

from models.errors import BadParameters, CostGuard, SupportNotAFace
from services.algebra import FiniteScalarField, witness_field
from services.lsop import normalized_lsop
from services.oracle import face_supported_monomials, oracle_functional, oracle_psi
from services.reduction import make_context
from utils.utils import make_rng


def _specialized(K, characteristic, target, seed):
    ctx = make_context(K, normalized_lsop(K, characteristic))
    return ctx.random_specialization(make_rng(seed), target)[1]


class TestFaceSupportedMonomials:
    """Monomials with face support."""

    def test_square_degree_two(self, square):
        monos = face_supported_monomials(square, 2)
        assert len(monos) == 8
        assert ((1, 2),) in monos
        assert ((1, 1), (3, 1)) not in monos

    def test_degree_zero(self, square):
        assert face_supported_monomials(square, 0) == [()]


class TestOracle:
    """Brute-force Ψ against Lee's formula."""

    @pytest.mark.parametrize("characteristic,target", [
        (0, FiniteScalarField(2147483647)),
        (2, witness_field(2, 20)),
        (3, witness_field(3, 20)),
    ])
    def test_agrees_with_lee_on_octahedron(self, octahedron, characteristic, target):
        spec = _specialized(octahedron, characteristic, target, seed=1)
        oracle = oracle_functional(octahedron, spec.lsop, spec.oriented)
        assert len(oracle) == len(face_supported_monomials(octahedron, 3))
        for mono, value in oracle.items():
            assert spec.psi_monomial(mono) == value

    def test_agrees_on_tetrahedron(self, tetrahedron):
        target = FiniteScalarField(2147483647)
        spec = _specialized(tetrahedron, 0, target, seed=3)
        assert oracle_psi(tetrahedron, spec.lsop, {4: 3}, spec.oriented) == spec.psi_monomial({4: 3})

    def test_needs_a_specialized_matrix(self, tetrahedron):
        with pytest.raises(BadParameters):
            oracle_functional(tetrahedron, normalized_lsop(tetrahedron, 2))

    def test_cost_guard(self, octahedron):
        spec = _specialized(octahedron, 2, witness_field(2, 20), seed=0)
        with pytest.raises(CostGuard):
            oracle_functional(octahedron, spec.lsop, max_vertices=4)

    def test_support_must_be_a_face(self, octahedron):
        spec = _specialized(octahedron, 2, witness_field(2, 20), seed=0)
        with pytest.raises(SupportNotAFace):
            oracle_psi(octahedron, spec.lsop, {1: 1, 2: 2})
