import asyncio

import pytest

from models.errors import BadParameters, NotHomologySphere
from models.models import Status
from services.algebra import B
from services.complex import cone, link, orient
from services.corpus import boundary_simplex, cross_polytope, move_fixture
from services.experiments import CheckExperiment, IdentityExperiment
from services.experiments.checks import algebra_laws, ball_duality, oracle_agreement, stanley_dimensions
from services.experiments.degree_argument import cone_isomorphism_check, degree_argument_experiment, degree_argument_lsop
from services.experiments.diffop import derivative_operator, diffop_experiment, fact_c_coefficient, moved_side
from services.experiments.identities import facet_identities, identity_suite, zero_move_fixture, zero_move_identity
from services.experiments.move_invariance import move_invariance_experiment
from services.lsop import is_lsop, structured_move_lsop
from services.moves import BistellarMove, is_move
from services.reduction import PsiContext


@pytest.fixture
def moved_ctx():
    delta, move = move_fixture()
    moved = moved_side(delta, 2, 1, move)
    return PsiContext(orient(moved, root=[1, 2, 3, 4]), structured_move_lsop(moved, 2, 1), check=False)


class TestDerivativeArgument:
    """Structured move l.s.o.p. and the composite derivative."""

    def test_moved_side_carries_tau(self):
        delta, move = move_fixture()
        moved = moved_side(delta, 2, 1, move)
        assert (1, 2) in moved
        assert is_move(moved, [1, 2], [3, 4, 5])

    def test_unmoved_side_is_rejected_without_a_move(self):
        delta, _ = move_fixture()
        with pytest.raises(BadParameters):
            moved_side(delta, 2, 1)

    def test_coefficient(self, moved_ctx):
        field = moved_ctx.field
        assert not (fact_c_coefficient(moved_ctx, 2, 1) - 1 / (field.var(B(3)) * field.var(B(4))))

    def test_derivative_operator(self, moved_ctx):
        field = moved_ctx.field
        b1, b3, b4 = field.var(B(1)), field.var(B(3)), field.var(B(4))
        assert not (derivative_operator(b1 * b3 * b4 + b3 ** 2, 2, 1, moved_ctx) - b1)

    def test_parameter_checks(self, octahedron):
        delta, _ = move_fixture()
        with pytest.raises(BadParameters):
            diffop_experiment(delta, 2, 0)
        with pytest.raises(BadParameters):
            diffop_experiment(octahedron, 2, 1)
        with pytest.raises(BadParameters):
            diffop_experiment(delta, 2, 1, BistellarMove((3, 4, 5, 6), (7,)))

    @pytest.mark.slow
    def test_move_fixture(self, config):
        delta, move = move_fixture()
        report = diffop_experiment(delta, 2, 1, move, seed=0, config=config)
        assert report.basis[0] == [1, 2]
        assert report.values["top"] == "1"
        assert report.fact_c
        assert report.distinguished_nonzero
        assert report.others_vanish


class TestIdentities:
    """Displayed identities of the canonical function."""

    def test_facet_identities(self, tetrahedron, config):
        results = facet_identities("boundary-simplex-3", tetrahedron, 0, config)
        assert [r.name.split(":")[0] for r in results] == ["facet-normalization", "generator-relation",
                                                           "oracle-agreement"]
        assert all(r.passed for r in results)

    def test_zero_move_fixture(self):
        K, m = zero_move_fixture(3)
        assert m == 5
        assert (1, 2, 3) not in K
        assert len(K.facets) == 6

    @pytest.mark.parametrize("d", [2, 3])
    def test_zero_move(self, d):
        result = zero_move_identity(d)
        assert result.passed
        assert result.sign in (1, -1)

    @pytest.mark.slow
    def test_zero_move_in_dimension_three(self):
        assert zero_move_identity(4).passed

    @pytest.mark.slow
    def test_suite(self, config):
        report = identity_suite(0, config)
        assert report.passed
        assert len(report.results) == 3 * 3 + 3 + 2

    @pytest.mark.slow
    def test_experiment_entry_point(self, config):
        result = asyncio.run(IdentityExperiment(config).process({"seed": 0}))
        assert result["status"] == "success"


class TestDegreeArgument:
    """Degrees in the apex-adjacent variable on a cone."""

    def test_odd_dimension_is_refused(self, square):
        with pytest.raises(BadParameters):
            degree_argument_experiment(square)

    def test_projective_plane_is_refused(self, projective_plane):
        with pytest.raises(NotHomologySphere):
            degree_argument_experiment(projective_plane)

    @pytest.mark.parametrize("variant", ["apex", "suspension"])
    def test_cone_isomorphism(self, tetrahedron, variant):
        assert cone_isomorphism_check(tetrahedron, 2, variant)

    def test_cone_isomorphism_in_characteristic_zero(self, square):
        assert cone_isomorphism_check(square, 0, "apex")

    def test_unknown_variant(self, tetrahedron):
        with pytest.raises(BadParameters):
            cone_isomorphism_check(tetrahedron, 2, "join")

    @pytest.mark.parametrize("delta", [boundary_simplex(3), cross_polytope(3)], ids=["tetrahedron", "octahedron"])
    def test_pinned_lsop_stays_generic(self, delta):
        K, v = cone(delta)
        u = delta.vertices[0]
        L1 = link(delta, [u]).ambient()
        pinned = L1.sorted_facets[0]
        lsop = degree_argument_lsop(K, v, u, pinned, 2)
        d = K.dim + 1
        assert is_lsop(K, lsop)
        assert is_lsop(L1, lsop.restrict(L1.vertices, range(3, d + 1)))
        assert not (lsop.minor(tuple(sorted((v, u) + pinned))) - 1)

    def test_tetrahedron(self, tetrahedron, config):
        report = degree_argument_experiment(tetrahedron, config=config, cone_check=False)
        assert report.n == 1
        assert report.pinned == [2, 3]
        assert report.passed
        assert {e.kind for e in report.entries} == {"sigma-sigma"}

    @pytest.mark.slow
    def test_octahedron(self, config):
        report = degree_argument_experiment(cross_polytope(3), config=config)
        assert report.passed
        assert report.cone_isomorphism
        kinds = {e.kind for e in report.entries}
        assert kinds == {"sigma-sigma", "tau-tau", "sigma-tau"}
        for entry in report.entries:
            if entry.kind == "sigma-sigma" and entry.leading_matches:
                assert entry.degree == 1
            elif entry.kind != "sigma-sigma":
                assert entry.degree is None or entry.degree <= 0


class TestMoveInvariance:
    """Certificate status along a random walk."""

    def test_square_walk(self, square, config):
        report = move_invariance_experiment(square, 3, seed=1, config=config)
        assert len(report.steps) == 4
        assert report.steps[0].move is None
        assert report.constant
        assert all(step.status == Status.ANISOTROPIC for step in report.steps)


class TestChecks:
    """Dimension, oracle and algebra checks."""

    def test_dimensions(self, octahedron, config):
        report = stanley_dimensions(octahedron, config=config)
        assert report.passed
        assert report.detail["sizes"] == [1, 3, 3, 1]

    def test_dimensions_of_a_zero_sphere(self, config):
        report = stanley_dimensions(cross_polytope(1), config=config)
        assert report.passed
        assert report.detail["sizes"] == [1, 1]

    def test_ball_duality(self, octahedron, config):
        report = ball_duality(octahedron, config=config)
        assert report.passed
        assert report.detail["span_ranks"] == [1, 3, 3, 1]

    def test_ball_duality_through_the_experiment(self, square, config):
        report = CheckExperiment(config).run("duality", square, seed=2)
        assert report.check == "duality"
        assert report.passed

    def test_oracle_agreement(self, tetrahedron, config):
        report = oracle_agreement(tetrahedron, points=3, config=config)
        assert report.passed
        assert report.detail["mismatches"] == 0

    def test_algebra_laws(self):
        report = algebra_laws(trials=50, seed=0)
        assert report.passed, report.detail

    def test_unknown_check(self, config):
        with pytest.raises(ValueError):
            CheckExperiment(config).run("volume")
