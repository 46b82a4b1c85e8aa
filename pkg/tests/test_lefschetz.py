import pytest

from models.errors import NotHomologySphere
from services.corpus import cyclic_polytope_boundary
from services.experiments.lefschetz import lefschetz_check


class TestLefschetz:
    """Ranks of multiplication by a random linear form."""

    def test_tetrahedron(self, tetrahedron, config):
        report = lefschetz_check(tetrahedron, seed=0, characteristic=2, config=config, points=2)
        assert report.expected == [1, 1]
        assert report.ranks == [1, 1]
        assert report.points == 2
        assert report.verdict == "holds"
        assert set(report.omega) == {"field", "w", "point"}
        assert report.seed == 0
        assert report.error_bound_log2 < 0

    def test_square(self, square, config):
        report = lefschetz_check(square, config=config)
        assert report.expected == [1, 2]
        assert report.verdict == "holds"

    def test_octahedron_in_characteristic_zero(self, octahedron, config):
        report = lefschetz_check(octahedron, characteristic=0, config=config)
        assert report.expected == [1, 3]
        assert report.ranks == [1, 3]

    def test_projective_plane_is_refused(self, projective_plane, config):
        with pytest.raises(NotHomologySphere):
            lefschetz_check(projective_plane, config=config)

    @pytest.mark.slow
    def test_cyclic_polytope(self, config):
        report = lefschetz_check(cyclic_polytope_boundary(4, 7), config=config)
        assert report.expected == [1, 3, 6]
        assert report.ranks == [1, 3, 6]
