import pytest

from models.errors import (
    DimensionOutOfRange,
    EmptyInput,
    FaceNotInComplex,
    NonOrientable,
    NotPure,
    VertexClash,
    VertexOutOfRange,
)
from services.complex import (
    SimplicialComplex,
    boundary_complex,
    build_from_facets,
    compact,
    cone,
    empty_face_complex,
    faces_of_dim,
    fh_vectors,
    homology_ranks,
    is_boundary_simplex,
    is_homology_ball,
    is_homology_sphere,
    join,
    link,
    make_face,
    orient,
    relabel,
    star,
    suspension,
)
from services.corpus import acceptance_corpus, cycle, cyclic_polytope_boundary
from utils.utils import make_rng


class TestConstruction:
    """Validated construction and face enumeration."""

    def test_non_maximal_faces_are_dropped(self):
        K = build_from_facets(3, [[1, 2, 3], [1, 2], [3]])
        assert K.facets == frozenset({(1, 2, 3)})

    def test_empty_input_is_rejected(self):
        with pytest.raises(EmptyInput):
            build_from_facets(3, [])
        with pytest.raises(EmptyInput):
            build_from_facets(3, [[]])

    def test_vertex_out_of_range(self):
        with pytest.raises(VertexOutOfRange):
            build_from_facets(3, [[1, 4]])

    def test_repeated_vertex(self):
        with pytest.raises(ValueError):
            make_face([1, 1, 2])

    def test_faces_of_dim(self, square):
        assert faces_of_dim(square, -1) == [()]
        assert faces_of_dim(square, 0) == [(1,), (2,), (3,), (4,)]
        with pytest.raises(DimensionOutOfRange):
            faces_of_dim(square, 2)

    def test_hash_ignores_facet_order(self):
        first = build_from_facets(3, [[1, 2], [2, 3]])
        second = build_from_facets(3, [[3, 2], [2, 1]])
        assert first.hash == second.hash
        assert first == second


class TestFaceNumbers:
    """f- and h-vectors on the corpus."""

    def test_octahedron(self, octahedron):
        fh = fh_vectors(octahedron)
        assert fh.f == (6, 12, 8)
        assert fh.h == (1, 3, 3, 1)

    def test_tetrahedron(self, tetrahedron):
        assert fh_vectors(tetrahedron).h == (1, 1, 1, 1)

    def test_cyclic_polytope(self):
        fh = fh_vectors(cyclic_polytope_boundary(4, 7))
        assert fh.f == (7, 21, 28, 14)
        assert fh.h == (1, 3, 6, 3, 1)

    def test_pentagon(self):
        assert fh_vectors(cycle(5)).h == (1, 3, 1)

    def test_point(self):
        fh = fh_vectors(build_from_facets(1, [[1]]))
        assert fh.f == (1,)
        assert fh.h == (1, 0)

    def test_impure_complex(self):
        with pytest.raises(NotPure):
            fh_vectors(build_from_facets(3, [[1, 2], [3]]))

    def test_euler_relation_on_corpus(self):
        for name, K in acceptance_corpus(seed=0, stacked_count=3).items():
            fh = fh_vectors(K)
            d = K.dim + 1
            assert -1 + sum((-1) ** i * f for i, f in enumerate(fh.f)) == (-1) ** (d - 1), name
            assert fh.h == fh.h[::-1], name
            assert fh.h[0] == 1 and sum(fh.h) == len(K.facets), name


class TestLinksAndJoins:
    """Links, stars, joins, cones and suspensions."""

    def test_vertex_link_of_octahedron(self, octahedron):
        lk = link(octahedron, [1])
        assert lk.ambient() == build_from_facets(6, [[3, 5], [3, 6], [4, 5], [4, 6]])
        assert lk.m == 4

    def test_link_of_facet_is_empty_face(self, tetrahedron):
        assert link(tetrahedron, [1, 2, 3]) == empty_face_complex()

    def test_link_of_missing_face(self, octahedron):
        with pytest.raises(FaceNotInComplex):
            link(octahedron, [1, 2])

    def test_star_keeps_labels(self, square):
        st = star(square, [1])
        assert st.ambient() == build_from_facets(4, [[1, 2], [1, 4]])

    def test_join_needs_disjoint_vertices(self, square):
        with pytest.raises(VertexClash):
            join(square, square)

    def test_suspension_of_square_is_octahedron(self, square):
        K, apices = suspension(square)
        assert apices == (5, 6)
        assert fh_vectors(K).h == (1, 3, 3, 1)
        assert is_homology_sphere(K, 2)

    def test_cone_is_a_ball(self, square):
        K, apex = cone(square)
        assert apex == 5
        assert is_homology_ball(K, 2)
        assert not is_homology_sphere(K, 2)
        assert boundary_complex(K) == square

    @pytest.mark.parametrize("name", ["cross-polytope-3", "cyclic-4-7", "stacked-3-2"])
    def test_link_of_a_link(self, name):
        K = acceptance_corpus(seed=0, stacked_count=3)[name]
        for sigma in faces_of_dim(K, 0) + faces_of_dim(K, 1):
            outer = link(K, sigma)
            for tau in faces_of_dim(outer, 0):
                inner = link(outer, tau).ambient()
                union = set(sigma) | {outer.labels[v - 1] for v in tau}
                assert inner == link(K, sorted(union)).ambient()


class TestHomology:
    """Reduced homology and sphere recognition."""

    def test_circle(self, square):
        assert homology_ranks(square, 2) == (0, 1)

    def test_spheres(self, octahedron, tetrahedron):
        for p in (0, 2, 3):
            assert is_homology_sphere(octahedron, p)
            assert is_homology_sphere(tetrahedron, p)

    def test_projective_plane_is_not_a_sphere(self, projective_plane):
        assert homology_ranks(projective_plane, 2) == (0, 1, 1)
        assert homology_ranks(projective_plane, 3) == (0, 0, 0)
        assert not is_homology_sphere(projective_plane, 2)
        assert not is_homology_sphere(projective_plane, 3)

    def test_boundary_simplex_recognition(self, tetrahedron, octahedron):
        assert is_boundary_simplex(tetrahedron)
        assert not is_boundary_simplex(octahedron)


class TestOrientation:
    """Coherent facet signs."""

    def test_root_gets_root_sign(self, octahedron):
        oriented = orient(octahedron, root=[2, 4, 6], root_sign=-1)
        assert oriented.sign[(2, 4, 6)] == -1
        assert oriented.is_coherent()

    def test_every_facet_signed(self, octahedron):
        oriented = orient(octahedron)
        assert set(oriented.sign) == octahedron.facets
        assert oriented.root == (1, 3, 5)

    def test_adjacent_tetrahedron_facets(self, tetrahedron):
        sign = orient(tetrahedron).sign
        # sorted vertex order alternates on the boundary of a simplex
        assert sign[(1, 2, 3)] == -sign[(1, 2, 4)]
        assert sign[(1, 2, 4)] == -sign[(1, 3, 4)]

    def test_projective_plane_is_not_orientable(self, projective_plane):
        with pytest.raises(NonOrientable):
            orient(projective_plane)


class TestRelabeling:
    """Relabeling and compaction."""

    def test_compact(self):
        K = SimplicialComplex(6, [[1, 3], [3, 6], [1, 6]])
        compacted, mapping = compact(K)
        assert mapping == {1: 1, 3: 2, 6: 3}
        assert compacted == build_from_facets(3, [[1, 2], [2, 3], [1, 3]])

    @pytest.mark.parametrize("name", ["cross-polytope-3", "cyclic-4-7", "stacked-3-2"])
    def test_orientation_survives_relabel(self, name):
        K = acceptance_corpus(seed=0, stacked_count=3)[name]
        permuted = [int(v) + 1 for v in make_rng(7).permutation(K.m)]
        mapping = {v: permuted[v - 1] for v in range(1, K.m + 1)}
        before = orient(K).sign
        after = orient(relabel(K, mapping))
        assert after.is_coherent()
        ratios = set()
        for facet, sign in before.items():
            image = [mapping[v] for v in facet]
            inversions = sum(1 for a in range(len(image)) for b in range(a + 1, len(image)) if image[a] > image[b])
            ratios.add(after.sign[tuple(sorted(image))] * sign * (-1) ** inversions)
        assert len(ratios) == 1
