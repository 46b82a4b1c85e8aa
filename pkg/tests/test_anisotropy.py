import asyncio

import pytest

from models.errors import NotHomologySphere, WrongCharacteristic
from models.models import Certificate, Status
from services.algebra import B, PolyContext
from services.corpus import acceptance_corpus, boundary_simplex, cycle, cyclic_polytope_boundary
from services.experiments.anisotropy import (
    AnisotropyExperiment,
    aniso_char2_certificate,
    aniso_random_probe,
    isotropic,
    middle_degrees,
    planned_trials,
    verify_certificate,
)
from utils.utils import dump_json


class TestHelpers:
    """Degree split, trial planning and the isotropy test."""

    def test_middle_degrees(self):
        assert middle_degrees(4) == (2, 0)
        assert middle_degrees(5) == (2, 1)

    def test_planned_trials(self):
        ring = PolyContext([B(1)], 2).ring
        b = ring.gens[0]
        trials, bound = planned_trials([[b ** 2, ring.one], [ring.one, b]], 20, -40, 100)
        assert trials == 3
        assert bound == -54

    def test_small_field_has_no_guarantee(self):
        ring = PolyContext([B(1)], 2).ring
        b = ring.gens[0]
        assert planned_trials([[b ** 30]], 4, -40, 7) == (7, 0)

    def test_isotropic(self):
        assert isotropic([[1], [-1]], [1, 1])
        assert not isotropic([[1], [1]], [1, 2])


class TestCertificate:
    """Exact characteristic-2 certificates."""

    def test_tetrahedron(self, tetrahedron, config):
        cert = aniso_char2_certificate(tetrahedron, seed=0, config=config)
        assert cert.status == Status.ANISOTROPIC
        assert cert.degree == 1
        assert len(cert.basis) == 1 and len(cert.multipliers) == 1
        assert cert.error_bound_log2 <= config.target_error_log2
        assert verify_certificate(tetrahedron, cert, config)

    def test_even_dimension_uses_the_unit_multiplier(self, square, config):
        cert = aniso_char2_certificate(square, seed=0, config=config)
        assert cert.status == Status.ANISOTROPIC
        assert cert.multipliers == [[]]
        assert len(cert.basis) == 2
        assert verify_certificate(square, cert, config)

    def test_zero_sphere(self, config):
        points = boundary_simplex(1)
        cert = aniso_char2_certificate(points, seed=0, config=config)
        assert cert.status == Status.ANISOTROPIC
        assert cert.degree == 0
        assert cert.basis == [[]]
        assert cert.multipliers == [[1]]
        assert verify_certificate(points, cert, config)

    def test_seeded(self, square, config):
        first = aniso_char2_certificate(square, seed=4, config=config)
        second = aniso_char2_certificate(square, seed=4, config=config)
        assert first.witness == second.witness

    def test_same_seed_gives_identical_bytes(self, config):
        K = acceptance_corpus(seed=0, stacked_count=1)["stacked-3-0"]
        first = dump_json(aniso_char2_certificate(K, seed=9, config=config).to_dict())
        second = dump_json(aniso_char2_certificate(K, seed=9, config=config).to_dict())
        assert first == second

    def test_text_round_trip_still_verifies(self, square, config):
        cert = aniso_char2_certificate(square, seed=0, config=config)
        restored = Certificate.model_validate(cert.to_dict())
        assert verify_certificate(square, restored, config)

    def test_tampered_witness_fails(self, square, config):
        cert = aniso_char2_certificate(square, seed=0, config=config)
        cert.witness["minor"] = cert.witness["minor"] ^ 1
        assert not verify_certificate(square, cert, config)

    def test_wrong_complex_fails(self, square, config):
        cert = aniso_char2_certificate(square, seed=0, config=config)
        assert not verify_certificate(cycle(5), cert, config)

    def test_odd_characteristic_is_refused(self, tetrahedron, config):
        with pytest.raises(WrongCharacteristic):
            aniso_char2_certificate(tetrahedron, config=config, characteristic=3)

    def test_projective_plane_is_refused(self, projective_plane, config):
        with pytest.raises(NotHomologySphere):
            aniso_char2_certificate(projective_plane, config=config)

    @pytest.mark.slow
    def test_octahedron(self, octahedron, config):
        cert = aniso_char2_certificate(octahedron, seed=0, config=config)
        assert cert.status == Status.ANISOTROPIC
        assert len(cert.basis) == 3
        assert verify_certificate(octahedron, cert, config)

    @pytest.mark.slow
    def test_cyclic_polytope_with_eight_vertices(self, config):
        K = cyclic_polytope_boundary(4, 8)
        cert = aniso_char2_certificate(K, seed=0, config=config)
        assert cert.status == Status.ANISOTROPIC
        assert cert.degree == 2
        assert len(cert.basis) == 10
        assert verify_certificate(K, cert, config)


class TestProbe:
    """Random probes in any characteristic."""

    def test_no_counterexample_on_a_simplex_boundary(self, tetrahedron, config):
        report = aniso_random_probe(tetrahedron, 3, trials=5, seed=0, config=config)
        assert report.status == Status.INCONCLUSIVE
        assert report.counterexample is None
        assert report.message == "no counterexample in 5 trials"

    def test_zero_trials(self, tetrahedron, config):
        report = aniso_random_probe(tetrahedron, 3, trials=0, config=config)
        assert report.status == Status.INCONCLUSIVE
        assert report.message == "no trials requested"

    def test_projective_plane_in_characteristic_three(self, projective_plane, config):
        with pytest.raises(NotHomologySphere):
            aniso_random_probe(projective_plane, 3, trials=1, config=config)


class TestAnisotropyExperiment:
    """Task entry point."""

    def test_process_reports_errors(self, projective_plane, config):
        result = asyncio.run(AnisotropyExperiment(config).process({"complex": projective_plane}))
        assert result["status"] == "error"

    def test_probe_mode(self, tetrahedron, config):
        report = AnisotropyExperiment(config).run(tetrahedron, mode="probe", characteristic=5, trials=2)
        assert report.char == 5
