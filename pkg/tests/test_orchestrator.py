import asyncio

import pytest

from models.models import Certificate, CheckReport, LefschetzReport, Status
from services.corpus import cycle
from services.suite_orchestrator import SuiteOrchestrator, corpus_tasks, reproduce_tasks, verdict


class TestTaskLists:
    """Suites expand into experiment tasks."""

    def test_reproduce_all(self):
        ids = [task["id"] for task in reproduce_tasks("all")]
        assert ids == ["identities", "diffop:n=2,q=1", "degree:octahedron"]

    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            reproduce_tasks("everything")

    def test_corpus(self):
        tasks = corpus_tasks(seed=0, stacked_count=2, walk_seeds=1, lefschetz_points=1, algebra_trials=5)
        ids = [task["id"] for task in tasks]
        assert "dimensions:boundary-simplex-2" in ids
        assert "oracle:cross-polytope-4" in ids
        assert "oracle:cyclic-4-7" in ids
        assert "certificate:cross-polytope-4" in ids
        assert "certificate:boundary-simplex-6" not in ids
        assert "certificate:boundary-simplex-1" in ids
        assert "duality:cyclic-4-7" in ids
        assert "duality:cross-polytope-1" in ids
        assert "duality:boundary-simplex-5" not in ids
        assert "lefschetz:stacked-3-0" in ids
        assert "moves:cyclic-4-7:seed=0" in ids
        assert ids[-1] == "algebra"


class TestVerdict:
    """Report to passed / failed / inconclusive."""

    def test_inconclusive_certificate(self, config):
        cert = Certificate(complex="x", degree=1, status=Status.INCONCLUSIVE)
        assert verdict(cert, config) == "inconclusive"

    def test_lefschetz(self, config):
        assert verdict(LefschetzReport(complex="x", char=2, seed=0, verdict="holds"), config) == "passed"
        assert verdict(LefschetzReport(complex="x", char=2, seed=0), config) == "inconclusive"

    def test_check(self, config):
        assert verdict(CheckReport(check="algebra", passed=False), config) == "failed"


class TestSuiteOrchestrator:
    """Worker pool runs tasks and summarizes in order."""

    def test_run(self, config):
        tasks = [
            {"id": "algebra", "experiment": "check", "args": {"check": "algebra", "trials": 5}},
            {"id": "dimensions:cycle-5", "experiment": "check",
             "args": {"check": "dimensions", "complex": cycle(5)}},
            {"id": "certificate:cycle-4", "experiment": "aniso", "args": {"complex": cycle(4)}},
        ]
        orchestrator = SuiteOrchestrator(config)
        summary = asyncio.run(orchestrator.run(tasks))
        assert [e.name for e in summary.entries] == [t["id"] for t in tasks]
        assert summary.passed == 3
        assert summary.failed == 0
        assert orchestrator.get_system_stats()["queue_status"]["is_running"] is False

    def test_errors_become_failures(self, config, projective_plane):
        tasks = [{"id": "certificate:rp2", "experiment": "aniso", "args": {"complex": projective_plane}}]
        summary = asyncio.run(SuiteOrchestrator(config).run(tasks))
        assert summary.failed == 1
        assert "homology sphere" in summary.entries[0].detail["message"]
