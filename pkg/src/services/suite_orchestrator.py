import asyncio
import time
from typing import Any, Dict, List

from configuration.configuration import Configuration as Config, logger
from models.models import (
    Certificate,
    CheckReport,
    DegreeArgumentReport,
    DiffopReport,
    IdentityReport,
    LefschetzReport,
    MoveInvarianceReport,
    Record,
    Status,
    SuiteEntry,
    SuiteSummary,
)
from services.corpus import acceptance_corpus, cross_polytope, cyclic_polytope_boundary, move_fixture
from services.experiments import (
    AnisotropyExperiment,
    CheckExperiment,
    DegreeArgumentExperiment,
    DiffopExperiment,
    IdentityExperiment,
    LefschetzExperiment,
    MoveInvarianceExperiment,
)
from services.experiments.anisotropy import verify_certificate

SUITES = ("identities", "diffop", "degree", "all")
ORACLE_MAX_M = 8
CERTIFY_MAX_M = 10
CERTIFY_MAX_D = 5


def verdict(report: Record, config: Config, complex_=None) -> str:
    """passed / failed / inconclusive for one finished report."""
    if isinstance(report, Certificate):
        if report.status == Status.INCONCLUSIVE:
            return "inconclusive"
        ok = report.status == Status.ANISOTROPIC and verify_certificate(complex_, report, config)
        return "passed" if ok else "failed"
    if isinstance(report, LefschetzReport):
        return "passed" if report.verdict == "holds" else "inconclusive"
    if isinstance(report, MoveInvarianceReport):
        ok = report.constant and all(s.status == Status.ANISOTROPIC for s in report.steps)
        return "passed" if ok else "failed"
    if isinstance(report, DiffopReport):
        return "passed" if report.fact_c and report.distinguished_nonzero and report.others_vanish else "failed"
    if isinstance(report, (DegreeArgumentReport, IdentityReport, CheckReport)):
        passed = report.passed and getattr(report, "cone_isomorphism", True) is not False
        return "passed" if passed else "failed"
    return "failed"


class SuiteOrchestrator:
    """
    Runs acceptance tasks on a small asyncio worker pool.
    Each task names an experiment and its arguments; results become SuiteEntry rows.
    """

    def __init__(self, config: Config):
        self.config = config
        self.task_queue: asyncio.Queue = asyncio.Queue()
        self.experiments = {
            "aniso": AnisotropyExperiment(config),
            "check": CheckExperiment(config),
            "degree": DegreeArgumentExperiment(config),
            "diffop": DiffopExperiment(config),
            "identities": IdentityExperiment(config),
            "lefschetz": LefschetzExperiment(config),
            "moves": MoveInvarianceExperiment(config),
        }
        self.workers: List[asyncio.Task] = []
        self.is_running = False
        self.entries: List[SuiteEntry] = []
        self.stats = {
            "tasks_processed": 0,
            "passed": 0,
            "failed": 0,
            "inconclusive": 0,
            "total_processing_time": 0.0,
        }
        logger.info("✅ SuiteOrchestrator initialized")

    async def add_task(self, task: Dict[str, Any]):
        await self.task_queue.put(task)
        logger.debug(f"📋 Task queued: {task['id']} ({task['experiment']})")

    async def worker(self, worker_id: int):
        logger.info(f"🔧 Worker-{worker_id} started")
        while True:
            task = await self.task_queue.get()
            if task is None:
                self.task_queue.task_done()
                logger.info(f"🔧 Worker-{worker_id} shutting down")
                break
            try:
                await self.run_task(task)
            except Exception as e:
                self._record(task, "failed", 0.0, {"message": str(e)})
                logger.exception(f"❌ Worker-{worker_id} error on task {task['id']}: {e}")
            finally:
                self.task_queue.task_done()

    async def run_task(self, task: Dict[str, Any]) -> SuiteEntry:
        start = time.perf_counter()
        experiment = self.experiments[task["experiment"]]
        result = await experiment.process(task.get("args", {}))
        seconds = time.perf_counter() - start
        if result["status"] == "success":
            report = result["report"]
            status = await asyncio.to_thread(verdict, report, self.config, task.get("args", {}).get("complex"))
            detail = report.to_dict()
        else:
            status = "inconclusive" if result["status"] == "inconclusive" else "failed"
            detail = {"message": result.get("message", "")}
        return self._record(task, status, seconds, detail)

    def _record(self, task: Dict[str, Any], status: str, seconds: float, detail: Dict[str, Any]) -> SuiteEntry:
        entry = SuiteEntry(name=task["id"], check=task["experiment"], status=status, seconds=round(seconds, 3),
                           detail=detail)
        self.entries.append(entry)
        self.stats["tasks_processed"] += 1
        self.stats[status] += 1
        self.stats["total_processing_time"] += seconds
        icon = {"passed": "✅", "failed": "❌", "inconclusive": "⚠️"}[status]
        logger.info(f"{icon} {task['id']}: {status} in {seconds:.1f}s")
        return entry

    async def start(self):
        if self.is_running:
            logger.warning("⚠️ Orchestrator already running")
            return self.workers
        logger.info(f"🚀 Starting SuiteOrchestrator with {self.config.max_workers} workers")
        self.is_running = True
        self.workers = [asyncio.create_task(self.worker(i)) for i in range(self.config.max_workers)]
        return self.workers

    async def shutdown(self):
        if not self.is_running:
            return
        self.is_running = False
        for _ in self.workers:
            await self.task_queue.put(None)
        await asyncio.gather(*self.workers, return_exceptions=True)
        logger.info("📊 Final Statistics:")
        logger.info(f"   Tasks Processed: {self.stats['tasks_processed']}")
        logger.info(f"   Passed: {self.stats['passed']}")
        logger.info(f"   Failed: {self.stats['failed']}")
        logger.info(f"   Inconclusive: {self.stats['inconclusive']}")
        logger.info(f"   Total Processing Time: {self.stats['total_processing_time']:.1f}s")

    async def run(self, tasks: List[Dict[str, Any]]) -> SuiteSummary:
        """Queue every task, wait for the pool to drain, and summarize in task order."""
        await self.start()
        for task in tasks:
            await self.add_task(task)
        await self.task_queue.join()
        await self.shutdown()
        order = {task["id"]: k for k, task in enumerate(tasks)}
        entries = sorted(self.entries, key=lambda e: order.get(e.name, len(order)))
        return SuiteSummary(entries=entries, passed=self.stats["passed"], failed=self.stats["failed"],
                            inconclusive=self.stats["inconclusive"])

    def get_system_stats(self) -> Dict[str, Any]:
        return {
            "orchestrator_stats": self.stats,
            "experiment_status": {name: exp.status for name, exp in self.experiments.items()},
            "queue_status": {
                "pending_tasks": self.task_queue.qsize(),
                "active_workers": len([w for w in self.workers if not w.done()]),
                "is_running": self.is_running,
            },
        }


# ----------------------------------------------------------------------
# Task lists
# ----------------------------------------------------------------------
def reproduce_tasks(suite: str, seed: int = 0) -> List[Dict[str, Any]]:
    if suite not in SUITES:
        raise ValueError(f"Unknown suite: {suite}")
    tasks = []
    if suite in ("identities", "all"):
        tasks.append({"id": "identities", "experiment": "identities", "args": {"seed": seed}})
    if suite in ("diffop", "all"):
        delta, move = move_fixture()
        tasks.append({"id": "diffop:n=2,q=1", "experiment": "diffop",
                      "args": {"complex": delta, "n": 2, "q": 1, "move": move, "seed": seed}})
    if suite in ("degree", "all"):
        tasks.append({"id": "degree:octahedron", "experiment": "degree",
                      "args": {"complex": cross_polytope(3), "seed": seed}})
    return tasks


def corpus_tasks(seed: int = 0, stacked_count: int = 10, walk_seeds: int = 5,
                 lefschetz_points: int = 5, algebra_trials: int = 1000) -> List[Dict[str, Any]]:
    """The full acceptance run over the corpus."""
    corpus = acceptance_corpus(seed, stacked_count)
    tasks: List[Dict[str, Any]] = []
    for name, K in corpus.items():
        m, d = len(K.vertices), K.dim + 1
        tasks.append({"id": f"dimensions:{name}", "experiment": "check",
                      "args": {"check": "dimensions", "complex": K, "seed": seed}})
        if m <= ORACLE_MAX_M:
            tasks.append({"id": f"oracle:{name}", "experiment": "check",
                          "args": {"check": "oracle", "complex": K, "seed": seed}})
        if m <= CERTIFY_MAX_M and d <= CERTIFY_MAX_D:
            tasks.append({"id": f"certificate:{name}", "experiment": "aniso", "args": {"complex": K, "seed": seed}})
        if m + 1 <= CERTIFY_MAX_M and d + 1 <= CERTIFY_MAX_D:
            tasks.append({"id": f"duality:{name}", "experiment": "check",
                          "args": {"check": "duality", "complex": K, "seed": seed}})
        if d == 3:
            tasks.append({"id": f"lefschetz:{name}", "experiment": "lefschetz",
                          "args": {"complex": K, "seed": seed, "points": lefschetz_points}})
    for name, K in (("octahedron", cross_polytope(3)), ("cyclic-4-7", cyclic_polytope_boundary(4, 7))):
        for walk_seed in range(walk_seeds):
            tasks.append({"id": f"moves:{name}:seed={walk_seed}", "experiment": "moves",
                          "args": {"complex": K, "seed": walk_seed, "moves": 5}})
    tasks.extend(reproduce_tasks("all", seed))
    tasks.append({"id": "algebra", "experiment": "check",
                  "args": {"check": "algebra", "seed": seed, "trials": algebra_trials}})
    return tasks
