from typing import Any, Optional

from configuration.configuration import Configuration as Config, logger
from models.models import MoveInvarianceReport, MoveStep
from services.base_experiment import BaseExperiment
from services.complex import SimplicialComplex, fh_vectors
from services.experiments.anisotropy import aniso_char2_certificate
from services.moves import apply_move, random_walk


def move_invariance_experiment(
        K: SimplicialComplex,
        num_moves: int,
        seed: int = 0,
        config: Optional[Config] = None,
) -> MoveInvarianceReport:
    """Certify before and after every move of a seeded random walk."""
    config = config or Config()
    _, log = random_walk(K, num_moves, seed, vertex_cap=config.walk_vertex_cap)
    report = MoveInvarianceReport(start=K.hash, seed=seed)
    current = K
    for step, mv in enumerate([None] + log.moves):
        if mv is not None:
            current = apply_move(current, mv)
        certificate = aniso_char2_certificate(current, seed, config)
        report.steps.append(MoveStep(
            move=mv.to_dict() if mv else None,
            complex=current.hash,
            status=certificate.status,
            h=fh_vectors(current).h,
        ))
        logger.info(f"🔄 Step {step}: {certificate.status.value}")
    report.constant = len({s.status for s in report.steps}) == 1
    if not report.constant:
        logger.error("❌ Certificate status changed along the walk")
    return report


class MoveInvarianceExperiment(BaseExperiment):
    def __init__(self, config: Config):
        super().__init__("MoveInvarianceExperiment", config)

    def run(self, complex: SimplicialComplex, seed: int = 0, moves: int = 5, **_: Any):
        return move_invariance_experiment(complex, moves, seed, self.config)
