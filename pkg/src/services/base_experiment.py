import asyncio
from typing import Any, Dict

from configuration.configuration import Configuration as Config, logger
from models.errors import FaceRingError, NotHomologySphere, WitnessSearchFailed
from models.models import Record
from services.complex import SimplicialComplex, is_homology_sphere, orient
from services.lsop import normalized_lsop
from services.reduction import PsiContext


class BaseExperiment:
    """Common shape of the certification experiments.

    Subclasses implement ``run``; ``process`` is the task-dict entry point used
    by the suite orchestrator and returns a status dict instead of raising.
    """

    def __init__(self, name: str, config: Config):
        self.name = name
        self.config = config
        self.status = "idle"

    def update_status(self, status: str):
        self.status = status

    def run(self, **task: Any) -> Record:
        raise NotImplementedError

    async def process(self, task: Dict[str, Any]) -> Dict[str, Any]:
        self.update_status("processing")
        logger.info(f"🔍 {self.name} starting")
        try:
            report = await asyncio.to_thread(self.run, **task)
        except WitnessSearchFailed as e:
            self.update_status("inconclusive")
            logger.warning(f"⚠️ {self.name} inconclusive: {e}")
            return {"status": "inconclusive", "message": str(e)}
        except FaceRingError as e:
            self.update_status("error")
            logger.error(f"❌ {self.name} failed: {e}")
            return {"status": "error", "message": str(e)}
        self.update_status("completed")
        logger.info(f"✅ {self.name} finished")
        return {"status": "success", "report": report}


def basis_options(config: Config) -> Dict[str, Any]:
    """Witness-search settings passed to ``select_basis``."""
    return {
        "attempts": config.max_witness_attempts,
        "field_bits": config.field_bits,
        "witness_prime": config.witness_prime,
    }


def sphere_context(K: SimplicialComplex, characteristic: int, config: Config, pin=None) -> PsiContext:
    """Ψ context on the normalized l.s.o.p. after checking K is a homology sphere."""
    if not is_homology_sphere(K, characteristic):
        raise NotHomologySphere(f"Complex {K.hash[:12]} is not a homology sphere over characteristic {characteristic}")
    lsop = normalized_lsop(K, characteristic, pin=pin)
    return PsiContext(orient(K), lsop, check=False, strategy=config.replacement_vector)
