import os
import logging
from dataclasses import dataclass

from dotenv import load_dotenv
from sympy import isprime

load_dotenv()


@dataclass
class Configuration:
    seed: int = int(os.environ.get("FACERING_SEED", "0"))
    characteristic: int = int(os.environ.get("FACERING_CHAR", "2"))
    field_bits: int = int(os.environ.get("FACERING_FIELD_BITS", "20"))
    trials: int = int(os.environ.get("FACERING_TRIALS", "100"))
    budget: int = int(os.environ.get("FACERING_BUDGET", "10000"))
    output_format: str = os.environ.get("FACERING_FORMAT", "json")

    # Witness search
    witness_prime: int = int(os.environ.get("FACERING_WITNESS_PRIME", "2147483647"))
    max_witness_attempts: int = int(os.environ.get("FACERING_WITNESS_ATTEMPTS", "8"))
    target_error_log2: int = int(os.environ.get("FACERING_TARGET_ERROR_LOG2", "-40"))
    exact_fallback: bool = os.environ.get("FACERING_EXACT_FALLBACK", "true").lower() == "true"
    replacement_vector: str = os.environ.get("FACERING_REPLACEMENT", "fresh")

    # Cost guards
    oracle_max_vertices: int = int(os.environ.get("FACERING_ORACLE_MAX_VERTICES", "10"))
    walk_vertex_cap: int = int(os.environ.get("FACERING_WALK_VERTEX_CAP", "12"))

    # Annealing schedule for move reduction
    anneal_start: float = float(os.environ.get("FACERING_ANNEAL_START", "2.0"))
    anneal_end: float = float(os.environ.get("FACERING_ANNEAL_END", "0.01"))

    max_workers: int = int(os.environ.get("FACERING_MAX_WORKERS", "2"))
    log_level: str = os.environ.get("FACERING_LOG_LEVEL", "INFO")

    def validate(self) -> bool:
        """Validate configuration settings"""
        if self.characteristic != 0 and not isprime(self.characteristic):
            logger.error(f"❌ FACERING_CHAR must be 0 or a prime, got {self.characteristic}")
            return False
        if not isprime(self.witness_prime):
            logger.error(f"❌ FACERING_WITNESS_PRIME must be prime, got {self.witness_prime}")
            return False
        if self.field_bits < 8:
            logger.error("❌ FACERING_FIELD_BITS must be at least 8")
            return False
        if self.trials < 0 or self.budget < 0:
            logger.error("❌ trials and budget must be non-negative")
            return False
        if self.output_format not in ("json", "table"):
            logger.error(f"❌ Unknown output format: {self.output_format}")
            return False
        if self.replacement_vector not in ("fresh", "ones"):
            logger.error(f"❌ Unknown replacement vector strategy: {self.replacement_vector}")
            return False
        if not 0 < self.anneal_end <= self.anneal_start:
            logger.error("❌ Annealing temperatures must satisfy 0 < end <= start")
            return False
        if not isinstance(logging.getLevelName(self.log_level.upper()), int):
            logger.error(f"❌ Unknown log level: {self.log_level}")
            return False
        return True

    def apply_logging(self) -> None:
        logger.setLevel(self.log_level.upper())


# --- Logging setup ---
logger = logging.getLogger("facering")
_level = logging.getLevelName(Configuration.log_level.upper())
logger.setLevel(_level if isinstance(_level, int) else logging.INFO)

# Avoid adding multiple handlers if this file gets imported more than once
if not logger.handlers:
    handler = logging.StreamHandler()
    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )
    handler.setFormatter(formatter)
    logger.addHandler(handler)
