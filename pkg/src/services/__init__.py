from .base_experiment import BaseExperiment
from .memory import MemoTable, PsiMemory
from .toolkit_service import ToolkitService

__all__ = [
    "BaseExperiment",
    "MemoTable",
    "PsiMemory",
    "ToolkitService",
]
