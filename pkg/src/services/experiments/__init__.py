from services.experiments.anisotropy import AnisotropyExperiment
from services.experiments.checks import CheckExperiment
from services.experiments.degree_argument import DegreeArgumentExperiment
from services.experiments.diffop import DiffopExperiment
from services.experiments.identities import IdentityExperiment
from services.experiments.lefschetz import LefschetzExperiment
from services.experiments.move_invariance import MoveInvarianceExperiment

__all__ = [
    "AnisotropyExperiment",
    "CheckExperiment",
    "DegreeArgumentExperiment",
    "DiffopExperiment",
    "IdentityExperiment",
    "LefschetzExperiment",
    "MoveInvarianceExperiment",
]
