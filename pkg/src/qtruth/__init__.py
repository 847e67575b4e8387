"""Projector-valued truth operators: logic calculus, quantization and spin scenarios."""
from .errors import QTruthError
from .hilbert import DEFAULT_TOL, Tolerances, is_projector
from .logic import (
    And, CoarseInterval, Elementary, Iff, Implies, MixedState, Not, Or, Xor,
    compile_statement, conditional_truth, is_tautology, meaningful,
)
from .stern_gerlach import SpinAxis, overlap_probability
from .epr import chsh, correlation, singlet

__all__ = [
    "QTruthError", "DEFAULT_TOL", "Tolerances", "is_projector",
    "And", "CoarseInterval", "Elementary", "Iff", "Implies", "MixedState", "Not", "Or", "Xor",
    "compile_statement", "conditional_truth", "is_tautology", "meaningful",
    "SpinAxis", "overlap_probability", "chsh", "correlation", "singlet",
]
__version__ = "0.1.0"
