"""Finite orthomodular lattices, the spectral presheaf and lattice-valued set models."""
from .oml import IMPLICATIONS, LatticeError, Oml, load_oml, verify_oml
from .fixtures import FIXTURES, fixture
from .contexts import ContextPoset, SizeLimitExceeded, enumerate_contexts
from .presheaf import ClopenSubobject, SpectralPresheaf
from .formulas import parse, to_text
from .qsets import Evaluator, LatticeAlgebra, LSet, SubclAlgebra, Universes
from .qreals import StepReal

__all__ = [
    "IMPLICATIONS", "LatticeError", "Oml", "load_oml", "verify_oml",
    "FIXTURES", "fixture",
    "ContextPoset", "SizeLimitExceeded", "enumerate_contexts",
    "ClopenSubobject", "SpectralPresheaf",
    "parse", "to_text",
    "Evaluator", "LatticeAlgebra", "LSet", "SubclAlgebra", "Universes",
    "StepReal",
]
