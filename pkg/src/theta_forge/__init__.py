"""Exact Shapovalov elements, partition characters and Jantzen layers for small Lie superalgebras."""
from .errors import ThetaForgeError, VerificationFailure
from .rootdata import build_root_system, parse_algebra
from .pbw import algebra

__all__ = ["ThetaForgeError", "VerificationFailure", "build_root_system", "parse_algebra", "algebra"]
__version__ = "0.1.0"
