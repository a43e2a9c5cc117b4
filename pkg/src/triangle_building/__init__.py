"""Triangle presentations, the groups they define, and the boundary of the
associated triangle building."""

from .group_words import IDENTITY, NormalForm, multiply, reduce
from .labels import ChamberLabel, a_minus, a_plus, alphabet
from .presentation import TrianglePresentation, canonical, canonical_q2, canonical_q3, verify
from .projective_plane import ProjectivePlane, build_plane

__all__ = [
    "IDENTITY", "NormalForm", "multiply", "reduce", "ChamberLabel", "a_minus", "a_plus",
    "alphabet", "TrianglePresentation", "canonical", "canonical_q2", "canonical_q3",
    "verify", "ProjectivePlane", "build_plane",
]

__version__ = "0.1.0"
