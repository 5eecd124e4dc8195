"""Width-11 contraction sequences for embedded planar graphs."""

from .embedding import RotationSystem, make_triangulation, star_augment, trace_faces
from .engine import restrict_sequence, synthesize_planar
from .oracle import exact_twinwidth
from .trigraph import ContractionSequence, ContractionStep, Trigraph
from .verifier import replay

__all__ = [
    "ContractionSequence",
    "ContractionStep",
    "RotationSystem",
    "Trigraph",
    "exact_twinwidth",
    "make_triangulation",
    "replay",
    "restrict_sequence",
    "star_augment",
    "synthesize_planar",
    "trace_faces",
]
