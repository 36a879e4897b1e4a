"""Infinitesimal rigidity and generalized cusp deformations of hyperbolic 3-manifolds in SL(4, R).

Exact arithmetic over real number fields is the default; every routine also
accepts float data, in which case ranks are decided by a relative SVD tolerance.
"""

from .cohomology import Cocycle, h1, is_coboundary, rigidity_verdict
from .fpgroup import Presentation, parse_word, print_word
from .inputs import InputError, ManifoldInput, load_input
from .linalg import DEFAULT_RANK_TOL, Matrix
from .numfield import FieldElem, NumberField
from .pairing import classify_types, slice_coordinates, translemma_check, type1_criterion
from .rep import CuspShape, Representation, normalize_peripheral
from .slice import CuspKind, SlicePoint

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_RANK_TOL",
    "Cocycle",
    "CuspKind",
    "CuspShape",
    "FieldElem",
    "InputError",
    "ManifoldInput",
    "Matrix",
    "NumberField",
    "Presentation",
    "Representation",
    "SlicePoint",
    "classify_types",
    "h1",
    "is_coboundary",
    "load_input",
    "normalize_peripheral",
    "parse_word",
    "print_word",
    "rigidity_verdict",
    "slice_coordinates",
    "translemma_check",
    "type1_criterion",
]
