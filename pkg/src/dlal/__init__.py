"""DLAL type inference for Church-style System F terms.

``infer`` runs the whole pipeline: free decoration, constraint
generation, boolean saturation, exact linear optimization, and a check
of the witness by an independent well-structuredness checker.
"""

from .fsyntax import parse_term, parse_type, print_term, print_type, typecheck_f
from .dlal_types import print_dtype, parse_dtype
from .pipeline import InferenceReport, Options, infer
from .verify import check_well_structured

__all__ = [
    "InferenceReport",
    "Options",
    "check_well_structured",
    "infer",
    "parse_dtype",
    "parse_term",
    "parse_type",
    "print_dtype",
    "print_term",
    "print_type",
    "typecheck_f",
]
