"""Symbolic and numeric invariants of polynomial map germs at the origin."""

__version__ = "0.1.0"

from .boardman import BoardmanSymbol, SymbolStatus, boardman_symbol
from .errors import (
    GermConditionError,
    GermkitError,
    NonConvergenceError,
    ParseError,
    ResourceLimitError,
    StructuralError,
    UndefinedInvariantError,
)
from .equivlab import CorpusSpec, apply_contact_move, invariance_report, random_germ, random_move
from .germinv import MapGerm, identity_germ, load_germ
from .germparse import parse_germ_file, parse_polynomial, print_polynomial
from .polycore import Polynomial
from .puiseux import (
    NewtonPolygon,
    PuiseuxBranch,
    newton_polygon,
    puiseux_expansions,
    puiseux_pairs,
    topologically_equal,
)
from .tangentnum import lemma21_probe, theorem31_probe, unipotent_quadruple

__all__ = [
    "BoardmanSymbol",
    "CorpusSpec",
    "GermConditionError",
    "GermkitError",
    "MapGerm",
    "NewtonPolygon",
    "NonConvergenceError",
    "ParseError",
    "Polynomial",
    "PuiseuxBranch",
    "ResourceLimitError",
    "StructuralError",
    "SymbolStatus",
    "UndefinedInvariantError",
    "apply_contact_move",
    "boardman_symbol",
    "identity_germ",
    "invariance_report",
    "lemma21_probe",
    "load_germ",
    "newton_polygon",
    "parse_germ_file",
    "parse_polynomial",
    "print_polynomial",
    "puiseux_expansions",
    "puiseux_pairs",
    "random_germ",
    "random_move",
    "theorem31_probe",
    "topologically_equal",
    "unipotent_quadruple",
]
