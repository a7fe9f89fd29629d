"""Exact computations with bound quiver algebras ``kQ/I``.

Paths compose left to right and modules are right modules.  The main
entry points are :func:`build_algebra`, :func:`hh0`, :func:`minimal_resolution`,
:func:`e_trace_module`, :func:`analyze` and the ``boundquiver`` command.
"""
from .algebra import AlgebraElement, BoundQuiverAlgebra, Idempotent, build_algebra, lambda_e
from .description import AlgebraDescription, parse, render
from .errors import (
    BoundQuiverError,
    FieldMismatch,
    HorizonNotReached,
    MalformedRelation,
    NonExactSequence,
    NotAdmissible,
    ParseError,
)
from .fixtures import fixture
from .hochschild import (
    e_trace_module,
    e_trace_projective,
    filtration_certificate,
    hh0,
    hs_trace,
    is_radical_trivial,
)
from .linalg import GF, QQ, Field
from .modules import FDModule, LambdaMatrix, ModuleHom, projective, simple
from .noloop import AnalysisOptions, analyze, consistency_audit
from .quiver import Path, PathVector, Quiver
from .resolution import minimal_resolution, projective_dimension

__version__ = "0.1.0"

__all__ = [
    "AlgebraDescription", "AlgebraElement", "AnalysisOptions", "BoundQuiverAlgebra",
    "BoundQuiverError", "FDModule", "Field", "FieldMismatch", "GF", "HorizonNotReached",
    "Idempotent", "LambdaMatrix", "MalformedRelation", "ModuleHom", "NonExactSequence",
    "NotAdmissible", "ParseError", "Path", "PathVector", "QQ", "Quiver", "analyze",
    "build_algebra", "consistency_audit", "e_trace_module", "e_trace_projective",
    "filtration_certificate", "fixture", "hh0", "hs_trace", "is_radical_trivial", "lambda_e",
    "minimal_resolution", "parse", "projective", "projective_dimension", "render", "simple",
]
