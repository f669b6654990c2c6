"""Generic nominally-typed OOP: signatures, full generification, interval
subtyping and raw-type modeling."""

__version__ = "0.1.0"

from .erasure import RawModel, apply_raw_model, model_raw_type
from .errors import GenoopError, MiniGenSyntaxError
from .generify import GenerifiedClassDecl, capture_plan, generify, recover_instantiation
from .graph import SubtypeGraph, build_graph, check_self_similarity, emit_dot
from .parser import parse_class, parse_program, parse_type, render
from .signatures import (
    GenerifiedSignatureConstructor,
    NominalInterval,
    SignatureConstructor,
    build_signature,
    check_interval,
    check_noncircularity,
    check_single_nesting,
    instantiate,
)
from .subtyping import contains, derive, is_subtype, supertype_chain
from .table import ClassTable
from .terms import BOTTOM, TOP, App, Var, Wildcard

__all__ = [
    "BOTTOM", "TOP", "App", "ClassTable", "GenerifiedClassDecl",
    "GenerifiedSignatureConstructor", "GenoopError", "MiniGenSyntaxError",
    "NominalInterval", "RawModel", "SignatureConstructor", "SubtypeGraph", "Var",
    "Wildcard", "apply_raw_model", "build_graph", "build_signature", "capture_plan",
    "check_interval", "check_noncircularity", "check_self_similarity",
    "check_single_nesting", "contains", "derive", "emit_dot", "generify",
    "instantiate", "is_subtype", "model_raw_type", "parse_class", "parse_program",
    "parse_type", "recover_instantiation", "render", "supertype_chain",
]
