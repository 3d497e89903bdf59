"""Ontology-driven construction of semantically consistent WSML axioms."""

from .axiom import AxiomGraph, validate_complete, validate_structural
from .engine import Binding, Command, EditEngine, Rejection
from .parser import parse_ontology, validate_expression_text
from .persist import load_axiom, save_axiom
from .script import ScriptError, run_script
from .store import OntologyStore
from .textgen import GeneratedExpression, generate

__all__ = [
    "AxiomGraph",
    "Binding",
    "Command",
    "EditEngine",
    "GeneratedExpression",
    "OntologyStore",
    "Rejection",
    "ScriptError",
    "generate",
    "load_axiom",
    "parse_ontology",
    "run_script",
    "save_axiom",
    "validate_complete",
    "validate_expression_text",
    "validate_structural",
]
