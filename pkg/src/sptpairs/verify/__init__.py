"""Declarative identity registry and the engine that checks it."""
from .engine import (
    CONGRUENCES,
    DEPTH_CAP,
    MARGIN,
    PROFILES,
    CongruenceRow,
    VerificationReport,
    comparison_order,
    congruence_rows,
    congruence_scan,
    equal_class_evidence,
    report_schema,
    reports_from_json,
    reports_to_json,
    run_all,
    validate_reports,
    verify_spec,
    verify_theorem,
)
from .evaluate import EvaluationError, Evaluator, eta_quotient
from .registry import TheoremSpec, UnknownTheorem, load_registry, parse_registry, select
from .sexpr import RegistrySyntaxError, read_all

__all__ = [
    "CONGRUENCES", "DEPTH_CAP", "MARGIN", "PROFILES", "CongruenceRow", "EvaluationError",
    "Evaluator", "RegistrySyntaxError", "TheoremSpec", "UnknownTheorem", "VerificationReport",
    "comparison_order", "congruence_rows", "congruence_scan", "equal_class_evidence",
    "eta_quotient", "load_registry", "parse_registry", "read_all", "report_schema",
    "reports_from_json", "reports_to_json", "run_all", "select", "validate_reports",
    "verify_spec", "verify_theorem",
]
