"""Inequality systems, reduction to canonical Sahlqvist form, first-order
correspondents and their semantic verification."""

from .catalogue import ROWS, Row, check_catalogue, check_row
from .correspondent import compute_correspondent, correspondent_of, guarded_translation
from .modelcheck import CheckResult, fo_model_check
from .rules import (RULES, Reduction, SequentReduction, Step, Trace, apply_rule,
                    is_canonical_form, reduce, reduce_sequent)
from .system import MODES, Cvc, Stb, System, system_valid, to_system
from .verify import check_rule_instances, verify_correspondence

__all__ = ["ROWS", "Row", "check_catalogue", "check_row", "compute_correspondent",
           "correspondent_of", "guarded_translation", "CheckResult", "fo_model_check", "RULES",
           "Reduction", "SequentReduction", "Step", "Trace", "apply_rule", "is_canonical_form",
           "reduce", "reduce_sequent", "MODES", "Cvc", "Stb", "System", "system_valid",
           "to_system", "check_rule_instances", "verify_correspondence"]
