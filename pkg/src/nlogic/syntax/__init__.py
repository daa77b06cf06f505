"""Object language, the sorted modal companion language and the frame language."""

from . import fo, modal, objects
from .modal import format_modal, parse_modal, translate
from .objects import Sequent, format_formula, parse_formula, parse_sequent

__all__ = ["fo", "modal", "objects", "format_modal", "parse_modal", "translate",
           "Sequent", "format_formula", "parse_formula", "parse_sequent"]
