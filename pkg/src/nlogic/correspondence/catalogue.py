"""Known correspondents for the Lambek structural rules.

Each sequent row names a sequent, the (mode, translation) pair that reduces
it, and the expected first-order condition written in the parser's ASCII
syntax with readable variable names.  A row matches when the computed
correspondent and the expected formula have the same normal form.

Residuation and the unit law are frame axioms rather than sequents; their
rows carry a formula builder instead, checked semantically against the
axiom checker on sampled frames.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..syntax import fo
from ..syntax.objects import parse_sequent
from .correspondent import correspondent_of
from .rules import SequentReduction


def res_formula() -> fo.FO:
    """The residuation axiom: x ∈ (Svz)' iff v ∈ (Rxz)' iff z ∈ (Txv)'."""
    return fo.parse_fo("forall x z v. ((S'(x,v,z) <-> R'(v,x,z)) & (R'(v,x,z) <-> T'(z,x,v)))")


def unit_formula() -> fo.FO:
    """The unit law: x and v are unlinked iff every unit point lies in (Txv)'."""
    return fo.parse_fo("forall x v. (~I(x,v) <-> forall u. (U(u) -> T'(u,x,v)))")


@dataclass(frozen=True)
class Row:
    name: str
    expected: str
    sequent: str | None = None
    mode: str = "auto"
    translation: str = "auto"
    frame_class: str = "LK_*"
    builder: Callable[[], fo.FO] | None = None
    axiom: str | None = None  # axiom checker a template row is compared with

    @property
    def is_template(self) -> bool:
        return self.sequent is None


ROWS: tuple[Row, ...] = (
    Row("residuation", "forall x z v. ((S'(x,v,z) <-> R'(v,x,z)) & (R'(v,x,z) <-> T'(z,x,v)))",
        builder=res_formula, axiom="RES"),
    Row("unit", "forall x v. (~I(x,v) <-> forall u. (U(u) -> T'(u,x,v)))",
        builder=unit_formula, axiom="U"),
    Row("left unit elimination", "forall x u z. (U(u) & R(x,u,z) -> z <= x)", "t * p |- p"),
    Row("right unit elimination", "forall x z u. (U(u) & R(x,z,u) -> z <= x)", "p * t |- p"),
    Row("left unit introduction", "forall x. exists u. (U(u) & R(x,u,x))", "p |- t * p"),
    Row("right unit introduction", "forall x. exists u. (U(u) & R(x,x,u))", "p |- p * t"),
    Row("unit implication introduction", "forall y x v. (U(x) & T(y,x,v) -> v <= y)",
        "p |- t -> p", mode="cotranslate", translation="diamond"),
    Row("unit left implication introduction", "forall y v x. (U(x) & S(y,v,x) -> v <= y)",
        "p |- p <- t", mode="cotranslate", translation="diamond"),
    Row("unit implication elimination", "forall y. exists x. (U(x) & T(y,x,y))",
        "t -> p |- p", mode="cotranslate", translation="diamond"),
    Row("association", "forall x z1 z2 z3. ((exists u. (R(x,z1,u) & R(u,z2,z3)))"
                       " -> exists u. (R(x,u,z3) & R(u,z1,z2)))",
        "p2 * p3 |- p1 -> ((p1 * p2) * p3)", mode="translate", translation="rspoon"),
    Row("converse association", "forall x z1 z2 z3. ((exists u. (R(x,u,z3) & R(u,z1,z2)))"
                                " -> exists u. (R(x,z1,u) & R(u,z2,z3)))",
        "p1 * p2 |- (p1 * (p2 * p3)) <- p3", mode="translate", translation="rspoon"),
    Row("exchange", "forall x u z. (R(x,u,z) -> R(x,z,u))", "p * q |- q * p"),
    Row("contraction", "forall x. R(x,x,x)", "p |- p * p"),
    Row("weakening", "forall x u z. (R(x,u,z) -> z <= x)", "p |- q -> p"),
    Row("Visser", "forall x u z. (R(x,u,z) -> u <= x & z <= x)", "p |- q -> (p & q)"),
)


def row(name: str) -> Row:
    for r in ROWS:
        if r.name == name:
            return r
    raise KeyError(name)


def compute_row(r: Row) -> tuple[fo.FO, SequentReduction | None]:
    if r.builder is not None:
        return r.builder(), None
    return correspondent_of(parse_sequent(r.sequent), r.frame_class, r.mode, r.translation)


@dataclass(frozen=True)
class RowResult:
    row: Row
    computed: str
    expected: str
    reduction: SequentReduction | None

    @property
    def matches(self) -> bool:
        return self.computed == self.expected


def check_row(r: Row) -> RowResult:
    f, red = compute_row(r)
    return RowResult(r, fo.normal_string(f), fo.normal_string(fo.parse_fo(r.expected)), red)


def check_catalogue(rows: tuple[Row, ...] = ROWS) -> list[RowResult]:
    return [check_row(r) for r in rows]


__all__ = ["Row", "ROWS", "RowResult", "row", "compute_row", "check_row", "check_catalogue",
           "res_formula", "unit_formula"]
