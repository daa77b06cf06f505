"""Command-line entry point.

Exit status: 0 when every check passes, 1 when a check fails, 2 on usage,
input or parse errors.  Every subcommand accepts ``--format json-lines``;
each output line is then a JSON object with a ``type`` field:

``header``   command, argv, sha256 digest of all inputs
``record``   id, status (pass | fail | info), witness, detail, optional data
``summary``  status, exit code, and seconds when ``--timing`` is given
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import acceptance, samplers
from .axioms import CLASSES, check_axiom, check_frame_class
from .correspondence.correspondent import compute_correspondent, guarded_translation
from .correspondence.rules import DEFAULT_DEPTH, reduce_sequent
from .correspondence.system import MODES
from .correspondence.verify import small_class_frames, verify_correspondence
from .duality import SIGNATURES, canonical_frame
from .errors import MissingRelation, NlogicError, NotSahlqvist, ParseError
from .frames import SORT1, SORTD, SortedFrame, format_frame, parse_frame
from .order import enumerate_filters, enumerate_ideals, parse_algebra_text, validate_algebra
from .semantics import IMPLICATIONS, Model, check_validity, eval_object, parse_valuation
from .syntax import fo
from .syntax.objects import parse_formula, parse_sequent

GRAMMARS = """\
grammars:
  sequent   formula? '|-' formula        (empty left side means t)
  formula   binary (('->' | '<-') formula)?          right-associative
  binary    product (('&' | '|') product)*           left-associative
  product   atom ('*' atom)*                         left-associative
  atom      VAR | top | bot | t | '(' formula ')'
  Unicode aliases: ⊢ → ⊸ ← ⟜ ∧ ∨ ∘ ⊤ ⊥

  algebra file   elements: a b c / order: a<=b b<=c / kind: lattice / unit: c
                 imp: (a,b)=c ... / prod: ... / limp: (c,b)=a means c<-b = a
  frame file     sort1: x0 x1 / sortD: y0 y1 / I: (x0,y0) ... / U: x0 | all
                 T: (y0|x0,y1) / R: (x0|x1,x2) / S: (y0|y1,x0) / class: LK_*
  valuation      one line per variable: p: x0 x2
"""


@dataclass
class RunReport:
    command: str
    argv: list[str]
    digest: str
    records: list[dict[str, Any]] = field(default_factory=list)

    def add(self, id: str, status: str, witness: Any = None, detail: str = "", **data) -> None:
        rec = {"id": id, "status": status, "witness": witness, "detail": detail}
        if data:
            rec["data"] = data
        self.records.append(rec)

    def check(self, id: str, ok: bool, witness: Any = None, detail: str = "") -> None:
        self.add(id, "pass" if ok else "fail", None if ok else witness, "" if ok else detail)

    @property
    def failed(self) -> bool:
        return any(r["status"] == "fail" for r in self.records)

    def emit(self, fmt: str, out, seconds: float | None) -> int:
        code = 1 if self.failed else 0
        status = "fail" if code else "pass"
        if fmt == "json-lines":
            lines = [{"type": "header", "command": self.command, "argv": self.argv,
                      "digest": self.digest}]
            lines += [{"type": "record", **r} for r in self.records]
            summary = {"type": "summary", "status": status, "exit": code}
            if seconds is not None:
                summary["seconds"] = round(seconds, 3)
            lines.append(summary)
            for obj in lines:
                out.write(json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n")
            return code
        out.write(f"# nlogic {self.command}  sha256:{self.digest}\n")
        for r in self.records:
            if r["status"] == "info":
                text = r["detail"]
                if "data" in r and "text" in r["data"]:
                    text = r["data"]["text"]
                out.write(text if text.endswith("\n") else text + "\n")
                continue
            line = f"{r['status'].upper()} {r['id']}"
            if r["witness"]:
                w = r["witness"]
                line += "  " + (" ".join(f"{k}={v}" for k, v in w.items()) if isinstance(w, dict)
                                else str(w))
            if r["detail"]:
                line += f"  ({r['detail']})"
            out.write(line + "\n")
        # reports made only of information lines (a dual frame, a correspondent)
        # stay free of status text so the output can be used as a file
        if any(r["status"] != "info" for r in self.records):
            out.write(status.upper() + "\n")
        if seconds is not None:
            out.write(f"# {seconds:.3f}s\n")
        return code


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _digest(parts: Sequence[str]) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode())
        h.update(b"\0")
    return h.hexdigest()[:16]


def _names(frame: SortedFrame, sort: str, mask: int) -> str:
    return " ".join(frame.name_set(sort, mask)) or "∅"


def _f1_note(report: RunReport, frame: SortedFrame) -> None:
    rels = tuple(r.name for r in frame.relations)
    if rels and not check_axiom(frame, "F1", rels).passed:
        report.add("F1", "info", detail="note: frame fails (F1); implication clauses may diverge")


# -- subcommands ---------------------------------------------------------------------------

def cmd_check_algebra(args, report: RunReport, texts: list[str]) -> None:
    raw = parse_algebra_text(texts[0])
    try:
        alg = validate_algebra(raw)
    except NlogicError as exc:
        report.check("valid", False, getattr(exc, "witness", None) or None, str(exc))
        return
    report.check("valid", True)
    report.add("summary", "info",
               detail=f"{alg.kind} on {len(alg.carrier)} elements; "
                      f"{len(enumerate_filters(alg, args.allow_empty).members)} filters, "
                      f"{len(enumerate_ideals(alg, args.allow_empty).members)} ideals")


def cmd_dualize(args, report: RunReport, texts: list[str]) -> None:
    alg = validate_algebra(parse_algebra_text(texts[0]))
    cf = canonical_frame(alg, args.signature, allow_empty=args.allow_empty)
    frame_text = format_frame(cf.frame)
    report.add("frame", "info", detail=frame_text, text=frame_text)
    report.add("points", "info", detail=cf.sidecar(), text="# points\n" + "".join(
        f"# {line}\n" for line in cf.sidecar().splitlines()))
    if args.sidecar:
        Path(args.sidecar).write_text(cf.sidecar())


def cmd_check_frame(args, report: RunReport, texts: list[str]) -> None:
    frame = parse_frame(texts[0])
    cls = args.frame_class or frame.class_tag
    if cls is None:
        raise UsageError("no class given and the frame file has no 'class:' line")
    if cls not in CLASSES:
        raise UsageError(f"unknown class {cls}; choose from {', '.join(CLASSES)}")
    axioms = tuple(a.strip() for a in args.axioms.split(",")) if args.axioms else None
    try:
        res = check_frame_class(frame, cls, axioms)
    except MissingRelation as exc:
        report.check("relations", False, None, str(exc))
        return
    for r in res.records:
        report.check(r.id, r.passed, r.witness, r.detail)


def cmd_eval(args, report: RunReport, texts: list[str]) -> None:
    frame = parse_frame(texts[0])
    phi = parse_formula(args.formula)
    val = parse_valuation(texts[1], frame) if len(texts) > 1 else {}
    _f1_note(report, frame)
    ext, co = eval_object(Model(frame, val), phi, args.implication)
    report.add("extent", "info", detail=f"extent: {_names(frame, SORT1, ext.mask)}",
               members=frame.name_set(SORT1, ext.mask))
    report.add("co-extent", "info", detail=f"co-extent: {_names(frame, SORTD, co.mask)}",
               members=frame.name_set(SORTD, co.mask))


def cmd_valid(args, report: RunReport, texts: list[str]) -> None:
    frame = parse_frame(texts[0])
    seq = parse_sequent(args.sequent)
    _f1_note(report, frame)
    res = check_validity(frame, seq, args.max_vars, implication=args.implication)
    witness = None
    if not res.valid:
        witness = {k: " ".join(v) or "∅" for k, v in res.counter_valuation.items()}
        witness["at"] = res.witness
    report.check("valid", res.valid, witness, f"fails after {res.checked} valuations")


def cmd_correspond(args, report: RunReport, texts: list[str]) -> None:
    seq = parse_sequent(args.sequent)
    try:
        red = reduce_sequent(seq, args.frame_class, args.mode, args.translation, args.depth,
                             args.associative)
    except NotSahlqvist as exc:
        report.check("reduction", False, None, str(exc))
        if args.trace:
            for line in exc.trace:
                report.add("trace", "info", detail=f"  {line}")
        return
    sys_ = red.reduction.system
    report.add("system", "info", detail=f"# {red.mode}/{red.translation}: {sys_}",
               mode=red.mode, translation=red.translation, system=str(sys_))
    if args.trace:
        for step in red.reduction.instances:
            report.add("trace", "info", detail=f"# {step.describe()}", rule=step.rule)
    if args.guarded:
        report.add("guarded", "info", detail="# " + fo.format_fo(guarded_translation(sys_)))
    f = compute_correspondent(sys_, args.frame_class)
    text = fo.normal_string(f)
    report.add("correspondent", "info", detail=text, formula=text)


def _load_frames(args) -> list[SortedFrame]:
    if args.frames:
        d = Path(args.frames)
        if not d.is_dir():
            raise UsageError(f"{d} is not a directory")
        return [parse_frame(p.read_text()) for p in sorted(d.glob("*.frame"))]
    n = args.enumerate
    if args.frame_class in ("LK", "LK*", "LK_*"):
        return samplers.lk_family(n, args.seed, frame_class=args.frame_class)[:n]
    return list(small_class_frames(args.frame_class))[:n]


def cmd_verify(args, report: RunReport, texts: list[str]) -> None:
    seq = parse_sequent(args.sequent)
    frames = _load_frames(args)
    rep = verify_correspondence(frames, seq, args.frame_class, args.mode, args.translation)
    report.add("correspondent", "info", detail=f"# correspondent: {rep.correspondent}",
               formula=rep.correspondent)
    report.add("frames", "info", detail=f"# {len(frames)} frames", count=len(frames))
    divergent = rep.divergences()
    for r in divergent:
        report.check(r.id, False, r.witness, r.detail)
    report.check("agreement", not divergent, None, f"{len(divergent)} divergences")


def cmd_selftest(args, report: RunReport, texts: list[str]) -> None:
    numbers = [int(n) for n in args.criteria.split(",")] if args.criteria else None
    for res in acceptance.run_all(numbers):
        detail = res.detail
        if args.timing:
            detail += f"; {res.seconds:.2f}s of {res.budget:g}s"
        report.add(f"criterion {res.number} {res.title}", "pass" if res.ok else "fail",
                   None, detail)


# -- parser ----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json-lines"), default="text")
    common.add_argument("--timing", action="store_true", help="report elapsed time")
    p = argparse.ArgumentParser(prog="nlogic", description="Polarity frames, canonical "
                                "frames and correspondents for substructural logics.",
                                epilog=GRAMMARS, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_, epilog=GRAMMARS,
                              formatter_class=argparse.RawDescriptionHelpFormatter)

    s = add("check-algebra", "validate an algebra file")
    s.add_argument("algebra")
    s.add_argument("--allow-empty", action="store_true", help="admit the empty filter and ideal")

    s = add("dualize", "canonical frame of an algebra")
    s.add_argument("algebra")
    s.add_argument("--signature", choices=SIGNATURES)
    s.add_argument("--allow-empty", action="store_true")
    s.add_argument("--sidecar", help="also write the point table to this file")

    s = add("check-frame", "check the axioms of a frame class")
    s.add_argument("frame")
    s.add_argument("--class", dest="frame_class")
    s.add_argument("--axioms", help="comma-separated axiom ids instead of the class list")

    s = add("eval", "extent and co-extent of a formula")
    s.add_argument("frame")
    s.add_argument("--formula", required=True)
    s.add_argument("--valuation")
    s.add_argument("--implication", choices=IMPLICATIONS, default="galois")

    s = add("valid", "validity of a sequent on a frame")
    s.add_argument("frame")
    s.add_argument("--sequent", required=True)
    s.add_argument("--max-vars", type=int)
    s.add_argument("--implication", choices=IMPLICATIONS, default="galois")

    for name, help_ in (("correspond", "first-order correspondent of a sequent"),
                        ("verify", "compare a correspondent with sequent validity on frames")):
        s = add(name, help_)
        s.add_argument("--sequent", required=True)
        s.add_argument("--class", dest="frame_class", required=True, choices=tuple(CLASSES))
        s.add_argument("--mode", choices=MODES, default="auto",
                       help="reduce the translation, the co-translation, or try both in turn")
        s.add_argument("--translation", choices=("auto", "diamond", "rspoon"), default="auto",
                       help="implication translation: primed diamonds or spoons")
        if name == "correspond":
            s.add_argument("--trace", action="store_true")
            s.add_argument("--guarded", action="store_true",
                           help="also print the guarded second-order translation")
            s.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
            s.add_argument("--associative", action="store_true",
                           help="enable the currying rewrites that assume associativity")
        else:
            g = s.add_mutually_exclusive_group(required=True)
            g.add_argument("--frames", help="directory of .frame files")
            g.add_argument("--enumerate", type=int, help="number of seeded frames of the class")
            s.add_argument("--seed", type=int, default=samplers.DEFAULT_SEED)

    s = add("selftest", "run the bundled acceptance criteria")
    s.add_argument("--criteria", help="comma-separated criterion numbers")
    return p


COMMANDS = {
    "check-algebra": (cmd_check_algebra, ("algebra",)),
    "dualize": (cmd_dualize, ("algebra",)),
    "check-frame": (cmd_check_frame, ("frame",)),
    "eval": (cmd_eval, ("frame", "valuation")),
    "valid": (cmd_valid, ("frame",)),
    "correspond": (cmd_correspond, ()),
    "verify": (cmd_verify, ()),
    "selftest": (cmd_selftest, ()),
}


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler, file_args = COMMANDS[args.command]
    start = time.perf_counter()
    try:
        texts = [_read(getattr(args, a)) for a in file_args if getattr(args, a, None)]
        report = RunReport(args.command, argv, _digest(texts + argv))
        handler(args, report, texts)
    except (UsageError, ParseError, NlogicError, ValueError) as exc:
        err.write(f"nlogic {args.command}: {exc}\n")
        return 2
    seconds = time.perf_counter() - start if args.timing else None
    return report.emit(args.format, out, seconds)


__all__ = ["main", "build_parser", "RunReport", "GRAMMARS"]
