"""Tarskian evaluation of frame-language formulas over a finite frame."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import MissingRelation
from ..frames import SortedFrame
from ..syntax import fo


@dataclass(frozen=True)
class CheckResult:
    holds: bool
    witness: dict[str, str] | None = None

    def __bool__(self) -> bool:
        return self.holds


class _Evaluator:
    def __init__(self, frame: SortedFrame):
        self.frame = frame
        self.stable_cache: dict[tuple[str, int], bool] = {}

    def atom(self, f: fo.Atom, env: dict) -> bool:
        fr = self.frame
        args = [env[a] for a in f.args]
        rel = f.rel
        if rel == "I":
            return fr.incident(args[0], args[1])
        if rel == "U":
            return bool(fr.require_unit() >> args[0] & 1)
        if rel.endswith("'"):
            return bool(fr.dual_section(rel[:-1], tuple(args[1:])) >> args[0] & 1)
        if not fr.has(rel):
            raise MissingRelation(f"frame has no relation {rel}")
        return bool(fr.section(rel, tuple(args[1:])) >> args[0] & 1)

    def eval(self, f: fo.FO, env: dict, preds: dict) -> bool:
        fr = self.frame
        if isinstance(f, fo.Atom):
            return self.atom(f, env)
        if isinstance(f, fo.PApp):
            return bool(preds[f.pred] >> env[f.arg] & 1)
        if isinstance(f, fo.Leq):
            return fr.le(f.left.sort, env[f.left], env[f.right])
        if isinstance(f, fo.Eq):
            return env[f.left] == env[f.right]
        if isinstance(f, fo.Const):
            return f.value
        if isinstance(f, fo.Not):
            return not self.eval(f.arg, env, preds)
        if isinstance(f, fo.And):
            return all(self.eval(a, env, preds) for a in f.args)
        if isinstance(f, fo.Or):
            return any(self.eval(a, env, preds) for a in f.args)
        if isinstance(f, fo.Implies):
            return not self.eval(f.left, env, preds) or self.eval(f.right, env, preds)
        if isinstance(f, fo.Iff):
            return self.eval(f.left, env, preds) == self.eval(f.right, env, preds)
        if isinstance(f, (fo.Forall, fo.Exists)):
            want = isinstance(f, fo.Forall)
            v = f.var
            for i in range(fr.size(v.sort)):
                env2 = dict(env)
                env2[v] = i
                if self.eval(f.body, env2, preds) != want:
                    return not want
            return want
        if isinstance(f, fo.SOForall):
            for mask in range(1 << fr.size(f.sort)):
                p2 = dict(preds)
                p2[f.pred] = mask
                if not self.eval(f.body, env, p2):
                    return False
            return True
        if isinstance(f, fo.TInv):
            mask = preds[f.pred]
            key = (f.sort, mask)
            if key not in self.stable_cache:
                # evaluate the expansion literally rather than calling is_stable
                exp = fo.tinv_expansion(f.pred, f.sort)
                self.stable_cache[key] = self.eval(exp, {}, {f.pred: mask})
            return self.stable_cache[key]
        raise TypeError(f"not a formula: {f!r}")


def fo_model_check(frame: SortedFrame, f: fo.FO, env: dict | None = None) -> CheckResult:
    """Evaluate a closed formula; on failure of a leading universal block,
    report an assignment to that block falsifying the body."""
    ev = _Evaluator(frame)
    env = dict(env or {})
    if ev.eval(f, env, {}):
        return CheckResult(True)
    block, body = [], f
    while isinstance(body, fo.Forall):
        block.append(body.var)
        body = body.body
    if not block:
        return CheckResult(False, {})

    def search(i: int, cur: dict):
        if i == len(block):
            return None if ev.eval(body, cur, {}) else cur
        v = block[i]
        for p in range(frame.size(v.sort)):
            cur2 = dict(cur)
            cur2[v] = p
            if not ev.eval(fo.forall(block[i + 1:], body), cur2, {}):
                return search(i + 1, cur2)
        return None

    found = search(0, env)
    witness = {v.name: frame.names(v.sort)[found[v]] for v in block} if found else {}
    return CheckResult(False, witness)


__all__ = ["CheckResult", "fo_model_check"]
