"""Truth of formulas in finite augmented models."""

from __future__ import annotations

from typing import Mapping

from .errors import EvaluationError
from .semantics import AugmentedModel, EqualityMode, validate_model
from .syntax import (Atom, Bottom, Box, Diamond, Equal, Exists, Forall, Formula,
                     Iff, Implies, Not, Or, And, Top, free_vars, universal_closure)

__all__ = ["satisfies", "true_at", "true_in_model", "find_failure"]

Assignment = Mapping[str, int]


def satisfies(m: AugmentedModel, w: str, f: Formula, a: Assignment | None = None,
              *, debug: bool = False) -> bool:
    """Whether ``f`` holds at world ``w`` of ``m`` under assignment ``a``.

    With ``debug=True`` the model is validated first and every assignment
    is re-checked against the domain of each world it is evaluated at.
    """
    a = dict(a or {})
    if w not in m.frame.worlds:
        raise EvaluationError(f"unknown world {w!r}")
    if debug:
        problems = validate_model(m)
        if problems:
            raise EvaluationError(f"model fails validation: {problems[0].message}")
    missing = free_vars(f) - a.keys()
    if missing:
        raise EvaluationError(f"unassigned free variable(s): {', '.join(sorted(missing))}")
    dom = m.domains[w]
    for x in free_vars(f):
        if a[x] not in dom:
            raise EvaluationError(f"{x} = {a[x]} is not in the domain of {w}")
    return _eval(m, w, f, a, debug)


def _eval(m: AugmentedModel, w: str, f: Formula, a: dict, debug: bool) -> bool:
    if isinstance(f, Atom):
        return tuple(a[x] for x in f.args) in m.extension(f.pred, w)
    if isinstance(f, Equal):
        if m.equality_mode is EqualityMode.NONE:
            raise EvaluationError("equality atom evaluated in a model without equality")
        return m.equal_at(w, a[f.left], a[f.right])
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not _eval(m, w, f.body, a, debug)
    if isinstance(f, And):
        return _eval(m, w, f.left, a, debug) and _eval(m, w, f.right, a, debug)
    if isinstance(f, Or):
        return _eval(m, w, f.left, a, debug) or _eval(m, w, f.right, a, debug)
    if isinstance(f, Implies):
        return (not _eval(m, w, f.left, a, debug)) or _eval(m, w, f.right, a, debug)
    if isinstance(f, Iff):
        return _eval(m, w, f.left, a, debug) == _eval(m, w, f.right, a, debug)
    if isinstance(f, (Forall, Exists)):
        want = isinstance(f, Forall)
        saved = a.get(f.var, _UNSET)
        try:
            for d in sorted(m.domains[w]):
                a[f.var] = d
                if _eval(m, w, f.body, a, debug) != want:
                    return not want
            return want
        finally:
            if saved is _UNSET:
                a.pop(f.var, None)
            else:
                a[f.var] = saved
    if isinstance(f, (Box, Diamond)):
        want = isinstance(f, Box)
        for v in m.frame.successors(f.index, w):
            if debug:
                # (E) guarantees this; debug mode re-checks it
                outside = [x for x, d in a.items() if d not in m.domains[v]]
                if outside:
                    raise EvaluationError(f"{outside[0]} leaves the domain along {w} -> {v}")
            if _eval(m, v, f.body, a, debug) != want:
                return not want
        return want
    raise TypeError(f"not a formula: {f!r}")


_UNSET = object()


def true_at(m: AugmentedModel, w: str, f: Formula) -> bool:
    """Truth of the universal closure of ``f`` at ``w``."""
    return satisfies(m, w, universal_closure(f), {})


def find_failure(m: AugmentedModel, f: Formula) -> str | None:
    """The first world (declaration order) where ``f`` is not true, if any."""
    closed = universal_closure(f)
    for w in m.frame.worlds:
        if not _eval(m, w, closed, {}, False):
            return w
    return None


def true_in_model(m: AugmentedModel, f: Formula) -> bool:
    return find_failure(m, f) is None
