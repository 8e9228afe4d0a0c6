"""SAT encoding of the countermodel search over a fixed finite frame.

The encoding ranges over every model whose elements fit in a universe of
``N`` element ids: existence, equality and interpretation are boolean
variables, the structural conditions are clauses, and the negated
universal closure of the formula is grounded over the universe with
Tseitin definitions.  It is used for searches whose size bound puts
plain enumeration out of reach.
"""

from __future__ import annotations

import logging
from itertools import combinations, permutations, product

from pysat.formula import IDPool
from pysat.solvers import Solver

from .semantics import AugmentedModel, DomainMode, EqualityMode, KripkeFrame
from .syntax import (And, Atom, Bottom, Box, Diamond, Equal, Exists, Forall, Formula,
                     Iff, Implies, Not, Or, Top, free_vars, letters, universal_closure)

log = logging.getLogger(__name__)

SOLVER = "cadical153"


class _Encoder:
    def __init__(self, frame: KripkeFrame, f: Formula, domains: DomainMode,
                 equality: EqualityMode, size: int):
        self.frame = frame
        self.f = f
        self.domains = domains
        self.equality = equality
        self.universe = range(size)
        self.letters = letters(f)
        self.pool = IDPool()
        self.clauses: list[list[int]] = []
        self.memo: dict = {}
        self.fv: dict = {}

    # -- boolean plumbing; literals are ints or the Python constants True/False

    def fresh(self) -> int:
        return self.pool.id(("aux", self.pool.top + 1))

    def neg(self, lit):
        if lit is True or lit is False:
            return not lit
        return -lit

    def conj(self, lits):
        out = []
        for lit in lits:
            if lit is False:
                return False
            if lit is not True:
                out.append(lit)
        if not out:
            return True
        if len(out) == 1:
            return out[0]
        v = self.fresh()
        for lit in out:
            self.clauses.append([-v, lit])
        self.clauses.append([v] + [-lit for lit in out])
        return v

    def disj(self, lits):
        return self.neg(self.conj(self.neg(lit) for lit in lits))

    # -- structure variables

    def ex(self, w, a) -> int:
        return self.pool.id(("ex", w, a))

    def eq(self, w, a, b):
        if a == b:
            return True
        if self.equality is EqualityMode.IDENTITY:
            return False
        a, b = min(a, b), max(a, b)
        return self.pool.id(("eq", w, a, b))

    def pr(self, p, w, t) -> int:
        return self.pool.id(("pr", p, w, t))

    def structure(self) -> None:
        frame, U = self.frame, self.universe
        for w in frame.worlds:
            self.clauses.append([self.ex(w, a) for a in U])
        for w, v in frame.edges:
            for a in U:
                self.clauses.append([-self.ex(w, a), self.ex(v, a)])
                if self.domains is DomainMode.LOCALLY_CONSTANT:
                    self.clauses.append([-self.ex(v, a), self.ex(w, a)])
        # unused ids come last; removes the relabelling symmetry of unused elements
        for a in U[1:]:
            for w in frame.worlds:
                self.clauses.append([-self.ex(w, a)] + [self.ex(u, a - 1) for u in frame.worlds])
        for p, arity in self.letters.items():
            for w in frame.worlds:
                for t in product(U, repeat=arity):
                    for a in set(t):
                        self.clauses.append([-self.pr(p, w, t), self.ex(w, a)])
        if self.equality is not EqualityMode.CONGRUENCE:
            return
        for w in frame.worlds:
            for a, b in combinations(U, 2):
                e = self.eq(w, a, b)
                self.clauses.append([-e, self.ex(w, a)])
                self.clauses.append([-e, self.ex(w, b)])
            for a, b, c in permutations(U, 3):
                if a < c:
                    self.clauses.append([-self.eq(w, a, b), -self.eq(w, b, c), self.eq(w, a, c)])
            for p, arity in self.letters.items():
                for t in product(U, repeat=arity):
                    for i, a in enumerate(t):
                        for b in U:
                            if b == a:
                                continue
                            s = t[:i] + (b,) + t[i + 1:]
                            e = self.eq(w, a, b)
                            self.clauses.append([-e, -self.pr(p, w, t), self.pr(p, w, s)])
        for w, v in frame.edges:
            for a, b in combinations(U, 2):
                self.clauses.append([-self.eq(w, a, b), self.eq(v, a, b)])

    # -- grounding

    def free(self, g: Formula) -> tuple[str, ...]:
        if g not in self.fv:
            self.fv[g] = tuple(sorted(free_vars(g)))
        return self.fv[g]

    def ground(self, g: Formula, w: str, env: dict):
        key = (g, w, tuple(env[x] for x in self.free(g)))
        if key in self.memo:
            return self.memo[key]
        lit = self._ground(g, w, env)
        self.memo[key] = lit
        return lit

    def _ground(self, g: Formula, w: str, env: dict):
        if isinstance(g, Top):
            return True
        if isinstance(g, Bottom):
            return False
        if isinstance(g, Atom):
            return self.pr(g.pred, w, tuple(env[x] for x in g.args))
        if isinstance(g, Equal):
            return self.eq(w, env[g.left], env[g.right])
        if isinstance(g, Not):
            return self.neg(self.ground(g.body, w, env))
        if isinstance(g, And):
            return self.conj([self.ground(g.left, w, env), self.ground(g.right, w, env)])
        if isinstance(g, Or):
            return self.disj([self.ground(g.left, w, env), self.ground(g.right, w, env)])
        if isinstance(g, Implies):
            return self.disj([self.neg(self.ground(g.left, w, env)), self.ground(g.right, w, env)])
        if isinstance(g, Iff):
            left, right = self.ground(g.left, w, env), self.ground(g.right, w, env)
            return self.conj([self.disj([self.neg(left), right]),
                              self.disj([left, self.neg(right)])])
        if isinstance(g, (Forall, Exists)):
            parts = []
            for d in self.universe:
                inner = self.ground(g.body, w, {**env, g.var: d})
                if isinstance(g, Forall):
                    parts.append(self.disj([-self.ex(w, d), inner]))
                else:
                    parts.append(self.conj([self.ex(w, d), inner]))
            return self.conj(parts) if isinstance(g, Forall) else self.disj(parts)
        if isinstance(g, (Box, Diamond)):
            parts = [self.ground(g.body, v, env) for v in self.frame.successors(g.index, w)]
            return self.conj(parts) if isinstance(g, Box) else self.disj(parts)
        raise TypeError(f"not a formula: {g!r}")

    def encode(self) -> bool:
        """Emit all clauses; False when the goal is trivially unsatisfiable."""
        self.structure()
        closed = universal_closure(self.f)
        goal = self.disj([self.neg(self.ground(closed, w, {})) for w in self.frame.worlds])
        if goal is False:
            return False
        if goal is not True:
            self.clauses.append([goal])
        return True

    def decode(self, assignment: list[int]) -> AugmentedModel:
        true = {lit for lit in assignment if lit > 0}
        frame, U = self.frame, self.universe

        def holds(key):
            return key in self.pool.obj2id and self.pool.obj2id[key] in true

        used = [a for a in U if any(holds(("ex", w, a)) for w in frame.worlds)]
        rename = {a: i for i, a in enumerate(used)}
        domains = {w: frozenset(rename[a] for a in used if holds(("ex", w, a)))
                   for w in frame.worlds}
        interp = {}
        for p, arity in self.letters.items():
            interp[p] = {w: frozenset(tuple(rename[a] for a in t)
                                      for t in product(used, repeat=arity)
                                      if holds(("pr", p, w, t)))
                         for w in frame.worlds}
        equiv = None
        if self.equality is EqualityMode.CONGRUENCE:
            equiv = {}
            for w in frame.worlds:
                classes: list[set[int]] = []
                for a in used:
                    if not holds(("ex", w, a)):
                        continue
                    for c in classes:
                        b = min(c)
                        if holds(("eq", w, min(a, b), max(a, b))):
                            c.add(a)
                            break
                    else:
                        classes.append({a})
                equiv[w] = tuple(frozenset(rename[a] for a in c) for c in classes)
        elif self.equality is EqualityMode.IDENTITY:
            equiv = {w: tuple(frozenset([a]) for a in sorted(d)) for w, d in domains.items()}
        return AugmentedModel(frame, domains, interp, equiv, self.domains, self.equality)


def sat_countermodel(frame: KripkeFrame, f: Formula, domains: DomainMode,
                     equality: EqualityMode, universe: int) -> AugmentedModel | None:
    """A model over ``frame`` with at most ``universe`` elements refuting ``f``.

    Returns ``None`` when no such model exists.  The returned model still
    has to be model-checked by the caller to locate the failing world.
    """
    enc = _Encoder(frame, f, domains, equality, universe)
    if not enc.encode():
        return None
    log.debug("sat search: %d elements, %d vars, %d clauses",
              universe, enc.pool.top, len(enc.clauses))
    with Solver(name=SOLVER, bootstrap_with=enc.clauses) as solver:
        if not solver.solve():
            return None
        return enc.decode(solver.get_model())
