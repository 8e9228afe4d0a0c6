"""Validity of monadic formulas on a fixed finite Kripke frame.

Two search routes share one notion of countermodel:

* :func:`refute` walks labelled models in a fixed canonical order, so the
  countermodel it reports is the least one in that order.  It is sound for
  any formula but only looks at models with initial-segment domains up to
  a per-world size.
* :func:`decide_validity` runs a short canonical search for a readable
  certificate, then hands the full bound to a SAT encoding
  (:mod:`finmok.satsearch`) that covers every model up to that size.

Every countermodel, whichever route produced it, can be re-checked with
:func:`verify_certificate`, which only uses the validators in
:mod:`finmok.semantics` and the evaluator in :mod:`finmok.modelcheck`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Iterator

from .errors import InfeasibleProfileError, NonMonadicError
from .modelcheck import find_failure, true_at
from .satsearch import sat_countermodel
from .semantics import (AugmentedModel, DomainMode, EqualityMode, KripkeFrame,
                        model_to_json, validate_frame, validate_model)
from .syntax import Formula, Signature, check_monadic, has_equality, letters, metrics

__all__ = [
    "Modes", "Status", "Certificate", "Verdict", "bound", "size_profiles",
    "enumerate_models", "refute", "decide_validity", "verify_certificate",
    "restricted_growth_strings",
]

log = logging.getLogger(__name__)

# canonical phase of decide_validity is skipped above this many candidate models
CANONICAL_BUDGET = 20_000


@dataclass(frozen=True)
class Modes:
    domains: DomainMode = DomainMode.EXPANDING
    equality: EqualityMode = EqualityMode.CONGRUENCE

    def __post_init__(self):
        object.__setattr__(self, "domains", DomainMode.parse(self.domains))
        object.__setattr__(self, "equality", EqualityMode.parse(self.equality))


class Status(str, Enum):
    VALID = "valid"
    COUNTERMODEL = "countermodel"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Certificate:
    model: AugmentedModel
    world: str

    def to_json(self) -> dict:
        out = model_to_json(self.model)
        out["failing_world"] = self.world
        return out


@dataclass(frozen=True)
class Verdict:
    status: Status
    bound_used: int
    certified: bool = False
    certificate: Certificate | None = None
    budget_exhausted: int | None = None
    models_checked: int = 0
    method: str = "enumeration"

    def to_json(self) -> dict:
        out = {
            "schema": 1,
            "status": self.status.value,
            "certified": self.certified,
            "bound_used": self.bound_used,
            "method": self.method,
            "models_checked": self.models_checked,
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.budget_exhausted is not None:
            out["budget_exhausted"] = self.budget_exhausted
        return out


def bound(f: Formula, frame: KripkeFrame) -> int:
    """Default per-world domain-size bound ``max(v, 1) * 2**((k + 1) * m)``.

    ``k`` counts letters, ``v`` variables and ``m`` worlds.  In identity
    and no-equality modes an element is fixed up to isomorphism by its
    existence set and its valuation at each world, and a formula with
    ``v`` variables cannot tell ``v`` copies of such an element from
    more, so every countermodel shrinks to one within this bound.
    """
    if check_monadic(f) is Signature.NON_MONADIC:
        raise NonMonadicError("the default bound is defined for monadic formulas only")
    mt = metrics(f)
    m = len(frame.worlds)
    return max(mt.variables, 1) * 2 ** ((mt.letters + 1) * m)


# ---------------------------------------------------------------------------
# Canonical enumeration

def restricted_growth_strings(size: int) -> Iterator[tuple[int, ...]]:
    """Set partitions of ``range(size)`` as restricted growth strings, in lexicographic order."""
    if size == 0:
        yield ()
        return

    def grow(prefix: list[int], top: int):
        if len(prefix) == size:
            yield tuple(prefix)
            return
        for c in range(top + 2):
            prefix.append(c)
            yield from grow(prefix, max(top, c))
            prefix.pop()

    yield from grow([0], 0)


def _feasible(frame: KripkeFrame, sizes: dict[str, int], modes: Modes) -> str | None:
    for w in frame.worlds:
        if sizes.get(w, 0) < 1:
            return f"world {w} needs a positive domain size"
    for w, v in frame.edges:
        if sizes[w] > sizes[v]:
            return f"size of {w} exceeds size of its successor {v}"
        if modes.domains is DomainMode.LOCALLY_CONSTANT and sizes[w] != sizes[v]:
            return f"locally constant domains need equal sizes at {w} and {v}"
    return None


def size_profiles(frame: KripkeFrame, modes: Modes, max_size: int,
                  exact_max: int | None = None) -> list[dict[str, int]]:
    """Feasible per-world sizes up to ``max_size``, by total size then lexicographically.

    With ``exact_max`` only profiles whose largest entry equals it are kept.
    """
    out = []
    for combo in product(range(1, max_size + 1), repeat=len(frame.worlds)):
        sizes = dict(zip(frame.worlds, combo))
        if exact_max is not None and max(combo) != exact_max:
            continue
        if _feasible(frame, sizes, modes) is None:
            out.append((sum(combo), combo, sizes))
    out.sort(key=lambda t: (t[0], t[1]))
    return [s for _, _, s in out]


def _partition_families(frame: KripkeFrame, sizes: dict[str, int],
                        equality: EqualityMode) -> Iterator[dict[str, tuple[int, ...]] | None]:
    if equality is EqualityMode.NONE:
        yield None
        return
    if equality is EqualityMode.IDENTITY:
        yield {w: tuple(range(sizes[w])) for w in frame.worlds}
        return
    per_world = [list(restricted_growth_strings(sizes[w])) for w in frame.worlds]
    for combo in product(*per_world):
        rgs = dict(zip(frame.worlds, combo))
        if all(_hereditary(rgs[w], rgs[v]) for w, v in frame.edges):
            yield rgs


def _hereditary(small: tuple[int, ...], big: tuple[int, ...]) -> bool:
    # domains are initial segments, so D_w is a prefix of D_v
    first = {}
    for a, c in enumerate(small):
        if c in first:
            if big[first[c]] != big[a]:
                return False
        else:
            first[c] = a
    return True


def _interpretation_blocks(frame, sizes, sig, rgs):
    """Groups of interpretation bits forced equal by congruence.

    Bits are laid out letter by letter (sorted), world by world
    (declaration order), tuple by tuple (lexicographic).  Each returned
    block is a list of ``(letter, world, tuple)`` cells; blocks are sorted
    by their highest bit so that counting over blocks reproduces numeric
    order over full bitvectors.
    """
    blocks: list[tuple[int, list]] = []
    bit = 0
    for p, arity in sig.items():
        for w in frame.worlds:
            cls = rgs[w] if rgs is not None else tuple(range(sizes[w]))
            groups: dict[tuple[int, ...], list] = {}
            order = []
            for t in product(range(sizes[w]), repeat=arity):
                key = tuple(cls[a] for a in t)
                if key not in groups:
                    groups[key] = []
                    order.append(key)
                groups[key].append((bit, (p, w, t)))
                bit += 1
            for key in order:
                cells = groups[key]
                blocks.append((max(b for b, _ in cells), [c for _, c in cells]))
    blocks.sort(key=lambda t: t[0])
    return [cells for _, cells in blocks]


def enumerate_models(frame: KripkeFrame, sizes: dict[str, int], modes: Modes,
                     signature: dict[str, int] | None = None) -> Iterator[AugmentedModel]:
    """All models over ``frame`` with domains ``{0, ..., sizes[w] - 1}``.

    Order: equality partitions (restricted growth strings, first world
    varying slowest) outside, interpretations of the ``signature`` letters
    as bitvectors in numeric order inside.  Partitions violating heredity
    and interpretations violating congruence are skipped.
    """
    modes = Modes(modes.domains, modes.equality)
    problem = _feasible(frame, sizes, modes)
    if problem:
        raise InfeasibleProfileError(problem)
    sig = dict(sorted((signature or {}).items()))
    domains = {w: frozenset(range(sizes[w])) for w in frame.worlds}
    for rgs in _partition_families(frame, sizes, modes.equality):
        equiv = None
        if rgs is not None:
            equiv = {}
            for w in frame.worlds:
                classes: dict[int, set[int]] = {}
                for a, c in enumerate(rgs[w]):
                    classes.setdefault(c, set()).add(a)
                equiv[w] = tuple(frozenset(c) for c in classes.values())
        congruence_rgs = rgs if modes.equality is EqualityMode.CONGRUENCE else None
        blocks = _interpretation_blocks(frame, sizes, sig, congruence_rgs)
        for value in range(2 ** len(blocks)):
            interp = {p: {w: set() for w in frame.worlds} for p in sig}
            for i, cells in enumerate(blocks):
                if value >> i & 1:
                    for p, w, t in cells:
                        interp[p][w].add(t)
            yield AugmentedModel(frame, domains, interp, equiv,
                                 modes.domains, modes.equality)


def _count_models(frame: KripkeFrame, sizes: dict[str, int], modes: Modes, sig) -> int:
    total = 0
    for rgs in _partition_families(frame, sizes, modes.equality):
        congruence_rgs = rgs if modes.equality is EqualityMode.CONGRUENCE else None
        total += 2 ** len(_interpretation_blocks(frame, sizes, sig, congruence_rgs))
        if total > CANONICAL_BUDGET:
            break
    return total


def _check_inputs(frame: KripkeFrame, f: Formula, modes: Modes) -> None:
    problems = validate_frame(frame)
    if problems:
        raise ValueError(f"invalid frame: {problems[0].message}")
    if modes.equality is EqualityMode.NONE and has_equality(f):
        raise ValueError("formula uses '=' but equality mode is 'none'")


def refute(frame: KripkeFrame, f: Formula, modes: Modes, max_size: int, *,
           exact_max: int | None = None) -> Verdict:
    """Search for the canonically least countermodel with domains up to ``max_size``.

    Never returns ``valid``: when nothing is found the verdict is
    ``unknown`` with ``budget_exhausted`` set.  ``exact_max`` restricts the
    search to size profiles whose largest domain is exactly that size.
    """
    modes = Modes(modes.domains, modes.equality)
    _check_inputs(frame, f, modes)
    sig = letters(f)
    checked = 0
    for sizes in size_profiles(frame, modes, max_size, exact_max):
        for model in enumerate_models(frame, sizes, modes, sig):
            checked += 1
            w = find_failure(model, f)
            if w is not None:
                return Verdict(Status.COUNTERMODEL, max_size, False,
                               Certificate(model, w), models_checked=checked)
    return Verdict(Status.UNKNOWN, max_size, False, None,
                   budget_exhausted=max_size, models_checked=checked)


def _sat_universes(limit: int) -> list[int]:
    sizes, n = [], 1
    while n < limit:
        sizes.append(n)
        n *= 2
    sizes.append(limit)
    return sizes


def decide_validity(frame: KripkeFrame, f: Formula, modes: Modes, *,
                    bound_override: int | None = None, max_size: int | None = None,
                    fast: bool = False) -> Verdict:
    """Decide whether ``f`` is valid on ``frame`` under ``modes``.

    The search covers every model with at most ``bound(f, frame)`` elements
    per world (or ``bound_override``).  A ``valid`` verdict is flagged
    ``certified`` when the bound searched is at least the default one.

    ``max_size`` caps the initial canonical search (default ``min(B, 2)``,
    skipped when the candidate space is large); ``fast`` skips it
    altogether and reports whichever countermodel the solver finds first.
    """
    modes = Modes(modes.domains, modes.equality)
    if check_monadic(f) is Signature.NON_MONADIC:
        raise NonMonadicError(
            "decide_validity needs a monadic formula; use refute for a bounded search")
    _check_inputs(frame, f, modes)
    default = bound(f, frame)
    limit = bound_override if bound_override is not None else default
    if limit < 1:
        raise ValueError("bound must be positive")

    if not fast:
        size = min(limit, max_size if max_size is not None else 2)
        sig = letters(f)
        space = sum(_count_models(frame, s, modes, sig)
                    for s in size_profiles(frame, modes, size))
        if max_size is not None or space <= CANONICAL_BUDGET:
            verdict = refute(frame, f, modes, size)
            if verdict.status is Status.COUNTERMODEL:
                return verdict
        else:
            log.debug("canonical phase skipped: %d candidate models", space)

    # identity/none: the shrinking argument in bound() also caps the total
    # element count; congruence: allow disjoint domains at every world
    if modes.equality is EqualityMode.CONGRUENCE:
        universe = limit * len(frame.worlds)
    else:
        universe = limit
    for n in _sat_universes(universe):
        model = sat_countermodel(frame, f, modes.domains, modes.equality, n)
        if model is not None:
            w = find_failure(model, f)
            cert = Certificate(model, w)
            verdict = Verdict(Status.COUNTERMODEL, limit, False, cert, method="sat")
            if w is None or not verify_certificate(verdict, frame, f, modes):
                raise RuntimeError("internal error: SAT countermodel failed verification")
            return verdict
    return Verdict(Status.VALID, limit, certified=limit >= default, method="sat")


def verify_certificate(v: Verdict, frame: KripkeFrame, f: Formula, modes: Modes) -> bool:
    """Independent re-check of a countermodel verdict.

    Uses only the structural validators and the model checker: the model
    must sit over ``frame``, carry the requested modes, pass validation,
    and falsify ``f`` at the reported world.
    """
    if v.status is not Status.COUNTERMODEL:
        raise ValueError("only countermodel verdicts carry a certificate")
    cert = v.certificate
    if cert is None or not isinstance(cert.model, AugmentedModel):
        raise ValueError("malformed certificate")
    modes = Modes(modes.domains, modes.equality)
    m = cert.model
    if m.frame != frame or cert.world not in frame.worlds:
        return False
    if m.domain_mode is not modes.domains or m.equality_mode is not modes.equality:
        return False
    if validate_model(m):
        return False
    return not true_at(m, cert.world, f)
