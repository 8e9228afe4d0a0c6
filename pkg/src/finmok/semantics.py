"""Finite Kripke frames and augmented models with equality.

A model carries per-world domains, per-world equality partitions and
per-world interpretations of predicate letters, together with the two
mode flags that select which structural conditions apply:

* expanding domains: ``w R_k v`` implies ``D_w ⊆ D_v`` (always required);
* locally constant domains: additionally ``D_w = D_v``;
* heredity of equality: ``w R_k v`` implies ``≡_w ⊆ ≡_v``;
* congruence: ``≡_w`` respects every interpretation ``I_w(P)``.

Interpretations are stored as sets of argument tuples for every arity, so
monadic letters hold 1-tuples.  JSON renders monadic extensions as flat
lists of elements.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping

from .errors import ModelFormatError

__all__ = [
    "DomainMode", "EqualityMode", "KripkeFrame", "AugmentedModel", "Violation",
    "validate_frame", "validate_model", "make_identity_equality",
    "frame_from_json", "frame_to_json", "model_from_json", "model_to_json",
]

SCHEMA_VERSION = 1


class DomainMode(str, Enum):
    EXPANDING = "expanding"
    LOCALLY_CONSTANT = "locally_constant"

    @classmethod
    def parse(cls, value: "str | DomainMode") -> "DomainMode":
        if isinstance(value, cls):
            return value
        if value == "constant":
            return cls.LOCALLY_CONSTANT
        return cls(value)


class EqualityMode(str, Enum):
    CONGRUENCE = "congruence"
    IDENTITY = "identity"
    NONE = "none"

    @classmethod
    def parse(cls, value: "str | EqualityMode") -> "EqualityMode":
        return value if isinstance(value, cls) else cls(value)


@dataclass(frozen=True)
class KripkeFrame:
    """Worlds plus one accessibility relation per modality index ``1..n``."""

    worlds: tuple[str, ...]
    n: int
    relations: Mapping[int, frozenset[tuple[str, str]]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "worlds", tuple(self.worlds))
        rels = {int(k): frozenset((a, b) for a, b in pairs)
                for k, pairs in self.relations.items()}
        for k in range(1, self.n + 1):
            rels.setdefault(k, frozenset())
        object.__setattr__(self, "relations", dict(sorted(rels.items())))

    def __hash__(self):
        return hash((self.worlds, self.n, tuple(self.relations.items())))

    def successors(self, k: int, w: str) -> tuple[str, ...]:
        """R_k(w) in world declaration order."""
        return self._succ[k][w]

    @cached_property
    def _succ(self) -> dict[int, dict[str, tuple[str, ...]]]:
        out = {}
        for k, pairs in self.relations.items():
            out[k] = {w: tuple(v for v in self.worlds if (w, v) in pairs)
                      for w in self.worlds}
        return out

    @cached_property
    def edges(self) -> tuple[tuple[str, str], ...]:
        """All pairs related by some R_k, deduplicated, in declaration order."""
        union = set().union(*self.relations.values()) if self.relations else set()
        return tuple((w, v) for w in self.worlds for v in self.worlds if (w, v) in union)

    def index(self, w: str) -> int:
        return self.worlds.index(w)


@dataclass(frozen=True)
class Violation:
    condition: str
    where: tuple
    message: str

    def to_json(self) -> dict:
        return {"condition": self.condition, "where": list(self.where),
                "message": self.message}


def validate_frame(frame: KripkeFrame) -> list[Violation]:
    out = []
    if frame.n < 1:
        out.append(Violation("modal count", (frame.n,), "modal count n must be at least 1"))
    if not frame.worlds:
        out.append(Violation("worlds", (), "a frame needs at least one world"))
    if len(set(frame.worlds)) != len(frame.worlds):
        out.append(Violation("worlds", (), "world names must be unique"))
    declared = set(frame.worlds)
    for k, pairs in frame.relations.items():
        if not 1 <= k <= max(frame.n, 0):
            out.append(Violation("relation index", (k,),
                                 f"relation {k} outside 1..{frame.n}"))
        for a, b in sorted(pairs):
            for w in (a, b):
                if w not in declared:
                    out.append(Violation("undeclared world", (k, a, b),
                                         f"R_{k} pair ({a}, {b}) mentions undeclared world {w!r}"))
    return out


@dataclass(frozen=True)
class AugmentedModel:
    """A frame with domains, equality partitions and interpretations.

    ``equiv`` maps each world to its partition of ``D_w`` (a tuple of
    classes); it is ``None`` when ``equality_mode`` is ``none``.
    ``interp[P][w]`` is the set of argument tuples satisfying ``P`` at
    ``w``; missing letters or worlds mean the empty extension.
    """

    frame: KripkeFrame
    domains: Mapping[str, frozenset[int]]
    interp: Mapping[str, Mapping[str, frozenset[tuple[int, ...]]]] = field(default_factory=dict)
    equiv: Mapping[str, tuple[frozenset[int], ...]] | None = None
    domain_mode: DomainMode = DomainMode.EXPANDING
    equality_mode: EqualityMode = EqualityMode.CONGRUENCE

    def __post_init__(self):
        object.__setattr__(self, "domain_mode", DomainMode.parse(self.domain_mode))
        object.__setattr__(self, "equality_mode", EqualityMode.parse(self.equality_mode))
        object.__setattr__(self, "domains",
                           {w: frozenset(d) for w, d in self.domains.items()})
        interp = {}
        for p, ext in self.interp.items():
            interp[p] = {w: frozenset(_as_tuple(t) for t in ts) for w, ts in ext.items()}
        object.__setattr__(self, "interp", interp)
        if self.equiv is not None:
            object.__setattr__(self, "equiv", {
                w: tuple(sorted((frozenset(c) for c in classes), key=min))
                for w, classes in self.equiv.items()})

    __hash__ = None

    @cached_property
    def class_of(self) -> dict[str, dict[int, int]]:
        """For each world, element -> index of its equality class.

        In identity mode, and wherever no partition is stored, every
        element forms its own class.
        """
        out = {}
        for w in self.frame.worlds:
            dom = self.domains.get(w, frozenset())
            if self.equality_mode is EqualityMode.IDENTITY or self.equiv is None:
                out[w] = {a: a for a in dom}
            else:
                table = {}
                for i, cls in enumerate(self.equiv.get(w, ())):
                    for a in cls:
                        table[a] = i
                out[w] = table
        return out

    def extension(self, pred: str, w: str) -> frozenset[tuple[int, ...]]:
        return self.interp.get(pred, {}).get(w, frozenset())

    def equal_at(self, w: str, a: int, b: int) -> bool:
        if self.equality_mode is EqualityMode.IDENTITY:
            return a == b
        table = self.class_of[w]
        return a == b or (a in table and table.get(a) == table.get(b))


def _as_tuple(t) -> tuple[int, ...]:
    return tuple(t) if isinstance(t, (tuple, list)) else (t,)


def _is_partition(classes: Iterable[frozenset[int]], dom: frozenset[int]) -> str | None:
    seen: set[int] = set()
    for c in classes:
        if not c:
            return "empty class"
        if seen & c:
            return "overlapping classes"
        seen |= c
    if seen != dom:
        return "classes do not cover the domain exactly"
    return None


def validate_model(m: AugmentedModel) -> list[Violation]:
    """Every violated structural condition of ``m``, with witnesses.

    Condition labels: ``domain``, ``E``, ``C``, ``equivalence``, ``H``,
    ``congruence``, ``identity``, ``interpretation``.
    """
    out: list[Violation] = []
    frame = m.frame
    out.extend(validate_frame(frame))
    for w in frame.worlds:
        if not m.domains.get(w):
            out.append(Violation("domain", (w,), f"domain of {w} is missing or empty"))
    for w in m.domains:
        if w not in frame.worlds:
            out.append(Violation("domain", (w,), f"domain given for undeclared world {w!r}"))
    dom = {w: m.domains.get(w, frozenset()) for w in frame.worlds}

    for w, v in frame.edges:
        if not dom[w] <= dom[v]:
            out.append(Violation("E", (w, v),
                                 f"(E) violated at ({w}, {v}): D_{w} not included in D_{v}"))
        if m.domain_mode is DomainMode.LOCALLY_CONSTANT and dom[w] != dom[v]:
            out.append(Violation("C", (w, v),
                                 f"(C) violated at ({w}, {v}): D_{w} differs from D_{v}"))

    partitions_ok = True
    if m.equality_mode is not EqualityMode.NONE and m.equiv is not None:
        for w in frame.worlds:
            classes = m.equiv.get(w)
            if classes is None:
                partitions_ok = False
                out.append(Violation("equivalence", (w,), f"no equality partition for {w}"))
                continue
            problem = _is_partition(classes, dom[w])
            if problem:
                partitions_ok = False
                out.append(Violation("equivalence", (w,),
                                     f"equality at {w} is not a partition of D_{w}: {problem}"))
            if m.equality_mode is EqualityMode.IDENTITY:
                for c in classes:
                    if len(c) > 1:
                        out.append(Violation("identity", (w, tuple(sorted(c))),
                                             f"identity mode but {sorted(c)} merged at {w}"))
    elif m.equality_mode is EqualityMode.CONGRUENCE:
        partitions_ok = False
        out.append(Violation("equivalence", (), "congruence mode requires equality partitions"))

    for p, ext in m.interp.items():
        for w, tuples in ext.items():
            if w not in dom:
                out.append(Violation("interpretation", (p, w),
                                     f"{p} interpreted at undeclared world {w!r}"))
                continue
            for t in sorted(tuples):
                if not set(t) <= dom[w]:
                    out.append(Violation("interpretation", (p, w, t),
                                         f"{p} at {w} contains {list(t)} outside D_{w}"))
        arities = {len(t) for ts in ext.values() for t in ts}
        if len(arities) > 1:
            out.append(Violation("interpretation", (p,), f"{p} has mixed arities {sorted(arities)}"))

    if m.equality_mode is EqualityMode.CONGRUENCE and partitions_ok:
        cls = m.class_of
        for w, v in frame.edges:
            for c in m.equiv[w]:
                targets = {cls[v].get(a) for a in c}
                if len(targets) > 1:
                    out.append(Violation("H", (w, v),
                                         f"(H) violated at ({w}, {v}): {sorted(c)} merged at {w} but split at {v}"))
                    break
        for p in sorted(m.interp):
            for w in frame.worlds:
                bad = _congruence_failure(m, p, w)
                if bad is not None:
                    out.append(Violation("congruence", (w, p, bad),
                                         f"congruence violated at {w} on {p}: elements {bad[0]} and {bad[1]}"))
    return out


def _congruence_failure(m: AugmentedModel, p: str, w: str) -> tuple[int, int] | None:
    ext = m.extension(p, w)
    if not ext:
        return None
    cls = m.class_of[w]
    for t in ext:
        for i, a in enumerate(t):
            for b in m.domains[w]:
                if b != a and cls.get(b) == cls.get(a):
                    swapped = t[:i] + (b,) + t[i + 1:]
                    if swapped not in ext:
                        return (min(a, b), max(a, b))
    return None


def make_identity_equality(m: AugmentedModel) -> AugmentedModel:
    """Reinterpret ``=`` as identity: every element in its own class."""
    equiv = {w: tuple(frozenset([a]) for a in sorted(m.domains.get(w, ())))
             for w in m.frame.worlds}
    return replace(m, equiv=equiv, equality_mode=EqualityMode.IDENTITY)


# ---------------------------------------------------------------------------
# JSON

def frame_to_json(frame: KripkeFrame) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "n": frame.n,
        "worlds": list(frame.worlds),
        "relations": {str(k): [[a, b] for a, b in sorted(
            pairs, key=lambda p: (frame.worlds.index(p[0]), frame.worlds.index(p[1])))
            if a in frame.worlds and b in frame.worlds]
            for k, pairs in frame.relations.items()},
    }


def frame_from_json(data: Mapping) -> KripkeFrame:
    try:
        worlds = [str(w) for w in data["worlds"]]
        n = int(data["n"])
        relations = {int(k): frozenset((str(a), str(b)) for a, b in pairs)
                     for k, pairs in data.get("relations", {}).items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed frame JSON: {exc!r}") from exc
    return KripkeFrame(tuple(worlds), n, relations)


def model_to_json(m: AugmentedModel) -> dict:
    out = frame_to_json(m.frame)
    worlds = m.frame.worlds
    out["domains"] = {w: sorted(m.domains.get(w, ())) for w in worlds}
    if m.equiv is not None and m.equality_mode is not EqualityMode.NONE:
        out["equiv"] = {w: [sorted(c) for c in m.equiv.get(w, ())] for w in worlds}
    interp = {}
    for p in sorted(m.interp):
        ext = m.interp[p]
        per_world = {}
        for w in worlds:
            tuples = sorted(ext.get(w, ()))
            if tuples and all(len(t) == 1 for t in tuples):
                per_world[w] = [t[0] for t in tuples]
            else:
                per_world[w] = [list(t) for t in tuples]
        interp[p] = per_world
    out["interp"] = interp
    out["domain_mode"] = m.domain_mode.value
    out["equality_mode"] = m.equality_mode.value
    return out


def model_from_json(data: Mapping) -> AugmentedModel:
    frame = frame_from_json(data)
    try:
        domains = {str(w): frozenset(int(a) for a in d) for w, d in data["domains"].items()}
        equality_mode = EqualityMode.parse(data.get("equality_mode", "congruence"))
        domain_mode = DomainMode.parse(data.get("domain_mode", "expanding"))
        equiv = None
        if "equiv" in data and equality_mode is not EqualityMode.NONE:
            equiv = {str(w): tuple(frozenset(int(a) for a in c) for c in classes)
                     for w, classes in data["equiv"].items()}
        elif equality_mode is EqualityMode.IDENTITY:
            equiv = {w: tuple(frozenset([a]) for a in sorted(d)) for w, d in domains.items()}
        interp = {}
        for p, ext in data.get("interp", {}).items():
            interp[str(p)] = {str(w): frozenset(
                tuple(int(a) for a in t) if isinstance(t, list) else (int(t),) for t in ts)
                for w, ts in ext.items()}
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ModelFormatError(f"malformed model JSON: {exc!r}") from exc
    return AugmentedModel(frame, domains, interp, equiv, domain_mode, equality_mode)


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: invalid JSON ({exc})") from exc
