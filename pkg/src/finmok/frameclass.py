"""Classes of finite frames given by decidable predicates, and the search
for a refuting (frame, countermodel) pair over such a class.

A class is a conjunction of per-relation predicates, written in text as
``"reflexive(1),transitive(1),branching<=2(1)"``.  Non-validity over the
class is semi-decided by sweeping frames and domain sizes together.
"""

from __future__ import annotations

import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Iterator

from .decide import Modes, Status, Verdict, refute
from .semantics import KripkeFrame, frame_to_json
from .syntax import Formula

__all__ = [
    "Predicate", "FrameClassSpec", "parse_class", "check_predicates",
    "enumerate_frames", "subframe", "class_refute", "ClassVerdict",
]

PREDICATES = ("reflexive", "transitive", "symmetric", "serial", "linear", "branching_at_most")
# closed under taking subframes; seriality is not
SUBFRAME_CLOSED = ("reflexive", "transitive", "symmetric", "linear", "branching_at_most")


@dataclass(frozen=True)
class Predicate:
    name: str
    k: int
    m: int | None = None

    def __str__(self):
        if self.name == "branching_at_most":
            return f"branching<={self.m}({self.k})"
        return f"{self.name}({self.k})"


@dataclass(frozen=True)
class FrameClassSpec:
    n: int
    predicates: tuple[Predicate, ...] = ()

    def __str__(self):
        return ",".join(map(str, self.predicates)) or "all"


_ITEM = re.compile(r"""\s*(?:
      (?P<name>[a-z_]+)\s*\(\s*(?P<args>[0-9,\s]+)\)
    | branching\s*<=\s*(?P<m>[0-9]+)\s*\(\s*(?P<bk>[0-9]+)\s*\)
)\s*$""", re.VERBOSE)


def parse_class(text: str, n: int) -> FrameClassSpec:
    """Parse ``"reflexive(1),branching<=2(1)"``; ``""`` or ``"all"`` is every frame.

    ``branching_at_most(k, m)`` is accepted as a long form of ``branching<=m(k)``.
    """
    preds = []
    text = text.strip()
    if text and text != "all":
        for item in _split(text):
            m = _ITEM.match(item)
            if m is None:
                raise ValueError(f"cannot parse frame predicate {item!r}")
            if m.group("m") is not None:
                preds.append(Predicate("branching_at_most", int(m.group("bk")), int(m.group("m"))))
                continue
            name = m.group("name")
            args = [int(a) for a in m.group("args").split(",") if a.strip()]
            if name == "branching_at_most" and len(args) == 2:
                preds.append(Predicate(name, args[0], args[1]))
            elif name in PREDICATES and name != "branching_at_most" and len(args) == 1:
                preds.append(Predicate(name, args[0]))
            else:
                raise ValueError(f"unknown frame predicate {item!r}")
    for p in preds:
        if not 1 <= p.k <= n:
            raise ValueError(f"{p}: relation index outside 1..{n}")
    return FrameClassSpec(n, tuple(preds))


def _split(text: str) -> list[str]:
    # split on commas outside parentheses
    items, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            items.append(cur)
            cur = ""
        else:
            cur += ch
    items.append(cur)
    return [i for i in items if i.strip()]


def _holds(frame: KripkeFrame, p: Predicate) -> bool:
    W = frame.worlds
    R = frame.relations[p.k]
    if p.name == "reflexive":
        return all((w, w) in R for w in W)
    if p.name == "symmetric":
        return all((v, w) in R for w, v in R)
    if p.name == "transitive":
        return all((w, u) in R for w, v in R for v2, u in R if v == v2)
    if p.name == "serial":
        return all(frame.successors(p.k, w) for w in W)
    if p.name == "linear":
        # successors of any world are pairwise comparable
        return all(u == v or (u, v) in R or (v, u) in R
                   for w in W for u in frame.successors(p.k, w)
                   for v in frame.successors(p.k, w))
    if p.name == "branching_at_most":
        return all(len(frame.successors(p.k, w)) <= p.m for w in W)
    raise ValueError(f"unknown predicate {p.name}")


def check_predicates(frame: KripkeFrame, spec: FrameClassSpec) -> bool:
    if frame.n != spec.n:
        raise ValueError(f"frame has {frame.n} relations, class expects {spec.n}")
    return all(_holds(frame, p) for p in spec.predicates)


def frames_of_size(spec: FrameClassSpec, size: int) -> Iterator[KripkeFrame]:
    """Labelled frames on worlds ``"0", ..., str(size - 1)`` in bitvector order.

    Bit ``(k - 1) * size**2 + i * size + j`` (least significant first) says
    whether world ``i`` sees world ``j`` through relation ``k``.
    """
    worlds = tuple(str(i) for i in range(size))
    pairs = [(k, worlds[i], worlds[j]) for k in range(1, spec.n + 1)
             for i in range(size) for j in range(size)]
    for value in range(2 ** len(pairs)):
        rels = {k: set() for k in range(1, spec.n + 1)}
        for b, (k, a, c) in enumerate(pairs):
            if value >> b & 1:
                rels[k].add((a, c))
        frame = KripkeFrame(worlds, spec.n, rels)
        if check_predicates(frame, spec):
            yield frame


def enumerate_frames(spec: FrameClassSpec, max_worlds: int,
                     min_worlds: int = 1) -> Iterator[KripkeFrame]:
    """Every frame of the class with ``min_worlds..max_worlds`` worlds, smallest first."""
    for size in range(min_worlds, max_worlds + 1):
        yield from frames_of_size(spec, size)


def subframe(frame: KripkeFrame, subset) -> KripkeFrame:
    keep = set(subset)
    if not keep:
        raise ValueError("a subframe needs at least one world")
    unknown = keep - set(frame.worlds)
    if unknown:
        raise ValueError(f"unknown worlds {sorted(unknown)}")
    worlds = tuple(w for w in frame.worlds if w in keep)
    rels = {k: {(a, b) for a, b in pairs if a in keep and b in keep}
            for k, pairs in frame.relations.items()}
    return KripkeFrame(worlds, frame.n, rels)


@dataclass(frozen=True)
class ClassVerdict:
    status: Status
    frame: KripkeFrame | None
    verdict: Verdict | None
    max_worlds: int
    max_size: int
    frames_checked: int

    def to_json(self) -> dict:
        out = {"schema": 1, "status": self.status.value,
               "budget": {"max_worlds": self.max_worlds, "max_size": self.max_size},
               "frames_checked": self.frames_checked}
        if self.frame is not None:
            out["frame"] = frame_to_json(self.frame)
        if self.verdict is not None and self.verdict.certificate is not None:
            out["certificate"] = self.verdict.certificate.to_json()
        return out


def diagonal(max_worlds: int, max_size: int) -> list[tuple[int, int]]:
    """(worlds, domain size) pairs by increasing sum, fewer worlds first."""
    cells = [(s, d) for s in range(1, max_worlds + 1) for d in range(1, max_size + 1)]
    return sorted(cells, key=lambda c: (c[0] + c[1], c[0]))


def _refute_cell(args):
    frame, f, modes, d = args
    return refute(frame, f, modes, d, exact_max=d)


def default_jobs() -> int:
    return max(1, int(os.environ.get("FINMOK_JOBS", "1")))


def class_refute(spec: FrameClassSpec, f: Formula, modes: Modes, max_worlds: int,
                 max_size: int, *, jobs: int | None = None) -> ClassVerdict:
    """Least refuting (frame, countermodel) pair within the budgets.

    Cells ``(s, d)`` are visited along anti-diagonals of ``s + d``; in cell
    ``(s, d)`` every class frame with ``s`` worlds is searched for models
    whose largest domain has exactly ``d`` elements, so each finite pair is
    reached after finitely many steps.  With ``jobs > 1`` the frames of a
    cell are searched in parallel; the reported pair is still the first in
    frame order.
    """
    jobs = default_jobs() if jobs is None else max(1, jobs)
    checked = 0
    pool = ProcessPoolExecutor(jobs) if jobs > 1 else None
    try:
        frames_by_size: dict[int, list[KripkeFrame]] = {}
        for s, d in diagonal(max_worlds, max_size):
            if s not in frames_by_size:
                frames_by_size[s] = list(frames_of_size(spec, s))
            frames = frames_by_size[s]
            work = [(fr, f, modes, d) for fr in frames]
            results = pool.map(_refute_cell, work, chunksize=4) if pool else map(_refute_cell, work)
            for frame, verdict in zip(frames, results):
                checked += 1
                if verdict.status is Status.COUNTERMODEL:
                    return ClassVerdict(Status.COUNTERMODEL, frame, verdict,
                                        max_worlds, max_size, checked)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return ClassVerdict(Status.UNKNOWN, None, None, max_worlds, max_size, checked)
