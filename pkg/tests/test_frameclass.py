import random
from itertools import product

import pytest
from hypothesis import given

from finmok.decide import Modes, Status, verify_certificate
from finmok.frameclass import (SUBFRAME_CLOSED, FrameClassSpec, Predicate, check_predicates,
                               class_refute, diagonal, enumerate_frames, frames_of_size,
                               parse_class, subframe)
from finmok.semantics import KripkeFrame
from finmok.syntax import parse_formula
from strategies import random_frame, seeds

T_AXIOM = parse_formula("forall x. ([1] P(x) -> P(x))")
ALL1 = FrameClassSpec(1)


def brute_frames(size, n=1):
    """Every labelled n-frame on ``size`` worlds, built from the powerset directly."""
    worlds = tuple(str(i) for i in range(size))
    pairs = [(a, b) for a in worlds for b in worlds]
    for choice in product(*[product((False, True), repeat=len(pairs)) for _ in range(n)]):
        yield KripkeFrame(worlds, n, {k + 1: {p for p, on in zip(pairs, bits) if on}
                                      for k, bits in enumerate(choice)})


class TestParseClass:
    def test_forms(self):
        assert parse_class("all", 1) == FrameClassSpec(1)
        assert parse_class("reflexive(1),branching<=2(1)", 1).predicates == (
            Predicate("reflexive", 1), Predicate("branching_at_most", 1, 2))
        assert parse_class("branching_at_most(2, 3)", 2).predicates == (
            Predicate("branching_at_most", 2, 3),)

    def test_round_trip(self):
        spec = parse_class("transitive(1), linear(2), branching<=1(2)", 2)
        assert parse_class(str(spec), 2) == spec

    @pytest.mark.parametrize("text", ["reflexive(3)", "dense(1)", "reflexive", "serial(1,2)"])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            parse_class(text, 2)


class TestPredicates:
    def test_reflexive_point(self):
        loop = KripkeFrame(("w",), 1, {1: {("w", "w")}})
        assert check_predicates(loop, parse_class("reflexive(1)", 1))
        assert not check_predicates(loop, parse_class("branching<=0(1)", 1))

    def test_chain(self, chain):
        assert check_predicates(chain, parse_class("branching<=1(1)", 1))
        assert not check_predicates(chain, parse_class("reflexive(1)", 1))

    def test_modal_count_mismatch(self, chain):
        with pytest.raises(ValueError):
            check_predicates(chain, FrameClassSpec(2))

    def test_others(self):
        fork = KripkeFrame(("0", "1", "2"), 1, {1: {("0", "1"), ("0", "2")}})
        assert not check_predicates(fork, parse_class("linear(1)", 1))
        assert check_predicates(fork, parse_class("transitive(1)", 1))
        assert not check_predicates(fork, parse_class("serial(1)", 1))
        assert not check_predicates(fork, parse_class("symmetric(1)", 1))
        cycle = KripkeFrame(("0", "1"), 1, {1: {("0", "1"), ("1", "0")}})
        assert check_predicates(cycle, parse_class("symmetric(1),serial(1),linear(1)", 1))
        assert not check_predicates(cycle, parse_class("transitive(1)", 1))


class TestEnumerateFrames:
    def test_counts(self):
        assert len(list(enumerate_frames(ALL1, 1))) == 2
        assert len(list(frames_of_size(ALL1, 2))) == 16
        assert len(list(frames_of_size(parse_class("branching_at_most(1,1)", 1), 2))) == 9

    @pytest.mark.parametrize("n,s", [(1, 1), (1, 2), (2, 1), (2, 2)])
    def test_closed_form(self, n, s):
        assert len(list(frames_of_size(FrameClassSpec(n), s))) == 2 ** (n * s * s)

    @pytest.mark.parametrize("text", ["branching<=1(1)", "reflexive(1)", "transitive(1)",
                                      "linear(1),serial(1)"])
    def test_matches_brute_force_filter(self, text):
        spec = parse_class(text, 1)
        for s in (1, 2, 3):
            expected = {f for f in brute_frames(s) if check_predicates(f, spec)}
            got = list(frames_of_size(spec, s))
            assert len(got) == len(set(got)) == len(expected)
            assert set(got) == expected

    def test_order(self):
        frames = list(enumerate_frames(ALL1, 2))
        assert [len(f.worlds) for f in frames] == [1] * 2 + [2] * 16
        assert frames[0].relations[1] == frozenset()
        assert frames[1].relations[1] == {("0", "0")}
        assert frames[2].relations[1] == frozenset()
        assert frames[3].relations[1] == {("0", "0")}
        assert frames[4].relations[1] == {("0", "1")}


class TestSubframe:
    def test_restrict_to_successor(self, chain):
        sub = subframe(chain, {"v"})
        assert sub.worlds == ("v",)
        assert sub.relations[1] == frozenset()

    def test_identity(self, chain):
        assert subframe(chain, chain.worlds) == chain

    def test_empty(self, chain):
        with pytest.raises(ValueError):
            subframe(chain, set())

    @given(seeds)
    def test_closed_predicates(self, seed):
        rng = random.Random(seed)
        frame = random_frame(rng, rng.randint(1, 4), n=2, p=rng.random())
        subset = [w for w in frame.worlds if rng.random() < 0.6] or [frame.worlds[0]]
        sub = subframe(frame, subset)
        for name in SUBFRAME_CLOSED:
            for k in (1, 2):
                p = Predicate(name, k, rng.randint(0, 2) if name == "branching_at_most" else None)
                spec = FrameClassSpec(2, (p,))
                if check_predicates(frame, spec):
                    assert check_predicates(sub, spec), (p, frame, subset)

    def test_seriality_is_not_closed(self, chain):
        loop_end = KripkeFrame(("w", "v"), 1, {1: {("w", "v"), ("v", "v")}})
        spec = parse_class("serial(1)", 1)
        assert check_predicates(loop_end, spec)
        assert not check_predicates(subframe(loop_end, {"w"}), spec)


class TestClassRefute:
    def test_diagonal(self):
        assert diagonal(2, 2) == [(1, 1), (1, 2), (2, 1), (2, 2)]
        cells = diagonal(3, 3)
        assert len(cells) == 9
        assert [a + b for a, b in cells] == sorted(a + b for a, b in cells)

    def test_irreflexive_point_refutes_t(self):
        modes = Modes("expanding", "congruence")
        cv = class_refute(ALL1, T_AXIOM, modes, 1, 1)
        assert cv.status is Status.COUNTERMODEL
        assert cv.frame.relations[1] == frozenset()
        m = cv.verdict.certificate.model
        assert m.domains == {"0": {0}}
        assert m.extension("P", "0") == frozenset()
        assert verify_certificate(cv.verdict, cv.frame, T_AXIOM, modes)

    def test_reflexive_class_unknown(self):
        spec = parse_class("reflexive(1)", 1)
        cv = class_refute(spec, T_AXIOM, Modes("expanding", "congruence"), 2, 2)
        assert cv.status is Status.UNKNOWN
        assert cv.frames_checked > 0

    def test_barcan(self, bf1):
        modes = Modes("expanding", "none")
        cv = class_refute(ALL1, bf1, modes, 2, 2)
        assert cv.status is Status.COUNTERMODEL
        assert cv.frame.worlds == ("0", "1")
        assert check_predicates(cv.frame, ALL1)
        m = cv.verdict.certificate.model
        w = cv.verdict.certificate.world
        assert len(m.domains[w]) == 1
        assert verify_certificate(cv.verdict, cv.frame, bf1, modes)

    def test_certificate_respects_class(self):
        spec = parse_class("transitive(1),branching<=1(1)", 1)
        f = parse_formula("forall x. ([1] P(x) -> [1][1] P(x))")
        modes = Modes("expanding", "none")
        # valid on transitive frames: search comes back empty
        assert class_refute(spec, f, modes, 3, 1).status is Status.UNKNOWN
        g = parse_formula("forall x. (P(x) -> [1] P(x))")
        cv = class_refute(spec, g, modes, 2, 2)
        assert cv.status is Status.COUNTERMODEL
        assert check_predicates(cv.frame, spec)
        assert verify_certificate(cv.verdict, cv.frame, g, modes)

    def test_larger_budget_keeps_status(self, bf1):
        modes = Modes("expanding", "none")
        small = class_refute(ALL1, bf1, modes, 2, 2)
        big = class_refute(ALL1, bf1, modes, 3, 2)
        assert small.status is big.status is Status.COUNTERMODEL

    def test_parallel_matches_serial(self, bf1):
        modes = Modes("expanding", "none")
        serial = class_refute(ALL1, bf1, modes, 2, 2, jobs=1)
        parallel = class_refute(ALL1, bf1, modes, 2, 2, jobs=2)
        assert (parallel.frame, parallel.verdict.certificate) == \
            (serial.frame, serial.verdict.certificate)

    def test_json(self, bf1):
        doc = class_refute(ALL1, bf1, Modes("expanding", "none"), 2, 2).to_json()
        assert doc["status"] == "countermodel"
        assert doc["budget"] == {"max_worlds": 2, "max_size": 2}
        assert "failing_world" in doc["certificate"]
