"""Acceptance criteria.  Each test carries an ``acceptance`` marker; the
terminal summary prints one PASS/FAIL line per criterion."""

import random

import pytest

from finmok.cli import run, run_entry, shipped_corpus
from finmok.decide import (Modes, Status, decide_validity, enumerate_models, refute,
                           verify_certificate)
from finmok.errors import NonMonadicError
from finmok.frameclass import (FrameClassSpec, check_predicates, class_refute,
                               enumerate_frames, frames_of_size, parse_class)
from finmok.semantics import KripkeFrame, frame_to_json
from finmok.syntax import parse_formula
from oracle import naive_refutable
from strategies import random_formula, random_frame

HEREDITY = parse_formula("x = y -> [1](x = y)")
SEPARATION = parse_formula("x != y -> [1](x != y)")
BF1 = parse_formula("(forall x. [1] P(x)) -> [1] forall x. P(x)")
CBF = parse_formula("[1] (forall x. P(x)) -> forall x. [1] P(x)")
T_AXIOM = parse_formula("forall x. ([1] P(x) -> P(x))")

CHAIN = KripkeFrame(("w", "v"), 1, {1: {("w", "v")}})
ALL1 = FrameClassSpec(1)
SMALL_FRAMES = list(enumerate_frames(ALL1, 2))

FOUR_MODES = [Modes(d, e) for d in ("expanding", "locally_constant")
              for e in ("congruence", "identity")]


def _checked(verdict, frame, f, modes):
    if verdict.status is Status.COUNTERMODEL:
        assert verify_certificate(verdict, frame, f, modes)
    return verdict


# ---------------------------------------------------------------------------
# Equality heredity

def _three_world_frames():
    rng = random.Random(20240601)
    return [random_frame(rng, 3, p=rng.choice([0.2, 0.4, 0.6])) for _ in range(20)]


@pytest.mark.acceptance("equality heredity")
@pytest.mark.parametrize("equality", ["congruence", "identity"])
def test_heredity_small_frames(equality):
    modes = Modes("expanding", equality)
    assert len(SMALL_FRAMES) == 2 + 16
    for frame in SMALL_FRAMES:
        v = _checked(decide_validity(frame, HEREDITY, modes), frame, HEREDITY, modes)
        assert v.status is Status.VALID and v.certified, frame_to_json(frame)


@pytest.mark.acceptance("equality heredity")
@pytest.mark.parametrize("equality", ["congruence", "identity"])
def test_heredity_random_three_world_frames(equality):
    modes = Modes("expanding", equality)
    for frame in _three_world_frames():
        v = _checked(decide_validity(frame, HEREDITY, modes), frame, HEREDITY, modes)
        assert v.status is Status.VALID and v.certified, frame_to_json(frame)


# ---------------------------------------------------------------------------
# Identity / congruence separation

@pytest.mark.acceptance("identity/congruence separation")
def test_separation_identity_unknown():
    v = refute(CHAIN, SEPARATION, Modes("expanding", "identity"), 3)
    assert v.status is Status.UNKNOWN


@pytest.mark.acceptance("identity/congruence separation")
def test_separation_congruence_countermodel():
    modes = Modes("expanding", "congruence")
    v = refute(CHAIN, SEPARATION, modes, 2)
    assert v.status is Status.COUNTERMODEL
    assert max(len(d) for d in v.certificate.model.domains.values()) <= 2
    assert verify_certificate(v, CHAIN, SEPARATION, modes)


# ---------------------------------------------------------------------------
# Barcan / domain-mode separation

@pytest.mark.acceptance("Barcan/domain-mode separation")
@pytest.mark.parametrize("equality", ["congruence", "identity", "none"])
def test_barcan_constant_valid(equality):
    v = decide_validity(CHAIN, BF1, Modes("locally_constant", equality))
    assert v.status is Status.VALID and v.certified


@pytest.mark.acceptance("Barcan/domain-mode separation")
@pytest.mark.parametrize("equality", ["congruence", "identity", "none"])
def test_barcan_expanding_countermodel(equality):
    modes = Modes("expanding", equality)
    v = decide_validity(CHAIN, BF1, modes)
    assert v.status is Status.COUNTERMODEL
    m = v.certificate.model
    assert (len(m.domains["w"]), len(m.domains["v"])) == (1, 2)
    assert verify_certificate(v, CHAIN, BF1, modes)


@pytest.mark.acceptance("Barcan/domain-mode separation")
@pytest.mark.parametrize("equality", ["congruence", "none"])
def test_converse_barcan_small_frames(equality):
    modes = Modes("expanding", equality)
    for frame in SMALL_FRAMES:
        v = _checked(decide_validity(frame, CBF, modes), frame, CBF, modes)
        assert v.status is Status.VALID and v.certified, frame_to_json(frame)


# ---------------------------------------------------------------------------
# Propositional correspondence

def _reflexive(frame):
    return all((w, w) in frame.relations[1] for w in frame.worlds)


@pytest.mark.acceptance("propositional correspondence")
@pytest.mark.parametrize("modes", [Modes("expanding", "congruence"), Modes("expanding", "none")])
def test_t_axiom_on_two_world_frames(modes):
    frames = list(frames_of_size(ALL1, 2))
    assert len(frames) == 16
    valid = []
    for frame in frames:
        v = _checked(decide_validity(frame, T_AXIOM, modes), frame, T_AXIOM, modes)
        oracle = naive_refutable(frame, T_AXIOM, False, modes.equality.value)
        assert (v.status is Status.COUNTERMODEL) == oracle
        if v.status is Status.VALID:
            valid.append(frame)
    assert len(valid) == 4
    assert all(_reflexive(f) for f in valid)


@pytest.mark.acceptance("propositional correspondence")
def test_t_axiom_reflexive_class_unknown():
    spec = parse_class("reflexive(1)", 1)
    cv = class_refute(spec, T_AXIOM, Modes("expanding", "congruence"), 3, 2)
    assert cv.status is Status.UNKNOWN
    # 1 + 4 + 64 reflexive frames with at most 3 worlds
    assert len(list(enumerate_frames(spec, 3))) == 69


# ---------------------------------------------------------------------------
# Oracle equivalence

def _oracle_cases():
    rng = random.Random(7)
    cases = []
    while len(cases) < 240:
        f = random_formula(rng, depth=rng.randint(1, 4), modal_budget=2,
                           letters=("P",), variables=("x", "y"))
        frame = random_frame(rng, 2, p=rng.choice([0.3, 0.5, 0.7]))
        cases.append((f, frame))
    # formulas whose status depends on the mode, on every two-world frame
    for text in ("x != y -> [1](x != y)", "(forall x. [1] P(x)) -> [1] forall x. P(x)",
                 "x = y -> [1](x = y)", "x = y", "<1> exists x. P(x) -> exists x. <1> P(x)",
                 "exists x. exists y. x != y", "P(x) & x = y -> P(y)"):
        f = parse_formula(text)
        cases += [(f, frame) for frame in frames_of_size(ALL1, 2)]
    return cases


ORACLE_CASES = _oracle_cases()


@pytest.mark.acceptance("oracle equivalence")
@pytest.mark.parametrize("modes", FOUR_MODES, ids=lambda m: f"{m.domains.value}-{m.equality.value}")
def test_oracle_equivalence(modes):
    constant = modes.domains.value == "locally_constant"
    disagreements = []
    for f, frame in ORACLE_CASES:
        v = _checked(refute(frame, f, modes, 2), frame, f, modes)
        found = v.status is Status.COUNTERMODEL
        if found != naive_refutable(frame, f, constant, modes.equality.value, universe=2):
            disagreements.append((f, frame))
    assert len(ORACLE_CASES) >= 200
    assert disagreements == []


@pytest.mark.acceptance("oracle equivalence")
@pytest.mark.parametrize("domains", ["expanding", "locally_constant"])
def test_oracle_equivalence_without_equality(domains):
    modes = Modes(domains, "none")
    rng = random.Random(11)
    for _ in range(200):
        f = random_formula(rng, depth=rng.randint(1, 4), equality=False)
        frame = random_frame(rng, 2)
        v = _checked(refute(frame, f, modes, 2), frame, f, modes)
        assert (v.status is Status.COUNTERMODEL) == \
            naive_refutable(frame, f, domains == "locally_constant", "none", universe=2)


# ---------------------------------------------------------------------------
# Certificate soundness

@pytest.mark.acceptance("certificate soundness")
def test_corpus_certificates():
    for entry in shipped_corpus()["entries"]:
        status, ok = run_entry(entry)
        assert ok, entry["name"]
        assert status == entry["expect"], entry["name"]


@pytest.mark.acceptance("certificate soundness")
def test_random_sweep_certificates():
    rng = random.Random(99)
    produced = 0
    for _ in range(300):
        n = rng.randint(1, 2)
        frame = random_frame(rng, rng.randint(1, 3), n=n)
        modes = Modes(rng.choice(["expanding", "locally_constant"]),
                      rng.choice(["congruence", "identity", "none"]))
        f = random_formula(rng, n=n, depth=3, letters=("P", "Q"),
                           equality=modes.equality.value != "none")
        for v in (refute(frame, f, modes, 2),
                  decide_validity(frame, f, modes, bound_override=3, fast=True)):
            if v.status is Status.COUNTERMODEL:
                produced += 1
                assert verify_certificate(v, frame, f, modes)
    assert produced > 100


@pytest.mark.acceptance("certificate soundness")
def test_class_search_certificates():
    rng = random.Random(5)
    produced = 0
    for spec_text in ("all", "reflexive(1)", "transitive(1)", "branching<=1(1)", "serial(1)"):
        spec = parse_class(spec_text, 1)
        for _ in range(8):
            f = random_formula(rng, depth=3)
            modes = Modes("expanding", rng.choice(["congruence", "identity"]))
            cv = class_refute(spec, f, modes, 2, 2)
            if cv.status is Status.COUNTERMODEL:
                produced += 1
                assert check_predicates(cv.frame, spec)
                assert verify_certificate(cv.verdict, cv.frame, f, modes)
    assert produced > 0


# ---------------------------------------------------------------------------
# Counting checks

@pytest.mark.acceptance("counting checks")
def test_frame_counts():
    assert len(list(enumerate_frames(ALL1, 1))) == 2
    assert len(list(frames_of_size(ALL1, 2))) == 16
    assert len(list(frames_of_size(parse_class("branching_at_most(1,1)", 1), 2))) == 9


@pytest.mark.acceptance("counting checks")
def test_model_counts():
    point = KripkeFrame(("w",), 1, {1: set()})
    assert len(list(enumerate_models(point, {"w": 1}, Modes("expanding", "none"), {"P": 1}))) == 2
    assert len(list(enumerate_models(point, {"w": 2}, Modes("expanding", "congruence")))) == 2


# ---------------------------------------------------------------------------
# Non-monadic guard

BINARY = parse_formula("forall x. forall y. (R(x, y) -> [1] R(x, y))")


@pytest.mark.acceptance("non-monadic guard")
def test_decide_refuses_binary_letters():
    with pytest.raises(NonMonadicError):
        decide_validity(CHAIN, BINARY, Modes("expanding", "none"))


@pytest.mark.acceptance("non-monadic guard")
def test_cli_exit_code(tmp_path, capsys):
    path = tmp_path / "chain.json"
    path.write_text('{"n": 1, "worlds": ["w", "v"], "relations": {"1": [["w", "v"]]}}')
    code = run(["decide", "--frame", str(path), "--formula", "R(x, y) -> [1] R(x, y)",
                "--equality", "none"])
    assert code == 65
    assert capsys.readouterr().out == ""


@pytest.mark.acceptance("non-monadic guard")
def test_refute_still_sound():
    modes = Modes("expanding", "none")
    v = refute(CHAIN, BINARY, modes, 2)
    assert v.status is Status.COUNTERMODEL
    assert verify_certificate(v, CHAIN, BINARY, modes)
