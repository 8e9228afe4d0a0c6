"""Evaluating formulas in a hand-built model with expanding domains.

The model has two worlds w -> v.  The domain grows from {0} to {0, 1},
and P holds of 0 everywhere.  Every element of w is P at every successor,
yet v has an element that is not P, so the Barcan formula fails at w.

Run: python demos/02_model_checking.py
"""

from finmok import AugmentedModel, KripkeFrame, parse_formula, validate_model
from finmok.modelcheck import find_failure, satisfies, true_at

frame = KripkeFrame(("w", "v"), 1, {1: {("w", "v")}})
model = AugmentedModel(frame, domains={"w": {0}, "v": {0, 1}},
                       interp={"P": {"w": {(0,)}, "v": {(0,)}}},
                       equiv={"w": [{0}], "v": [{0}, {1}]},
                       domain_mode="expanding", equality_mode="congruence")
assert validate_model(model) == []

for text in ("forall x. [1] P(x)", "[1] forall x. P(x)", "<1> exists x. ~P(x)"):
    print(f"{text:28} at w: {satisfies(model, 'w', parse_formula(text))}")

bf = parse_formula("(forall x. [1] P(x)) -> [1] forall x. P(x)")
print("Barcan formula first fails at:", find_failure(model, bf))

# Open formulas are read through their universal closure.
print("x = y true at w:", true_at(model, "w", parse_formula("x = y")))
print("x = y at v under x=0, y=1:", satisfies(model, "v", parse_formula("x = y"), {"x": 0, "y": 1}))

# The validators list every broken condition rather than stopping at the first.
broken = AugmentedModel(frame, {"w": {0, 1}, "v": {0}}, {"P": {"w": {(0,)}, "v": set()}},
                        {"w": [{0, 1}], "v": [{0}]}, "expanding", "congruence")
for v in validate_model(broken):
    print("violation:", v.message)
