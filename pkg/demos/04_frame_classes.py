"""Searching a class of frames for a refutation.

The search sweeps (number of worlds, domain size) pairs diagonally, so
every finite frame and model size is reached eventually.  Finding nothing
within a budget proves nothing; finding something is a checked refutation.

Run: python demos/04_frame_classes.py
"""

from finmok import Modes, parse_formula
from finmok.frameclass import class_refute, enumerate_frames, parse_class

t_axiom = parse_formula("forall x. ([1] P(x) -> P(x))")
modes = Modes("expanding", "congruence")

for text in ("all", "reflexive(1)", "branching<=1(1)", "transitive(1),serial(1)"):
    spec = parse_class(text, 1)
    count = sum(1 for _ in enumerate_frames(spec, 3))
    result = class_refute(spec, t_axiom, modes, max_worlds=3, max_size=2)
    line = f"{text:26} {count:4} frames up to 3 worlds  -> {result.status.value}"
    if result.frame is not None:
        line += f" on {sorted(result.frame.relations[1])} over worlds {list(result.frame.worlds)}"
    print(line)
