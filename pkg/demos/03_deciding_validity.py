"""Deciding validity on a fixed finite frame, in each semantics mode.

Equality can be read as a congruence that may merge elements (and must
keep them merged along the accessibility relation), or as identity.
Domains can expand along the relation or stay constant.  The same formula
can be valid in one reading and refuted in another; countermodels come
with a certificate that is re-checked independently.

Run: python demos/03_deciding_validity.py
"""

from finmok import KripkeFrame, Modes, decide_validity, parse_formula, verify_certificate
from finmok.decide import bound, refute

chain = KripkeFrame(("w", "v"), 1, {1: {("w", "v")}})

cases = [
    ("x = y -> [1](x = y)", Modes("expanding", "congruence")),
    ("x != y -> [1](x != y)", Modes("expanding", "identity")),
    ("x != y -> [1](x != y)", Modes("expanding", "congruence")),
    ("(forall x. [1] P(x)) -> [1] forall x. P(x)", Modes("locally_constant", "none")),
    ("(forall x. [1] P(x)) -> [1] forall x. P(x)", Modes("expanding", "none")),
]

for text, modes in cases:
    f = parse_formula(text)
    v = decide_validity(chain, f, modes)
    label = f"{modes.domains.value}/{modes.equality.value}"
    print(f"{text:45} {label:28} {v.status.value:12} bound {v.bound_used} "
          f"certified={v.certified}")
    if v.certificate is not None:
        m = v.certificate.model
        assert verify_certificate(v, chain, f, modes)
        print(f"    fails at {v.certificate.world}: domains "
              f"{ {w: sorted(d) for w, d in m.domains.items()} }", end="")
        if m.equiv is not None:
            print(f", classes { {w: [sorted(c) for c in cs] for w, cs in m.equiv.items()} }")
        else:
            print()

# refute is the bounded half: it never claims validity.
f = parse_formula("x != y -> [1](x != y)")
print("refute, identity, sizes <= 3:", refute(chain, f, Modes("expanding", "identity"), 3).status.value)
print("default bound for that formula on the chain:", bound(f, chain))
