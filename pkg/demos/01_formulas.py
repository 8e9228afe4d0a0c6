"""Parsing, printing and measuring formulas.

Run: python demos/01_formulas.py
"""

from finmok import parse_formula, print_formula
from finmok.errors import FormulaSyntaxError
from finmok.syntax import check_monadic, metrics, universal_closure

# Boxes and diamonds carry the index of their relation; n is the number of relations.
f = parse_formula("x = y -> [1](x = y)", n=1)
print("heredity of equality:", print_formula(f))
print("  closure:", print_formula(universal_closure(f)))
print("  signature:", check_monadic(f).value)

# A quantifier after a prefix operator scopes as far right as it can,
# so the antecedent of the Barcan formula needs brackets.
bf = parse_formula("(forall x. [1] P(x)) -> [1] forall x. P(x)")
mt = metrics(bf)
print("Barcan formula:", print_formula(bf))
print(f"  letters={mt.letters} variables={mt.variables} "
      f"modal depth={mt.modal_depth} quantifier rank={mt.quantifier_rank}")

print("binary letter:", check_monadic(parse_formula("R(x, y)")).value)

for bad in ("[3] P(x)", "P(x) & & Q(x)", "P(x) & P(x, y)"):
    try:
        parse_formula(bad, n=2)
    except FormulaSyntaxError as err:
        print(f"rejected {bad!r}: {err.message} (position {err.position})")
