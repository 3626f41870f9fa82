"""The protocol-parameter linear program and the precision-boosting iteration.

Solves the two-variable LP in exact rational arithmetic, reproduces the
closed-form optimum, emits the feasibility-region grid (`polytope.csv`) and
the exponent-vs-prior-knowledge curves (`fqec_vs_c.csv`), and iterates the
repeat-and-update protocol towards its fixed point.
"""

from fractions import Fraction

from symsense.optimizer import (
    LPInstance,
    closed_form_optimum,
    p2_exponent,
    solve_lp,
    write_fqec_vs_c_csv,
    write_polytope_csv,
)
from symsense.protocols import baselines, run_protocol3

inst = LPInstance(c=Fraction(1, 2), q=Fraction(3, 2), eta=1, e1=0, e2=0)
alpha, gamma, value = solve_lp(inst)
print(f"LP optimum (c=1/2, q=3/2, e=0): alpha* = {alpha}, gamma* = {gamma}, "
      f"objective = {value}")
print(f"closed form agrees: {closed_form_optimum(inst) == (alpha, gamma)}")
print(f"repeated-protocol exponent: {p2_exponent(inst)} = {float(p2_exponent(inst)):.4f}")

snl, ghz = baselines(1000, eta=1.0, q=1.5, gamma_rounds=float(gamma))
print(f"baselines at eta=1: SNL exponent {snl:.3f}, repeated-GHZ exponent {ghz:.3f}")

for c in (0, Fraction(1, 10), Fraction(1, 5)):
    shaded = LPInstance(c, Fraction(3, 2), 1, Fraction(1, 10), Fraction(1, 10))
    sol = solve_lp(shaded)
    print(f"error budgets 0.1, prior c={float(c):.1f}: "
          f"{'feasible, optimum ' + str((sol[0], sol[1])) if sol else 'EMPTY'}")

write_polytope_csv(LPInstance(Fraction(1, 5), Fraction(3, 2), 1, Fraction(1, 10), Fraction(1, 10)),
                   "polytope.csv", grid=161)
write_fqec_vs_c_csv("fqec_vs_c.csv", qs=(1, 1.25, 1.5))
print("wrote polytope.csv and fqec_vs_c.csv")

print("\nprecision boosting from classical prior c_1 = 1/2 (exponents of the MSE):")
for e in (0, Fraction(1, 10)):
    cs = run_protocol3(0.5, 10, Fraction(3, 2), e, e)
    path = " -> ".join(f"{float(c):.4f}" for c in cs[:6])
    print(f"  e1 = e2 = {float(e):.1f}: {path} ... -> {float(cs[-1]):.4f}")
print("(errors = 0 converges to the Heisenberg fixed point c* = 1)")
