"""Remove both derivations of the multiparameter quantized Weyl algebra A_2.

The algebra is k[y1][x1; tau, delta][y2; tau][x2; tau, delta] over the field
of rational functions in q1, q2 and gamma_12.  Each removal step replaces
the last generator carrying a derivation by an invertible generator, and the
images of the old generators tell us which elements must be inverted.

    python demos/a2_worked_example.py
"""

from qore import FamilyId, family_ore_spec
from qore.removal import iterate_removal

spec = family_ore_spec(FamilyId("weyl-multi", 2))
print("generators:", ", ".join(spec.vars))
print("delta_x1(y1) =", spec.apply_delta("x1", spec.gen("y1")))
print("delta_x2(y2) =", spec.apply_delta("x2", spec.gen("y2")))
print()

res = iterate_removal(spec)
for k, step in enumerate(res.steps, 1):
    print(f"step {k}: remove the derivation of {step.removed_var}")
    for v, img in step.images.items():
        if img != step.source.localized_spec().gen(v):
            print(f"    {v} -> {img}")
print()

print("the localization inverts the elements")
for g in res.ore_generators:
    print("   ", g)
print()

# with no derivations left we are in a quantum torus; x_j x_i = lambda_ji x_i x_j
print("commutation scalars lambda_ij of the torus:")
for v, row in zip(spec.vars, res.lambda_final):
    print(f"  {v:3s}", "  ".join(f"{str(c):>14s}" for c in row))
