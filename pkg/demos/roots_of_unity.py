"""Why the derivation-removing sum is truncated by nilpotence, not first zero.

In the quantum Weyl algebra A_1^q, d_n(y^m) is the q-binomial coefficient
[m choose n] times y^(m-n).  At a primitive l-th root of unity [l choose n]
vanishes for 0 < n < l, so d_1(y^l) = 0 while d_l(y^l) = 1.  Stopping the
sum at the first zero term would drop the correction.

    python demos/roots_of_unity.py
"""

from qore import CyclotomicField, OreSpec
from qore.removal import f_image

ell = 3
F = CyclotomicField(ell)
spec = OreSpec.build(F, ["y", "x"], tau={("x", "y"): "q"}, delta={("x", "y"): "1"}, qskew={"x": "q"})
hd = spec.higher_derivation("x")
y_l = spec.gen("y", ell)

print(f"q = zeta_{ell}")
for n in range(ell + 2):
    print(f"  d_{n}(y^{ell}) = {hd(n, y_l)}")
print("nilpotence index of y^3:", hd.nilpotence_index(y_l))
print()

fy = f_image(spec, spec.gen("y"))
print("f(y)   =", fy)
print("f(y^3) =", f_image(spec, y_l))
print("f(y)^3 =", fy**3)
