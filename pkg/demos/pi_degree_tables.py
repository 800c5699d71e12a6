"""PI degrees of the single-parameter families at roots of unity.

For each family the integer exponent matrix is put in Smith form and the
PI degree read off as sqrt(h), where h is the size of the image of the
matrix mod r.  The closed forms sit beside it for comparison.

    python demos/pi_degree_tables.py
"""

from qore import FamilyId, closed_form_pidegree, family_matrix, pi_degree, smith_normal_form

FAMILIES = [
    ("euclidean-odd", range(1, 5)),
    ("euclidean-even", range(2, 5)),
    ("weyl-single", range(1, 4)),
    ("symplectic", range(1, 4)),
    ("matrices-single", range(2, 4)),
]
RS = range(2, 13)

for kind, ns in FAMILIES:
    print(kind)
    print("   n  " + "".join(f"{r:>7d} " for r in RS))
    for n in ns:
        fid = FamilyId(kind, n)
        B = family_matrix(fid)
        cells = []
        for r in RS:
            got = pi_degree(B, r).pi_degree
            cells.append(f"{got:>7d}" + (" " if got == closed_form_pidegree(fid, r) else "!"))
        print(f"  {n:2d}  " + "".join(cells))
    print()

# The invariant factors explain the parity cases: a factor 2 or 4 only
# matters when r is even, and a 4 cuts more when 4 divides r.
for n in (3, 4):
    d = smith_normal_form(family_matrix(FamilyId("euclidean-odd", n))).invariant_factors
    print(f"euclidean-odd n={n}: invariant factors {d}")
