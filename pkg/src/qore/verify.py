"""Self-check suites behind ``qore verify``.

Each suite returns a list of ``Check`` records.  They are cheap versions of
the invariants exercised by the test suite, runnable on an installed copy.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from collections import Counter

from .errors import QoreError
from .families import (
    MULTI,
    ExponentAssignment,
    FamilyId,
    closed_form_pidegree,
    family_field,
    family_matrix,
    family_ore_spec,
)
from .ore import OreSpec, check_presentation, check_qskew, check_hd_properties, random_element
from .pidegree import (
    IntMatrix,
    brute_force_image,
    charpoly,
    exponent_matrix,
    image_cardinality,
    pi_degree,
    smith_normal_form,
)
from .qarith import LaurentIntPoly, T, t_binomial, t_integer
from .removal import canonical_scale, check_homomorphism, iterate_removal
from .scalars import CyclotomicField, GenericField, cyclotomic_poly, evaluate_at_root, random_scalar

SUITES = ("qarith", "scalars", "ore", "removal", "pidegree", "families")

# fixed exponent assignments used when a multiparameter family is specialized
DEFAULT_ASSIGN = {
    "weyl-multi": {"q1": 1, "q2": 2, "g12": 1},
    "kpq": {"q1": 1, "q2": 2, "p1": 2, "p2": 0, "g12": 1},
    "matrices-multi": {"lam": 1, "p21": 2},
}


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


def _run(name, fn) -> Check:
    try:
        res = fn()
    except (QoreError, ArithmeticError) as exc:
        return Check(name, False, f"{type(exc).__name__}: {exc}")
    if res is True or res is None:
        return Check(name, True)
    return Check(name, False, str(res))


def _first(bad):
    return True if not bad else f"counterexample {bad[0]}"


# -- qarith ----------------------------------------------------------------


def suite_qarith() -> list[Check]:
    def pascal():
        bad = []
        for n in range(2, 21):
            for m in range(1, n):
                lhs = t_binomial(n, m)
                a = t_binomial(n - 1, m - 1) + t_binomial(n - 1, m) * T ** m
                b = t_binomial(n - 1, m) + t_binomial(n - 1, m - 1) * T ** (n - m)
                if lhs != a or lhs != b:
                    bad.append((n, m))
        return _first(bad)

    def vanishing():
        bad = []
        for ell in range(2, 9):
            F = CyclotomicField(ell)
            for i in range(1, ell):
                if not evaluate_at_root(t_binomial(ell, i), F).is_zero():
                    bad.append((ell, i))
        return _first(bad)

    def integers():
        return _first([n for n in range(1, 30) if t_integer(n)(1) != n])

    return [
        _run("pascal identities, 0 < m < n <= 20", pascal),
        _run("binom(l, i) vanishes at a primitive l-th root, l <= 8", vanishing),
        _run("(n)_t at t = 1 is n", integers),
    ]


# -- scalars ---------------------------------------------------------------


def suite_scalars() -> list[Check]:
    rng = random.Random(7)

    def field_axioms(F):
        def go():
            bad = []
            for _ in range(40):
                a, b, c = (random_scalar(F, rng, 2) for _ in range(3))
                if a * (b + c) != a * b + a * c or (a * b) * c != a * (b * c):
                    bad.append((str(a), str(b), str(c)))
                if not a.is_zero() and a * a.inverse() != F.one():
                    bad.append(str(a))
            return _first(bad)

        return go

    def degrees():
        from math import gcd

        def phi(r):
            return sum(1 for k in range(1, r + 1) if gcd(k, r) == 1)

        return _first([r for r in range(1, 40) if cyclotomic_poly(r).degree() != phi(r)])

    def specialize_hom():
        G = GenericField(("q",))
        F = CyclotomicField(5, {"q": 1}, G)
        bad = []
        for _ in range(40):
            a, b = random_scalar(G, rng, 2), random_scalar(G, rng, 2)
            try:
                if F.specialize(a * b) != F.specialize(a) * F.specialize(b):
                    bad.append((str(a), str(b)))
            except QoreError:
                continue
        return _first(bad)

    return [
        _run("field axioms, generic", field_axioms(GenericField(("q", "p")))),
        _run("field axioms, Q(zeta_7)", field_axioms(CyclotomicField(7))),
        _run("deg Phi_r = phi(r), r < 40", degrees),
        _run("specialization is multiplicative", specialize_hom),
    ]


# -- ore -------------------------------------------------------------------


def a1_spec(field) -> OreSpec:
    return OreSpec.build(field, ["y", "x"], tau={("x", "y"): "q"}, delta={("x", "y"): "1"}, qskew={"x": "q"})


def suite_ore() -> list[Check]:
    def di_yi():
        bad = []
        for ell in range(2, 8):
            S = a1_spec(CyclotomicField(ell))
            hd = S.higher_derivation("x")
            for i in range(1, 2 * ell + 1):
                if hd(i, S.gen("y", i)) != S.one():
                    bad.append((ell, i))
        return _first(bad)

    def presentations():
        bad = []
        for kind in ("euclidean-odd", "euclidean-even", "weyl-multi", "weyl-single", "symplectic", "kpq", "matrices-single"):
            spec = family_ore_spec(FamilyId(kind, 2))
            bad += [(kind, p) for p in check_presentation(spec)]
        return _first(bad)

    def hd_axioms():
        rng = random.Random(3)
        S = family_ore_spec(FamilyId("weyl-single", 2), family_field(FamilyId("weyl-single", 2), 4))
        hd = S.higher_derivation(3)
        samples = [random_element(S, rng, upto=3) for _ in range(8)]
        rep = check_hd_properties(hd, samples)
        return True if rep.ok else rep.failures[0]

    return [
        _run("d_i(y^i) = 1 in A_1^q at roots of unity, i <= 2l", di_yi),
        _run("family presentations are consistent", presentations),
        _run("higher derivation identities", hd_axioms),
    ]


# -- removal ---------------------------------------------------------------


def a2_expected(spec: OreSpec):
    """Expected generators of the Ore set for A_2^{Q,Gamma}."""
    texts = ["x2", "x1", "(q2 - 1)*y2*x2 + (q1 - 1)*y1*x1 + 1", "(q1 - 1)*y1*x1 + 1"]
    return [canonical_scale(spec.element(t)) for t in texts]


def suite_removal(pairs: int = 20) -> list[Check]:
    def a2():
        spec = family_ore_spec(FamilyId("weyl-multi", 2))
        res = iterate_removal(spec)
        got = list(res.ore_generators)
        want = a2_expected(spec)
        if len(got) != 4 or any(w not in got for w in want):
            return f"generators {[str(g) for g in got]}"
        return True

    def a2_images():
        spec = family_ore_spec(FamilyId("weyl-multi", 2))
        res = iterate_removal(spec)
        phi, psi = res.steps[0], res.steps[1]
        L1, L2 = phi.source.localized_spec(), psi.source.localized_spec()
        want_phi = L1.element("y2 + (q2 - 1)^-1*((q1 - 1)*y1*x1 + 1)*x2^-1")
        want_psi = L2.element("y1 + (q1 - 1)^-1*x1^-1")
        bad = []
        if phi.images["y2"] != want_phi:
            bad.append(f"Phi(y2) = {phi.images['y2']}")
        if psi.images["y1"] != want_psi:
            bad.append(f"Psi(y1) = {psi.images['y1']}")
        for step, fixed in ((phi, ("y1", "x1", "x2")), (psi, ("x1", "y2", "x2"))):
            L = step.source.localized_spec()
            bad += [v for v in fixed if step.images[v] != L.gen(v)]
        return _first(bad)

    def homs():
        bad = []
        rng = random.Random(11)
        for kind in ("euclidean-odd", "weyl-multi", "matrices-single", "symplectic", "kpq"):
            fid = FamilyId(kind, 2)
            for r in (None, 3, 4, 5):
                F = family_field(fid, r, DEFAULT_ASSIGN.get(kind) if r else None)
                rep = check_homomorphism(family_ore_spec(fid, F), rng, pairs)
                bad += [(kind, r, f) for f in rep.failures]
        return _first(bad)

    return [
        _run("A_2 Ore set has the four expected generators", a2),
        _run("A_2 intermediate images Phi and Psi", a2_images),
        _run(f"f is a homomorphism and intertwines x ({pairs} pairs per case)", homs),
    ]


# -- pidegree --------------------------------------------------------------


def random_skew(rng, n, lo=-5, hi=5) -> IntMatrix:
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.randint(lo, hi)
            rows[i][j], rows[j][i] = v, -v
    return IntMatrix.of(rows)


def chi_matrix(n: int) -> IntMatrix:
    return IntMatrix.of([[0 if i == j else (1 if j > i else -1) for j in range(n)] for i in range(n)])


def suite_pidegree(samples: int = 60) -> list[Check]:
    rng = random.Random(5)

    def snf():
        bad = []
        for _ in range(samples):
            n = rng.randint(1, 6)
            A = random_skew(rng, n)
            res = smith_normal_form(A)
            d = res.invariant_factors
            if res.U @ A @ res.V != res.S or abs(res.U.det()) != 1 or abs(res.V.det()) != 1:
                bad.append(A.tolist())
            nz = [x for x in d if x]
            if any(b % a for a, b in zip(nz, nz[1:])) or d[len(nz):] != (0,) * (len(d) - len(nz)):
                bad.append(A.tolist())
            if any(c % 2 for c in Counter(nz).values()):
                bad.append(A.tolist())
        return _first(bad)

    def oracle():
        bad = []
        for _ in range(samples):
            n, ell = rng.randint(1, 4), rng.randint(1, 8)
            A = random_skew(rng, n)
            if image_cardinality(A, ell) != brute_force_image(A, ell):
                bad.append((A.tolist(), ell))
        return _first(bad)

    def chi():
        bad = []
        x = T
        half = {}
        for n in range(1, 7):
            p = (x + 1) ** n + (x - 1) ** n
            want = LaurentIntPoly({e: c // 2 for e, c in p.terms.items()})
            if charpoly(chi_matrix(n)) != want:
                bad.append(n)
            half[n] = want
        for n in range(3, 7):
            if half[n] != half[n - 1] * (x + 1) - (x - 1) ** (n - 1):
                bad.append(("recursion", n))
        return _first(bad)

    return [
        _run("SNF transforms, divisibility and pairing", snf),
        _run("image cardinality agrees with enumeration", oracle),
        _run("characteristic polynomial identity and recursion, n <= 6", chi),
    ]


# -- families --------------------------------------------------------------

CLOSED_RANGES = {
    "euclidean-odd": range(1, 6),
    "euclidean-even": range(2, 6),
    "weyl-single": range(1, 5),
    "matrices-single": range(2, 4),
    "symplectic": range(1, 5),
}


def shape_target(kind: str, n: int) -> Counter | None:
    """Expected multiset of invariant factors of a family matrix."""
    if kind == "euclidean-odd":
        if n % 2:
            return Counter({1: n + 1, 4: n - 1, 0: 1})
        return Counter({1: n, 2: 2, 4: n - 2, 0: 1})
    if kind == "symplectic":
        if n % 2 == 0:
            return Counter({1: n, 4: n})
        return Counter({1: n - 1, 2: 2, 4: n - 1})
    if kind == "euclidean-even" and n >= 2:
        if n % 2 == 0:
            return Counter({1: n, 4: n - 2, 0: 2})
        return Counter({1: n - 1, 2: 2, 4: n - 3, 0: 2})
    return None


def suite_families() -> list[Check]:
    def closed():
        bad = []
        for kind, ns in CLOSED_RANGES.items():
            for n in ns:
                fid = FamilyId(kind, n)
                B = family_matrix(fid)
                for r in range(2, 14):
                    got, want = pi_degree(B, r).pi_degree, closed_form_pidegree(fid, r)
                    if got != want:
                        bad.append((kind, n, r, got, want))
        return _first(bad)

    def shapes():
        bad = []
        for kind in ("euclidean-odd", "symplectic", "euclidean-even"):
            for n in range(1, 6):
                want = shape_target(kind, n)
                if want is None:
                    continue
                got = Counter(smith_normal_form(family_matrix(FamilyId(kind, n))).invariant_factors)
                if got != +want:
                    bad.append((kind, n, dict(got)))
        return _first(bad)

    def tori():
        bad = []
        for kind in ("euclidean-odd", "euclidean-even", "weyl-single", "weyl-multi", "symplectic", "kpq", "matrices-single", "matrices-multi"):
            for r in (3, 4, 5):
                fid = FamilyId(kind, 2)
                assign = DEFAULT_ASSIGN.get(kind)
                F = family_field(fid, r, assign)
                spec = family_ore_spec(fid, F)
                for i in range(spec.n):
                    if spec.has_delta(i):
                        check_qskew(spec, i)
                lam = iterate_removal(spec).lambda_final
                M = exponent_matrix(lam, F)
                if kind == "euclidean-odd":
                    # the field generator is a square root of q
                    M = IntMatrix.of([[v // 2 for v in row] for row in M.tolist()])
                B = family_matrix(fid, ExponentAssignment(assign, r) if kind in MULTI else None)
                if any((a - b) % r for ra, rb in zip(M.tolist(), B.tolist()) for a, b in zip(ra, rb)):
                    bad.append((kind, r))
        return _first(bad)

    return [
        _run("closed forms match the Smith-form PI degree", closed),
        _run("Smith-form shape targets, n <= 5", shapes),
        _run("removal torus matches the family matrix", tori),
    ]


def run_suite(name: str) -> list[tuple[str, Check]]:
    names = SUITES if name == "all" else (name,)
    out = []
    for n in names:
        fn = globals()[f"suite_{n}"]
        out += [(n, c) for c in fn()]
    return out
