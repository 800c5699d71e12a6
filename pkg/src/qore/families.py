"""The algebra families: Ore presentations, exponent matrices, closed forms.

Multiparameter families are presented over a generic field whose parameter
names are

* ``q1..qn`` and ``g12, g13, ...`` (gamma_ij for i < j; gamma_ji is the
  inverse) for the Weyl family,
* ``q1..qn``, ``p1..pn`` and ``g12, ...`` for the K^(P,Q) family,
* ``lam`` and ``p21, p31, p32, ...`` (p_ij for i > j; p_ji = p_ij^-1) for
  quantum matrices.

An exponent assignment maps the same names to integers: a parameter equal
to q^b has exponent b.  The single-parameter families are the
multiparameter constructions at a fixed assignment, except the odd
Euclidean space which needs q^(1/2) and has its own presentation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from .errors import DomainError, NoClosedForm, SpecError
from .ore import OreSpec
from .pidegree import IntMatrix
from .scalars import CyclotomicField, GenericField, ScalarField, cyclotomic_with_sqrt

KINDS = (
    "euclidean-odd",
    "euclidean-even",
    "weyl-multi",
    "weyl-single",
    "matrices-multi",
    "matrices-single",
    "symplectic",
    "kpq",
)

MULTI = ("weyl-multi", "matrices-multi", "kpq")


@dataclass(frozen=True)
class FamilyId:
    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown family {self.kind!r}; expected one of {', '.join(KINDS)}")
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise DomainError(f"family size must be a positive int, got {self.n!r}")
        if self.kind in MULTI + ("matrices-single",) and self.n > 9:
            raise DomainError("parameter and generator names support n <= 9")

    def __str__(self):
        return f"{self.kind}({self.n})"


@dataclass(frozen=True)
class ExponentAssignment:
    """Exponents of the family parameters relative to one root of unity."""

    exponents: Mapping[str, int] = field(default_factory=dict)
    r: int | None = None

    def __getitem__(self, name: str) -> int:
        try:
            return int(self.exponents[name])
        except KeyError:
            raise DomainError(f"exponent assignment lacks {name!r}") from None


def _vars_pairs(n: int) -> list[str]:
    out = []
    for i in range(1, n + 1):
        out += [f"y{i}", f"x{i}"]
    return out


def family_vars(fid: FamilyId) -> list[str]:
    n = fid.n
    if fid.kind == "euclidean-odd":
        return ["w"] + _vars_pairs(n)
    if fid.kind in ("matrices-multi", "matrices-single"):
        return [f"x{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
    return _vars_pairs(n)


def family_params(fid: FamilyId) -> tuple[str, ...]:
    """Parameter names of the generic field the family lives over."""
    n = fid.n
    if fid.kind == "euclidean-odd":
        return ("s",)
    if fid.kind == "weyl-multi":
        return tuple(f"q{i}" for i in range(1, n + 1)) + _gamma_names(n)
    if fid.kind == "kpq":
        return (
            tuple(f"q{i}" for i in range(1, n + 1))
            + tuple(f"p{i}" for i in range(1, n + 1))
            + _gamma_names(n)
        )
    if fid.kind == "matrices-multi":
        return ("lam",) + tuple(f"p{i}{j}" for i in range(1, n + 1) for j in range(1, i))
    return ("q",)


def _gamma_names(n: int) -> tuple[str, ...]:
    return tuple(f"g{i}{j}" for i in range(1, n + 1) for j in range(i + 1, n + 1))


def single_exponents(fid: FamilyId) -> dict[str, int]:
    """The exponent assignment that turns a multiparameter family into this one."""
    n = fid.n
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    if fid.kind == "weyl-single":
        return {**{f"q{i}": 1 for i in range(1, n + 1)}, **{f"g{i}{j}": 0 for i, j in pairs}}
    if fid.kind == "matrices-single":
        return {"lam": -2, **{f"p{j}{i}": 1 for i, j in pairs}}
    if fid.kind == "euclidean-even":
        return {
            **{f"q{i}": 0 for i in range(1, n + 1)},
            **{f"p{i}": -2 for i in range(1, n + 1)},
            **{f"g{i}{j}": -1 for i, j in pairs},
        }
    if fid.kind == "symplectic":
        return {
            **{f"q{i}": -2 for i in range(1, n + 1)},
            **{f"p{i}": 0 for i in range(1, n + 1)},
            **{f"g{i}{j}": 1 for i, j in pairs},
        }
    raise DomainError(f"{fid.kind} is not a single-parameter specialization")


def _multi_of(fid: FamilyId) -> FamilyId:
    base = {"weyl-single": "weyl-multi", "matrices-single": "matrices-multi"}.get(fid.kind, "kpq")
    return FamilyId(base, fid.n)


# ---------------------------------------------------------------------------
# exponent matrices


def _skew_from_upper(N: int, entry: Callable[[int, int], int]) -> IntMatrix:
    rows = [[0] * N for _ in range(N)]
    for a in range(N):
        for b in range(a + 1, N):
            v = entry(a, b)
            rows[a][b] = v
            rows[b][a] = -v
    return IntMatrix.of(rows)


def _euclidean_odd_matrix(n: int) -> IntMatrix:
    # w, then pairs (y_i, x_i); alternating +1/-1 to the right, -1/+1 to the left
    N = 2 * n + 1

    def entry(a, b):
        if a == 0:
            return 1 if b % 2 == 1 else -1
        if (a + 1) // 2 == (b + 1) // 2:
            return 0
        return 1 if b % 2 == 1 else -1

    return _skew_from_upper(N, entry)


def _pair_matrix(n: int, diag: Callable[[int], int], upper: Callable[[int, int], list[list[int]]]) -> IntMatrix:
    # rows/cols ordered y1, x1, y2, x2, ...
    N = 2 * n
    rows = [[0] * N for _ in range(N)]
    for i in range(n):
        b = diag(i + 1)
        rows[2 * i][2 * i + 1] = -b
        rows[2 * i + 1][2 * i] = b
        for j in range(i + 1, n):
            blk = upper(i + 1, j + 1)
            for s in range(2):
                for t in range(2):
                    rows[2 * i + s][2 * j + t] = blk[s][t]
                    rows[2 * j + t][2 * i + s] = -blk[s][t]
    return IntMatrix.of(rows)


def _gamma(ex: ExponentAssignment, i: int, j: int) -> int:
    return ex[f"g{i}{j}"] if i < j else -ex[f"g{j}{i}"]


def _weyl_matrix(n: int, ex: ExponentAssignment) -> IntMatrix:
    def upper(i, j):
        bij, bji, bi = _gamma(ex, i, j), _gamma(ex, j, i), ex[f"q{i}"]
        return [[bij, bji - bi], [bji, bij + bi]]

    return _pair_matrix(n, lambda i: ex[f"q{i}"], upper)


def _kpq_matrix(n: int, ex: ExponentAssignment) -> IntMatrix:
    def upper(i, j):
        bij, bji, bi, cj = _gamma(ex, i, j), _gamma(ex, j, i), ex[f"q{i}"], ex[f"p{j}"]
        return [[bij, bji - bi], [bji + cj, bi + bij - cj]]

    return _pair_matrix(n, lambda i: ex[f"q{i}"], upper)


def _matrices_matrix(n: int, ex: ExponentAssignment) -> IntMatrix:
    def p(i, j):
        if i == j:
            return 0
        return ex[f"p{i}{j}"] if i > j else -ex[f"p{j}{i}"]

    lam = ex["lam"]

    def entry(u, v):
        i, a = divmod(u, n)
        j, b = divmod(v, n)
        i, a, j, b = i + 1, a + 1, j + 1, b + 1
        if i == j:
            return p(b, a)
        # i < j here since u < v
        return p(i, j) + p(b, a) - (lam if b <= a else 0)

    return _skew_from_upper(n * n, entry)


def family_matrix(fid: FamilyId, assignment: ExponentAssignment | Mapping[str, int] | None = None) -> IntMatrix:
    """Skew-symmetric exponent matrix of the family's quantum torus."""
    if isinstance(assignment, Mapping):
        assignment = ExponentAssignment(dict(assignment))
    n = fid.n
    if fid.kind == "euclidean-odd":
        return _euclidean_odd_matrix(n)
    if fid.kind in MULTI:
        if assignment is None:
            raise DomainError(f"{fid.kind} needs an exponent assignment")
        ex = assignment
    else:
        ex = ExponentAssignment(single_exponents(fid))
        fid = _multi_of(fid)
    if fid.kind == "weyl-multi":
        return _weyl_matrix(n, ex)
    if fid.kind == "kpq":
        if ex.r is not None:
            for i in range(1, n + 1):
                if (ex[f"q{i}"] - ex[f"p{i}"]) % ex.r == 0:
                    raise DomainError(f"p{i} = q{i} at this root of unity")
        return _kpq_matrix(n, ex)
    return _matrices_matrix(n, ex)


# ---------------------------------------------------------------------------
# Ore presentations


def family_field(fid: FamilyId, r: int | None = None, assign: Mapping[str, int] | None = None) -> ScalarField:
    """The generic field of the family, or its specialization at order r."""
    params = family_params(fid)
    if fid.kind == "euclidean-odd":
        return GenericField(params, sqrt=True) if r is None else cyclotomic_with_sqrt(r)
    generic = GenericField(params)
    if r is None:
        return generic
    if fid.kind in MULTI:
        if assign is None:
            raise DomainError(f"{fid.kind} needs an exponent assignment at a root of unity")
        return CyclotomicField(r, dict(assign), generic)
    return CyclotomicField(r, {"q": 1}, generic)


def _euclidean_odd_spec(n: int, field: ScalarField) -> OreSpec:
    vars = family_vars(FamilyId("euclidean-odd", n))
    tau: dict = {}
    delta: dict = {}
    qskew: dict = {}
    for i in range(1, n + 1):
        yi, xi = f"y{i}", f"x{i}"
        tau[(yi, "w")] = "q^-1"
        tau[(xi, "w")] = "q"
        for j in range(1, i):
            tau[(yi, f"y{j}")] = "q^-1"
            tau[(yi, f"x{j}")] = "q^-1"
            tau[(xi, f"y{j}")] = "q"
            tau[(xi, f"x{j}")] = "q"
        tau[(xi, yi)] = "1"
        d = "(s - s^3)*w^2"
        for l in range(1, i):
            d += f" + (1 - q^2)*y{l}*x{l}"
        delta[(xi, yi)] = d
        qskew[xi] = "q^-2"
    return OreSpec.build(field, vars, tau, delta, qskew)


def _weyl_spec(n: int, field: ScalarField, par: Callable[[str], object]) -> OreSpec:
    vars = _vars_pairs(n)

    def gam(i, j):
        return par(f"g{i}{j}") if i < j else par(f"g{j}{i}") ** -1

    tau: dict = {}
    delta: dict = {}
    qskew: dict = {}
    for i in range(1, n + 1):
        yi, xi = f"y{i}", f"x{i}"
        for j in range(1, i):
            q = par(f"q{j}")
            tau[(yi, f"y{j}")] = gam(i, j)
            tau[(yi, f"x{j}")] = gam(j, i)
            tau[(xi, f"y{j}")] = q * gam(j, i)
            tau[(xi, f"x{j}")] = q ** -1 * gam(i, j)
        tau[(xi, yi)] = par(f"q{i}")
        qs = [(str(par(f"q{l}") - 1), l) for l in range(1, i)]
        delta[(xi, yi)] = " + ".join(["1"] + [f"({c})*y{l}*x{l}" for c, l in qs])
        qskew[xi] = par(f"q{i}")
    return OreSpec.build(field, vars, tau, delta, qskew)


def _kpq_spec(n: int, field: ScalarField, par: Callable[[str], object]) -> OreSpec:
    vars = _vars_pairs(n)

    def gam(i, j):
        return par(f"g{i}{j}") if i < j else par(f"g{j}{i}") ** -1

    tau: dict = {}
    delta: dict = {}
    qskew: dict = {}
    for i in range(1, n + 1):
        yi, xi = f"y{i}", f"x{i}"
        pi = par(f"p{i}")
        for j in range(1, i):
            qj = par(f"q{j}")
            tau[(yi, f"y{j}")] = gam(i, j)
            tau[(yi, f"x{j}")] = pi ** -1 * gam(j, i)
            tau[(xi, f"y{j}")] = qj * gam(j, i)
            tau[(xi, f"x{j}")] = qj ** -1 * pi * gam(i, j)
        qi = par(f"q{i}")
        tau[(xi, yi)] = qi
        if qi == pi:
            raise DomainError(f"K^(P,Q) needs p{i} != q{i}")
        terms = [f"({par(f'q{l}') - par(f'p{l}')})*y{l}*x{l}" for l in range(1, i)]
        if terms:
            delta[(xi, yi)] = " + ".join(terms)
        qskew[xi] = qi * pi ** -1
    return OreSpec.build(field, vars, tau, delta, qskew)


def _matrices_spec(n: int, field: ScalarField, par: Callable[[str], object]) -> OreSpec:
    vars = family_vars(FamilyId("matrices-multi", n))
    one = field.generic().one()

    def p(i, j):
        if i == j:
            return one
        return par(f"p{i}{j}") if i > j else par(f"p{j}{i}") ** -1

    lam = par("lam")
    tau: dict = {}
    delta: dict = {}
    qskew: dict = {}
    for l in range(1, n + 1):
        for m in range(1, n + 1):
            for i in range(1, l + 1):
                for j in range(1, n + 1):
                    if (i, j) >= (l, m):
                        continue
                    key = (f"x{l}{m}", f"x{i}{j}")
                    if i == l:
                        tau[key] = p(j, m)
                    elif m > j:
                        tau[key] = p(l, i) * p(j, m)
                        delta[key] = f"({(lam - 1) * p(l, i)})*x{i}{m}*x{l}{j}"
                    else:
                        tau[key] = lam * p(l, i) * p(j, m)
            if l > 1 and m > 1:
                qskew[f"x{l}{m}"] = lam ** -1
    return OreSpec.build(field, vars, tau, delta, qskew)


def family_ore_spec(fid: FamilyId, field: ScalarField | None = None) -> OreSpec:
    """Ore presentation of the family over ``field`` (the generic field by default)."""
    if field is None:
        field = family_field(fid)
    g = field.generic()
    if fid.kind == "euclidean-odd":
        if not (isinstance(g, GenericField) and g.sqrt):
            raise DomainError("the odd Euclidean family needs a field with q^(1/2)")
        return _euclidean_odd_spec(fid.n, field)
    if fid.kind in MULTI:
        par = g.gen
        kind = fid.kind
    else:
        ex = single_exponents(fid)
        q = g.gen("q")
        par = lambda name: q ** ex[name]  # noqa: E731
        kind = _multi_of(fid).kind
    try:
        if kind == "weyl-multi":
            spec = _weyl_spec(fid.n, field, par)
        elif kind == "kpq":
            spec = _kpq_spec(fid.n, field, par)
        else:
            spec = _matrices_spec(fid.n, field, par)
    except SpecError:
        raise
    if kind == "kpq" and isinstance(field, CyclotomicField):
        for i in range(spec.n):
            if spec.vars[i].startswith("x") and spec.qskew[i] == field.one():
                raise DomainError(f"p = q for {spec.vars[i]} at this root of unity")
    return spec


# ---------------------------------------------------------------------------
# closed forms


def closed_form_pidegree(fid: FamilyId, r: int) -> int:
    """PI degree predicted by the closed-form theorems, q a primitive r-th root."""
    if not isinstance(r, int) or r < 1:
        raise DomainError(f"root order must be a positive int, got {r!r}")
    n = fid.n
    odd = r % 2 == 1
    four = r % 4 == 0
    if fid.kind == "euclidean-odd":
        if odd:
            return r ** n
        return r ** n // 2 ** (n - 1 if four else n // 2)
    if fid.kind == "euclidean-even":
        if n < 2:
            raise NoClosedForm("the even Euclidean formula needs n >= 2")
        if odd:
            return r ** (n - 1)
        return r ** (n - 1) // 2 ** (n - 2 if four else (n - 1) // 2)
    if fid.kind == "weyl-single":
        return r ** n
    if fid.kind == "symplectic":
        if odd:
            return r ** n
        return r ** n // 2 ** (n if four else (n + 1) // 2)
    if fid.kind == "matrices-single":
        e = n * (n - 1) // 2
        if odd:
            return r ** e
        return r ** e // 2 ** ((n - 1) * (n - 2) // 2)
    raise NoClosedForm(f"no closed form for the multiparameter family {fid.kind}")
