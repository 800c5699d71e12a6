"""Iterated Ore extensions with scalar automorphisms.

A presentation is an ordered list of generators x_0 < x_1 < ... < x_{N-1}
together with

* ``lam[i][j]``: x_i x_j = lam[i][j] x_j x_i + delta_i(x_j) for j < i, so
  tau_i(x_j) = lam[i][j] x_j; the matrix satisfies lam[i][j] lam[j][i] = 1;
* ``delta[(i, j)]``: the element delta_i(x_j), written in x_0..x_{i-1};
* ``qskew[i]``: the declared q with delta_i tau_i = q tau_i delta_i;
* ``invertible``: generators allowed negative exponents (their delta and
  every delta applied to them must vanish);
* ``localized``: the last generator may carry negative exponents even
  though its derivation is nonzero.  Such elements are the right fractions
  r x^(-m) of the localization at the powers of the last generator.

Elements are sparse maps from exponent vectors (normal order) to scalars.
A presentation over a cyclotomic field keeps a ``lift``: the same
presentation over the generic field it specializes from.  Higher
derivations are divided out in the lift and then specialized.
"""

from __future__ import annotations

import random
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, NotExtendable, NotLocallyNilpotent, ParseError, SpecError
from .qarith import t_binomial, t_factorial
from .scalars import (
    CyclotomicField,
    GenericField,
    Scalar,
    ScalarField,
    parse_expression,
    random_scalar,
)

Exp = tuple
Terms = dict


def _add_into(acc: dict, mono, coef) -> None:
    cur = acc.get(mono)
    val = coef if cur is None else cur + coef
    if val.is_zero():
        acc.pop(mono, None)
    else:
        acc[mono] = val


def _last_nonzero(e) -> int:
    for k in range(len(e) - 1, -1, -1):
        if e[k]:
            return k
    return -1


def _first_nonzero(e) -> int:
    for k, v in enumerate(e):
        if v:
            return k
    return len(e)


class QSkewFailure(SpecError):
    def __init__(self, message: str, generator: str):
        super().__init__(message)
        self.generator = generator


class OreSpec:
    """An iterated Ore extension presentation; treat instances as immutable."""

    def __init__(
        self,
        field: ScalarField,
        vars: Sequence[str],
        lam: Sequence[Sequence[Scalar]],
        qskew: Sequence[Scalar],
        delta: Mapping[tuple[int, int], Mapping[Exp, Scalar]],
        invertible: Iterable[int] = (),
        localized: bool = False,
        lift: "OreSpec | None" = None,
    ):
        self.field = field
        self.vars = tuple(vars)
        n = len(self.vars)
        self.n = n
        self.index = {v: k for k, v in enumerate(self.vars)}
        if len(self.index) != n:
            raise SpecError(f"repeated variable names in {self.vars}")
        clash = set(self.vars) & set(field.names())
        if clash:
            raise SpecError(f"variable names clash with field parameters: {sorted(clash)}")
        self.lam = tuple(tuple(field(x) for x in row) for row in lam)
        self.qskew = tuple(field(x) for x in qskew)
        self.delta = {
            (i, j): {tuple(e): field(c) for e, c in terms.items() if not field(c).is_zero()}
            for (i, j), terms in delta.items()
        }
        self.delta = {k: v for k, v in self.delta.items() if v}
        self.invertible = frozenset(invertible)
        self.localized = bool(localized)
        self.lift = lift
        self._mcache: dict = {}
        self._dcache: dict = {}
        self._pcache: dict = {}
        self._hd: dict = {}
        self._localized_spec = None
        self._keyc = None
        self._validate()

    # -- structure ---------------------------------------------------------

    def _validate(self) -> None:
        n = self.n
        if len(self.lam) != n or any(len(r) != n for r in self.lam):
            raise SpecError("lambda must be an N x N matrix")
        if len(self.qskew) != n:
            raise SpecError("qskew needs one entry per variable")
        one = self.field.one()
        for i in range(n):
            if self.lam[i][i] != one:
                raise SpecError(f"lambda[{i}][{i}] must be 1")
            for j in range(i):
                if self.lam[i][j].is_zero() or self.lam[i][j] * self.lam[j][i] != one:
                    raise SpecError(f"lambda[{i}][{j}] * lambda[{j}][{i}] must be 1")
        for (i, j), terms in self.delta.items():
            if not (0 <= j < i < n):
                raise SpecError(f"delta entry ({i}, {j}) must have j < i")
            for e in terms:
                if len(e) != n or any(e[k] for k in range(i, n)):
                    raise SpecError(f"delta_{self.vars[i]}({self.vars[j]}) mentions a variable >= {self.vars[i]}")
                for k, v in enumerate(e):
                    if v < 0 and k not in self.invertible:
                        raise SpecError(f"delta image uses a negative power of {self.vars[k]}")
        for k in self.invertible:
            if not 0 <= k < n:
                raise SpecError(f"invertible index {k} out of range")
            if any(i == k or j == k for (i, j) in self.delta):
                raise SpecError(f"invertible generator {self.vars[k]} is coupled to a derivation")

    def has_delta(self, i: int) -> bool:
        return any(a == i for (a, _) in self.delta)

    def delta_image(self, i: int, j: int) -> "OreElement":
        return OreElement(self, dict(self.delta.get((i, j), {})))

    def _key(self):
        if self._keyc is None:
            self._keyc = self._make_key()
        return self._keyc

    def _make_key(self):
        return (
            self.field,
            self.vars,
            self.lam,
            tuple(sorted((k, tuple(sorted(v.items(), key=lambda t: t[0]))) for k, v in self.delta.items())),
            self.invertible,
            self.localized,
        )

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, OreSpec):
            return False
        return self._key() == other._key()

    def __hash__(self):
        return hash((self.vars, self.localized))

    def __repr__(self):
        return f"OreSpec(vars={self.vars}, field={self.field!r})"

    def generic_lift(self) -> "OreSpec":
        if self.lift is not None:
            return self.lift
        if isinstance(self.field, GenericField):
            return self
        raise NotExtendable("a presentation over a cyclotomic field needs a generic lift")

    # -- construction helpers ---------------------------------------------

    @classmethod
    def build(
        cls,
        field: ScalarField,
        vars: Sequence[str],
        tau: Mapping[tuple[str, str], object] | None = None,
        delta: Mapping[tuple[str, str], object] | None = None,
        qskew: Mapping[str, object] | None = None,
        invertible: Iterable[str] = (),
    ) -> "OreSpec":
        """Build a presentation from named data.

        ``tau[(xi, xj)]`` is the scalar with tau_i(x_j) = scalar * x_j (xj before
        xi, default 1); ``delta[(xi, xj)]`` is delta_i(x_j) as an element string
        in the earlier generators.  Strings are parsed in the generic lift; a
        cyclotomic ``field`` then receives the specialization.
        """
        gfield = field.generic()
        vars = tuple(vars)
        idx = {v: k for k, v in enumerate(vars)}
        n = len(vars)
        one = gfield.one()
        lam = [[one] * n for _ in range(n)]
        for (a, b), val in (tau or {}).items():
            i, j = idx[a], idx[b]
            if j >= i:
                raise SpecError(f"tau_{a}({b}) needs {b} before {a}")
            s = gfield.parse(val) if isinstance(val, str) else gfield(val)
            lam[i][j] = s
            lam[j][i] = s.inverse()
        inv = [idx[v] for v in invertible]
        dl: dict = {}
        by_var: dict[int, list] = {}
        for (a, b), val in (delta or {}).items():
            by_var.setdefault(idx[a], []).append((idx[b], val))
        spec = None
        for i in sorted(by_var):
            # delta_i images live in the presentation truncated at x_i
            prefix = cls(
                gfield,
                vars[:i],
                [row[:i] for row in lam[:i]],
                [one] * i,
                {k: {e[:i]: c for e, c in v.items()} for k, v in dl.items() if k[0] < i},
                [k for k in inv if k < i],
            )
            for j, val in by_var[i]:
                if j >= i:
                    raise SpecError(f"delta_{vars[i]}({vars[j]}) needs {vars[j]} before {vars[i]}")
                el = prefix.element(val) if isinstance(val, str) else val
                terms = {tuple(e) + (0,) * (n - i): c for e, c in el.terms.items()}
                if terms:
                    dl[(i, j)] = terms
        qs = [one] * n
        for v, val in (qskew or {}).items():
            qs[idx[v]] = gfield.parse(val) if isinstance(val, str) else gfield(val)
        spec = cls(gfield, vars, lam, qs, dl, inv)
        for i in range(n):
            if spec.has_delta(i) and vars[i] not in (qskew or {}):
                qs[i] = infer_qskew(spec, i)
        spec = cls(gfield, vars, lam, qs, dl, inv)
        if isinstance(field, GenericField):
            if field != gfield:
                raise SpecError("field mismatch")
            return spec
        return spec.specialize(field)

    def specialize(self, field: CyclotomicField) -> "OreSpec":
        if not isinstance(self.field, GenericField):
            raise DomainError("only generic presentations can be specialized")
        if field.generic() != self.field:
            raise DomainError(f"{field!r} does not specialize {self.field!r}")
        sp = field.specialize
        try:
            lam = [[sp(x) for x in row] for row in self.lam]
            qs = [sp(x) for x in self.qskew]
            dl = {k: {e: sp(c) for e, c in v.items()} for k, v in self.delta.items()}
        except ZeroDivisionError as exc:
            raise DomainError(str(exc)) from exc
        return OreSpec(field, self.vars, lam, qs, dl, self.invertible, self.localized, lift=self)

    def _derived(self, **changes) -> "OreSpec":
        lift = self.lift._derived(**changes) if self.lift is not None else None
        args = dict(
            field=self.field,
            vars=self.vars,
            lam=self.lam,
            qskew=self.qskew,
            delta=self.delta,
            invertible=self.invertible,
            localized=self.localized,
        )
        perm = changes.pop("perm", None)
        for k, v in changes.items():
            args[k] = v(self) if callable(v) else v
        if perm is not None:
            args = _permute_args(self, perm, args)
        return OreSpec(lift=lift, **args)

    def localized_spec(self) -> "OreSpec":
        """Same presentation, with the last generator allowed negative powers."""
        if self.localized:
            return self
        if self._localized_spec is None:
            self._localized_spec = self._derived(localized=True)
        return self._localized_spec

    def without_delta(self, i: int) -> "OreSpec":
        """Zero delta_i and mark x_i invertible."""
        return self._derived(
            delta=lambda s: {k: v for k, v in s.delta.items() if k[0] != i},
            invertible=lambda s: s.invertible | {i},
            qskew=lambda s: tuple(s.field.one() if k == i else q for k, q in enumerate(s.qskew)),
            localized=False,
        )

    # -- elements ----------------------------------------------------------

    def zero(self) -> "OreElement":
        return OreElement(self, {})

    def one(self) -> "OreElement":
        return self.monomial((0,) * self.n)

    def scalar(self, c) -> "OreElement":
        c = self.field(c)
        return OreElement(self, {} if c.is_zero() else {(0,) * self.n: c})

    def monomial(self, exps: Sequence[int], coef=1) -> "OreElement":
        exps = tuple(exps)
        if len(exps) != self.n:
            raise DomainError(f"exponent vector {exps} has wrong length")
        for k, v in enumerate(exps):
            if v < 0 and not self.allows_negative(k):
                raise DomainError(f"{self.vars[k]} is not invertible")
        c = self.field(coef)
        return OreElement(self, {} if c.is_zero() else {exps: c})

    def gen(self, name: str | int, power: int = 1) -> "OreElement":
        k = self.index[name] if isinstance(name, str) else name
        e = [0] * self.n
        e[k] = power
        return self.monomial(e)

    def allows_negative(self, k: int) -> bool:
        return k in self.invertible or (self.localized and k == self.n - 1)

    def element(self, text) -> "OreElement":
        """Parse an element such as ``"(q1 - 1)*y1*x1 + 1"``."""
        if isinstance(text, OreElement):
            return text
        if isinstance(text, (int,)):
            return self.scalar(text)

        def resolve(name):
            if name in self.index:
                return self.gen(name)
            return self.field.gen(name)

        val = parse_expression(text, resolve, self.field)
        if isinstance(val, Scalar):
            return self.scalar(val)
        return val

    # -- multiplication ----------------------------------------------------

    def _lam_pow(self, i: int, j: int, p: int) -> Scalar:
        key = (i, j, p)
        hit = self._pcache.get(key)
        if hit is None:
            hit = self.lam[i][j] ** p
            self._pcache[key] = hit
        return hit

    def _tau_coef(self, i: int, e, power: int = 1) -> Scalar:
        c = self.field.one()
        for k, v in enumerate(e):
            if v and k != i:
                c = c * self._lam_pow(i, k, v * power)
        return c

    def _swap(self, k: int, s: int, j: int, t: int) -> dict:
        """Normal form of x_k^s x_j^t for j < k, s, t in {1, -1}."""
        n = self.n
        d = self.delta.get((k, j))
        e = [0] * n
        e[j] = t
        e[k] = s
        if d is None:
            return {tuple(e): self._lam_pow(k, j, s * t)}
        if s == 1 and t == 1:
            out = {tuple(e): self.lam[k][j]}
            for m, c in d.items():
                _add_into(out, m, c)
            return out
        if s == -1 and t == 1 and self.localized and k == n - 1:
            # x^-1 r = sum_m (-1)^m tau^-1((delta tau^-1)^m r) x^(-m-1)
            out: dict = {}
            cur = {tuple(1 if a == j else 0 for a in range(n)): self.field.one()}
            m = 0
            while cur:
                if m > 64:
                    raise NotLocallyNilpotent(f"delta_{self.vars[k]} is not locally nilpotent")
                tinv = self._tau_terms(k, cur, -1)
                sign = 1 if m % 2 == 0 else -1
                for mono, c in tinv.items():
                    mm = list(mono)
                    mm[k] = -m - 1
                    _add_into(out, tuple(mm), c * sign)
                cur = self._delta_terms(k, tinv)
                m += 1
            return out
        raise SpecError(f"cannot commute {self.vars[k]}^{s} past {self.vars[j]}^{t}")

    def _mono_mul(self, a: Exp, b: Exp) -> dict:
        key = (a, b)
        hit = self._mcache.get(key)
        if hit is not None:
            return hit
        k = _last_nonzero(a)
        j = _first_nonzero(b)
        if k <= j:
            res = {tuple(x + y for x, y in zip(a, b)): self.field.one()}
        else:
            s = 1 if a[k] > 0 else -1
            t = 1 if b[j] > 0 else -1
            a1 = list(a)
            a1[k] -= s
            b1 = list(b)
            b1[j] -= t
            a1 = tuple(a1)
            b1 = tuple(b1)
            res = {}
            for m, c in self._swap(k, s, j, t).items():
                for m2, c2 in self._mono_mul(a1, m).items():
                    c12 = c * c2
                    for m3, c3 in self._mono_mul(m2, b1).items():
                        _add_into(res, m3, c12 * c3)
        self._mcache[key] = res
        return res

    def _mul_terms(self, A: Mapping, B: Mapping) -> dict:
        out: dict = {}
        for ea, ca in A.items():
            for eb, cb in B.items():
                cab = ca * cb
                for e, c in self._mono_mul(ea, eb).items():
                    _add_into(out, e, cab * c)
        return out

    # -- tau and delta -----------------------------------------------------

    def _tau_terms(self, i: int, terms: Mapping, power: int = 1) -> dict:
        out = {}
        for e, c in terms.items():
            out[e] = c * self._tau_coef(i, e, power)
        return out

    def _check_below(self, i: int, terms: Mapping, what: str) -> None:
        for e in terms:
            if any(e[k] for k in range(i, self.n)):
                raise DomainError(f"{what}: element mentions generators at or after {self.vars[i]}")

    def _delta_mono(self, i: int, e: Exp) -> dict:
        key = (i, e)
        hit = self._dcache.get(key)
        if hit is not None:
            return hit
        l = _last_nonzero(e)
        if l < 0:
            res: dict = {}
        else:
            sgn = 1 if e[l] > 0 else -1
            e1 = list(e)
            e1[l] -= sgn
            e1 = tuple(e1)
            g = tuple(sgn if a == l else 0 for a in range(self.n))
            res = {}
            # delta(e1 g) = tau(e1) delta(g) + delta(e1) g
            if sgn > 0:
                dg = self.delta.get((i, l))
                if dg:
                    tc = self._tau_coef(i, e1)
                    for m, c in self._mul_terms({e1: tc}, dg).items():
                        _add_into(res, m, c)
            d1 = self._delta_mono(i, e1)
            if d1:
                for m, c in self._mul_terms(d1, {g: self.field.one()}).items():
                    _add_into(res, m, c)
        self._dcache[key] = res
        return res

    def _delta_terms(self, i: int, terms: Mapping) -> dict:
        out: dict = {}
        for e, c in terms.items():
            for m, c2 in self._delta_mono(i, e).items():
                _add_into(out, m, c * c2)
        return out

    def tau(self, i: int | str, r: "OreElement", power: int = 1) -> "OreElement":
        i = self.index[i] if isinstance(i, str) else i
        r = self._own(r)
        self._check_below(i, r.terms, "tau")
        return OreElement(self, self._tau_terms(i, r.terms, power))

    def apply_delta(self, i: int | str, r: "OreElement") -> "OreElement":
        i = self.index[i] if isinstance(i, str) else i
        r = self._own(r)
        self._check_below(i, r.terms, "delta")
        return OreElement(self, self._delta_terms(i, r.terms))

    def _own(self, r) -> "OreElement":
        if isinstance(r, OreElement):
            if r.spec is self:
                return r
            if r.spec._key()[:4] == self._key()[:4]:
                for e in r.terms:
                    for k, v in enumerate(e):
                        if v < 0 and not self.allows_negative(k):
                            raise DomainError(f"{self.vars[k]} is not invertible here")
                return OreElement(self, dict(r.terms))
            raise DomainError("element belongs to a different presentation")
        if isinstance(r, str):
            return self.element(r)
        return self.scalar(r)

    def higher_derivation(self, i: int | str, max_index: int = 64) -> "HigherDerivation":
        i = self.index[i] if isinstance(i, str) else i
        key = (i, max_index)
        if key not in self._hd:
            self._hd[key] = HigherDerivation(self, i, max_index)
        return self._hd[key]

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        base = self.lift if self.lift is not None else self

        def terms_json(terms):
            return [
                {"coeff": str(c), "exponents": list(e)}
                for e, c in sorted(terms.items(), reverse=True)
            ]

        return {
            "field": self.field.to_json(),
            "vars": list(self.vars),
            "lambda": [[str(x) for x in row] for row in base.lam],
            "qskew": [str(x) for x in base.qskew],
            "delta": [
                {"var": self.vars[i], "of": self.vars[j], "terms": terms_json(base.delta[(i, j)])}
                for (i, j) in sorted(base.delta)
            ],
            "invertible": [self.vars[k] for k in sorted(self.invertible)],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "OreSpec":
        try:
            field = ScalarField.from_json(data["field"])
            gfield = field.generic()
            vars = list(data["vars"])
            n = len(vars)
            lam = [[gfield.parse(x) for x in row] for row in data["lambda"]]
            qskew = [gfield.parse(x) for x in data.get("qskew", ["1"] * n)]
            dl: dict = {}
            for entry in data.get("delta", []):
                i = vars.index(entry["var"])
                j = vars.index(entry["of"]) if "of" in entry else i - 1
                terms = {}
                for t in entry["terms"]:
                    e = tuple(int(x) for x in t["exponents"])
                    terms[e] = terms.get(e, gfield.zero()) + gfield.parse(t["coeff"])
                dl[(i, j)] = terms
            inv = [vars.index(v) for v in data.get("invertible", [])]
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, (ParseError, SpecError)):
                raise
            raise ParseError(f"malformed presentation: {exc}") from exc
        spec = cls(gfield, vars, lam, qskew, dl, inv)
        if isinstance(field, GenericField):
            return spec
        return spec.specialize(field)


def _permute_args(spec: OreSpec, perm: Sequence[int], args: dict) -> dict:
    """Relabel so that new position p holds old generator perm[p]."""
    n = spec.n
    pos = {old: new for new, old in enumerate(perm)}

    def move(e):
        out = [0] * n
        for old, v in enumerate(e):
            out[pos[old]] = v
        return tuple(out)

    args["vars"] = tuple(args["vars"][o] for o in perm)
    args["lam"] = tuple(tuple(args["lam"][perm[a]][perm[b]] for b in range(n)) for a in range(n))
    args["qskew"] = tuple(args["qskew"][o] for o in perm)
    args["delta"] = {(pos[i], pos[j]): {move(e): c for e, c in t.items()} for (i, j), t in args["delta"].items()}
    args["invertible"] = frozenset(pos[k] for k in args["invertible"])
    return args


class OreElement:
    """Element of an Ore presentation (or of its localization)."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: OreSpec, terms: Mapping[Exp, Scalar]):
        self.spec = spec
        self.terms = {e: c for e, c in terms.items() if not c.is_zero()}

    def _other(self, other):
        if isinstance(other, OreElement):
            if other.spec is self.spec:
                return self, other
            a, b = self.spec, other.spec
            if a._key()[:4] == b._key()[:4]:
                # promote to whichever side is localized
                target = a if a.localized or not b.localized else b
                return target._own(self), target._own(other)
            raise DomainError("elements of different presentations")
        if isinstance(other, Scalar) or (isinstance(other, int) and not isinstance(other, bool)):
            return self, self.spec.scalar(other)
        from fractions import Fraction

        if isinstance(other, Fraction):
            return self, self.spec.scalar(other)
        return None

    def __add__(self, other):
        pair = self._other(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        out = dict(a.terms)
        for e, c in b.terms.items():
            _add_into(out, e, c)
        return OreElement(a.spec, out)

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return OreElement(self.spec, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        pair = self._other(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Scalar) or (isinstance(other, int) and not isinstance(other, bool)):
            c = self.spec.field(other)
            return OreElement(self.spec, {e: v * c for e, v in self.terms.items()})
        pair = self._other(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return OreElement(a.spec, a.spec._mul_terms(a.terms, b.terms))

    def __rmul__(self, other):
        if isinstance(other, Scalar) or (isinstance(other, int) and not isinstance(other, bool)):
            return self * other
        pair = self._other(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b * a

    def __truediv__(self, other):
        if isinstance(other, Scalar) or isinstance(other, int):
            return self * self.spec.field(other).inverse()
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if len(self.terms) == 1:
                ((e, c),) = self.terms.items()
                nz = [k for k, v in enumerate(e) if v]
                if len(nz) == 1 and self.spec.allows_negative(nz[0]):
                    inv = self.spec.monomial([-v for v in e], c.inverse())
                    return inv ** (-n)
            raise DomainError("only monomials in invertible generators have inverses")
        out = self.spec.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        pair = self._other(other) if not isinstance(other, str) else None
        if pair is None:
            return False
        a, b = pair
        return a.terms == b.terms

    def __hash__(self):
        return hash(frozenset(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps) -> Scalar:
        return self.terms.get(tuple(exps), self.spec.field.zero())

    def min_exponent(self, k: int) -> int:
        return min((e[k] for e in self.terms), default=0)

    def max_exponent(self, k: int) -> int:
        return max((e[k] for e in self.terms), default=0)

    def degree(self) -> int:
        return max((sum(abs(v) for v in e) for e in self.terms), default=0)

    def monomial_str(self, e) -> str:
        parts = []
        for name, v in zip(self.spec.vars, e):
            if v == 1:
                parts.append(name)
            elif v:
                parts.append(f"{name}^{v}" if v > 0 else f"{name}^({v})")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = self.monomial_str(e)
            cs = str(c)
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            elif cs == "-1":
                body = "-" + mono
            else:
                simple = " " not in cs and "/" not in cs
                body = f"{cs}*{mono}" if simple else f"({cs})*{mono}"
            out.append(body)
        s = out[0]
        for body in out[1:]:
            s += f" - {body[1:]}" if body.startswith("-") else f" + {body}"
        return s

    def __repr__(self):
        return f"OreElement({str(self)!r})"

    def to_json(self) -> list:
        return [{"coeff": str(c), "exponents": list(e)} for e, c in sorted(self.terms.items(), reverse=True)]


# ---------------------------------------------------------------------------
# higher q-skew derivations


class HigherDerivation:
    """The sequence d_0 = id, d_1 = delta_i, d_2, ... on the coefficient ring of x_i.

    Generator images d_n(x_j) come from the generic lift as
    delta^n(x_j) / (n)!_u (u the lift's skew parameter), checked to be
    Laurent in the parameters, and then specialized.  Everything else
    follows from d_n(rs) = sum_k tau^(n-k) d_k(r) d_(n-k)(s).
    """

    def __init__(self, spec: OreSpec, i: int, max_index: int = 64):
        self.spec = spec
        self.i = i
        self.max_index = max_index
        self.q = spec.qskew[i]
        self._tables: dict[int, list] = {}
        self._cache: dict = {}

    def generator_table(self, j: int) -> list[dict]:
        """[d_0(x_j), d_1(x_j), ...] up to the last nonzero entry."""
        hit = self._tables.get(j)
        if hit is not None:
            return hit
        spec = self.spec
        if j >= self.i:
            table = [{tuple(1 if a == j else 0 for a in range(spec.n)): spec.field.one()}]
            self._tables[j] = table
            return table
        lift = spec.generic_lift()
        u = lift.qskew[self.i]
        cur = {tuple(1 if a == j else 0 for a in range(spec.n)): lift.field.one()}
        table = [{e: spec.field.specialize(c) for e, c in cur.items()}]
        n = 0
        while True:
            cur = lift._delta_terms(self.i, cur)
            n += 1
            if not cur:
                break
            if n > self.max_index:
                raise NotLocallyNilpotent(
                    f"delta_{spec.vars[self.i]}^n({spec.vars[j]}) nonzero beyond n = {self.max_index}"
                )
            fact = t_factorial(n).evaluate(u)
            if fact.is_zero():
                raise NotExtendable(f"({n})! vanishes in the lift")
            row = {}
            for e, c in cur.items():
                quo = c / fact
                if not quo.is_laurent():
                    raise NotExtendable(
                        f"delta^{n}({spec.vars[j]}) is not divisible by ({n})! in the lift"
                    )
                try:
                    val = spec.field.specialize(quo)
                except (DomainError, ZeroDivisionError) as exc:
                    raise NotExtendable(str(exc)) from exc
                if not val.is_zero():
                    row[e] = val
            table.append(row)
        while len(table) > 1 and not table[-1]:
            table.pop()
        self._tables[j] = table
        return table

    def _mono(self, n: int, e: Exp) -> dict:
        spec = self.spec
        if n == 0:
            return {e: spec.field.one()}
        key = (n, e)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        l = _last_nonzero(e)
        res: dict = {}
        if l >= 0:
            sgn = 1 if e[l] > 0 else -1
            e1 = list(e)
            e1[l] -= sgn
            e1 = tuple(e1)
            g = tuple(sgn if a == l else 0 for a in range(spec.n))
            if sgn > 0:
                gt = self.generator_table(l)
            else:
                if len(self.generator_table(l)) > 1:
                    raise DomainError(f"negative power of {spec.vars[l]} with nonzero derivation")
                gt = [{g: spec.field.one()}]
            # d_n(e1 g) = sum_k tau^(n-k) d_k(e1) d_(n-k)(g)
            for k in range(n + 1):
                if n - k >= len(gt):
                    continue
                dk = self._mono(k, e1)
                if not dk:
                    continue
                left = spec._tau_terms(self.i, dk, n - k) if n - k else dk
                for m, c in spec._mul_terms(left, gt[n - k]).items():
                    _add_into(res, m, c)
        self._cache[key] = res
        return res

    def _terms(self, n: int, terms: Mapping) -> dict:
        out: dict = {}
        for e, c in terms.items():
            for m, c2 in self._mono(n, e).items():
                _add_into(out, m, c * c2)
        return out

    def __call__(self, n: int, r) -> OreElement:
        if n < 0:
            raise DomainError("derivation index must be >= 0")
        r = self.spec._own(r)
        self.spec._check_below(self.i, r.terms, "higher derivation")
        return OreElement(r.spec, self._terms(n, r.terms))

    apply = __call__

    def generator_index(self, j: int) -> int:
        """Smallest n with d_m(x_j) = 0 for all m >= n."""
        return len(self.generator_table(j))

    def index_bound(self, r: OreElement) -> int:
        """d_n(r) = 0 for every n > this bound, from the generator indices."""
        best = 0
        for e in r.terms:
            tot = 0
            for k, v in enumerate(e):
                if v > 0:
                    tot += v * (self.generator_index(k) - 1)
            best = max(best, tot)
        return best

    def nilpotence_index(self, r) -> int:
        """Smallest n with d_m(r) = 0 for all m >= n (0 for r = 0)."""
        r = self.spec._own(r)
        if r.is_zero():
            return 0
        for n in range(self.index_bound(r), -1, -1):
            if self._terms(n, r.terms):
                return n + 1
        return 0


# ---------------------------------------------------------------------------
# module-level API


def multiply(a: OreElement, b: OreElement) -> OreElement:
    return a * b


def apply_delta(spec: OreSpec, i: int | str, r: OreElement) -> OreElement:
    return spec.apply_delta(i, r)


def higher_derivation(spec: OreSpec, i: int | str, max_index: int = 64) -> HigherDerivation:
    return spec.higher_derivation(i, max_index)


def infer_qskew(spec: OreSpec, i: int) -> Scalar:
    """Read off q from delta_i(tau_i(x_j)) = q tau_i(delta_i(x_j)) on one generator."""
    for (a, j), d in sorted(spec.delta.items()):
        if a != i:
            continue
        lhs = {e: c * spec.lam[i][j] for e, c in d.items()}
        rhs = spec._tau_terms(i, d)
        e0 = next(iter(rhs))
        return lhs[e0] / rhs[e0]
    return spec.field.one()


def check_qskew(spec: OreSpec, i: int | str) -> Scalar:
    """Return the declared skew parameter of x_i if delta_i tau_i = q tau_i delta_i.

    Raises QSkewFailure naming the first generator where it fails.
    """
    i = spec.index[i] if isinstance(i, str) else i
    q = spec.qskew[i]
    for j in range(i):
        g = {tuple(1 if a == j else 0 for a in range(spec.n)): spec.field.one()}
        lhs = spec._delta_terms(i, spec._tau_terms(i, g))
        rhs = {e: c * q for e, c in spec._tau_terms(i, spec._delta_terms(i, g)).items()}
        diff = dict(lhs)
        for e, c in rhs.items():
            _add_into(diff, e, -c)
        if diff:
            raise QSkewFailure(
                f"delta tau != ({q}) tau delta on generator {spec.vars[j]} for {spec.vars[i]}",
                spec.vars[j],
            )
    return q


def check_presentation(spec: OreSpec) -> list[str]:
    """Check that each tau_i and delta_i respects the relations among x_0..x_{i-1}.

    Returns a list of human-readable problems (empty when consistent).
    """
    problems = []
    n = spec.n
    one = spec.field.one()

    def unit(k):
        return {tuple(1 if a == k else 0 for a in range(n)): one}

    for i in range(n):
        for l in range(i):
            for j in range(l):
                dlj = spec.delta.get((l, j), {})
                # tau_i is an automorphism: tau_i(delta_l(x_j)) = lam_il lam_ij delta_l(x_j)
                want = spec.lam[i][l] * spec.lam[i][j]
                got = spec._tau_terms(i, dlj)
                if any(got[e] != c * want for e, c in dlj.items()):
                    problems.append(f"tau_{spec.vars[i]} breaks the relation of {spec.vars[l]} and {spec.vars[j]}")
                if not spec.has_delta(i):
                    continue
                # delta_i(x_l x_j) through the word and through the normal form
                dl = spec._delta_terms(i, unit(l))
                dj = spec._delta_terms(i, unit(j))
                word: dict = {}
                for m, c in spec._mul_terms({unit(l).popitem()[0]: spec.lam[i][l]}, dj).items():
                    _add_into(word, m, c)
                for m, c in spec._mul_terms(dl, unit(j)).items():
                    _add_into(word, m, c)
                normal = spec._mono_mul(next(iter(unit(l))), next(iter(unit(j))))
                nf = spec._delta_terms(i, normal)
                diff = dict(word)
                for m, c in nf.items():
                    _add_into(diff, m, -c)
                if diff:
                    problems.append(
                        f"delta_{spec.vars[i]} is not defined on the relation of {spec.vars[l]} and {spec.vars[j]}"
                    )
    return problems


class HDReport:
    def __init__(self):
        self.failures: list[str] = []
        self.nilpotence: list[int] = []

    @property
    def ok(self) -> bool:
        return not self.failures

    def __repr__(self):
        return f"HDReport(ok={self.ok}, failures={self.failures}, nilpotence={self.nilpotence})"


def check_hd_properties(hd: HigherDerivation, samples: Sequence[OreElement], n_max: int = 4) -> HDReport:
    """Check the defining identities of a higher q-skew derivation on samples."""
    spec = hd.spec
    rep = HDReport()
    q = hd.q
    i = hd.i
    one = spec.one()
    for n in range(1, n_max + 1):
        if not hd(n, one).is_zero():
            rep.failures.append(f"d_{n}(1) != 0")
    for idx, r in enumerate(samples):
        r = spec._own(r)
        if hd(0, r) != r:
            rep.failures.append(f"d_0 != id on sample {idx}")
        for n in range(n_max + 1):
            lhs = hd(n, spec.tau(i, r))
            rhs = spec.tau(i, hd(n, r)) * (q ** n)
            if lhs != rhs:
                rep.failures.append(f"d_{n} tau != q^{n} tau d_{n} on sample {idx}")
            for a in range(n + 1):
                b = n - a
                lhs = hd(a, hd(b, r))
                rhs = hd(n, r) * t_binomial(n, b).evaluate(q)
                if lhs != rhs:
                    rep.failures.append(f"d_{a} d_{b} != binom({n},{b}) d_{n} on sample {idx}")
        rep.nilpotence.append(hd.nilpotence_index(r))
    for idx in range(len(samples) - 1):
        r = spec._own(samples[idx])
        s = spec._own(samples[idx + 1])
        rs = r * s
        for n in range(n_max + 1):
            rhs = spec.zero()
            for a in range(n + 1):
                rhs = rhs + spec.tau(i, hd(a, r), n - a) * hd(n - a, s)
            if hd(n, rs) != rhs:
                rep.failures.append(f"product rule fails for d_{n} on samples {idx}, {idx + 1}")
    return rep


def random_element(
    spec: OreSpec,
    rng: random.Random,
    max_degree: int = 3,
    max_terms: int = 3,
    upto: int | None = None,
    scalar_size: int = 1,
) -> OreElement:
    """Random element in the generators x_0..x_{upto-1} (all by default)."""
    upto = spec.n if upto is None else upto
    out = {}
    for _ in range(rng.randint(1, max_terms)):
        deg = rng.randint(0, max_degree)
        e = [0] * spec.n
        for _ in range(deg):
            if upto:
                e[rng.randrange(upto)] += 1
        c = random_scalar(spec.field, rng, scalar_size)
        if c.is_zero():
            c = spec.field.one()
        _add_into(out, tuple(e), c)
    return OreElement(spec, out)
