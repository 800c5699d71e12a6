"""Scalar fields: generic rational functions and cyclotomic number fields.

Three modes are supported.

* ``GenericField(params)``: Q(params), rational functions in named
  parameters such as ``q``, ``q1``, ``p1``, ``g12``.
* ``GenericField(params, sqrt=True)``: as above, but the parameter list
  contains ``s`` and the name ``q`` means ``s^2``.  This is the field where
  q^(1/2) exists.
* ``CyclotomicField(r, assign)``: Q(zeta_r) as polynomials modulo the
  cyclotomic polynomial.  Each parameter name is a power of ``zeta`` given by
  ``assign``; the generic field over the same names is the *lift*, and
  ``specialize`` maps lift scalars down.

Generic scalars are kept in canonical form: numerator and denominator are
coprime and the denominator is monic in lex order.

Multivariate polynomial arithmetic and gcds come from python-flint; the
field logic on top of it is local.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

import flint

from .errors import DomainError, ParseError
from .qarith import LaurentIntPoly


# ---------------------------------------------------------------------------
# cyclotomic polynomials


@lru_cache(maxsize=None)
def cyclotomic_poly(r: int) -> LaurentIntPoly:
    """Phi_r, computed as (x^r - 1) divided by Phi_d over proper divisors d."""
    if not isinstance(r, int) or r <= 0:
        raise DomainError(f"cyclotomic order must be a positive int, got {r!r}")
    num = LaurentIntPoly({r: 1, 0: -1})
    for d in range(1, r):
        if r % d == 0:
            num = num.exact_div(cyclotomic_poly(d))
    return num


def _to_fmpq_poly(p: LaurentIntPoly) -> flint.fmpq_poly:
    if p.is_zero():
        return flint.fmpq_poly([])
    if p.valuation() < 0:
        raise DomainError("expected an ordinary polynomial")
    coeffs = [0] * (p.degree() + 1)
    for e, c in p.terms.items():
        coeffs[e] = c
    return flint.fmpq_poly(coeffs)


# ---------------------------------------------------------------------------
# expression parser (shared by scalars and Ore elements)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        num, name, sym = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        elif sym is not None and not sym.isspace():
            if sym not in "+-*/^()":
                raise ParseError(f"unexpected character {sym!r} in {text!r}")
            out.append(("sym", sym))
    return out


class _Parser:
    def __init__(self, text, resolve, const):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.resolve = resolve
        self.const = const

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, sym=None):
        tok = self.peek()
        if tok[0] is None or (sym is not None and tok != ("sym", sym)):
            raise ParseError(f"expected {sym or 'token'} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        val = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return val

    def expr(self):
        val = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek() in (("sym", "*"), ("sym", "/")):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                val = val * rhs
            else:
                try:
                    val = val / rhs
                except ZeroDivisionError as exc:
                    raise ParseError(f"division by zero in {self.text!r}") from exc
        return val

    def unary(self):
        if self.peek() == ("sym", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("sym", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            exp = self.int_exponent()
            try:
                base = base ** exp
            except ZeroDivisionError as exc:
                raise ParseError(f"zero to a negative power in {self.text!r}") from exc
        return base

    def int_exponent(self):
        sign = 1
        paren = False
        if self.peek() == ("sym", "("):
            self.take()
            paren = True
        while self.peek() in (("sym", "-"), ("sym", "+")):
            if self.take()[1] == "-":
                sign = -sign
        kind, val = self.take()
        if kind != "num":
            raise ParseError(f"exponents must be integers in {self.text!r}")
        if paren:
            self.take(")")
        return sign * int(val)

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.const(int(val))
        if kind == "name":
            return self.resolve(val)
        if val == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected {val!r} in {self.text!r}")


def parse_expression(text: str, resolve: Callable[[str], object], const: Callable[[int], object]):
    """Parse ``text`` with + - * / ^ and parentheses.

    ``resolve`` turns a name into a value and ``const`` an integer literal.
    The values are combined with ordinary Python operators, so the same
    parser serves scalars and Ore elements.
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {text!r}")
    return _Parser(text, resolve, const).parse()


def _fmt_coef(c) -> str:
    s = str(c)
    return s


def _fmt_poly(terms: Iterable[tuple[tuple[int, ...], object]], names: tuple[str, ...]) -> str:
    parts = []
    for exps, c in terms:
        mono = "*".join(
            n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e
        )
        neg = c < 0
        mag = -c if neg else c
        if not mono:
            body = _fmt_coef(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_coef(mag)}*{mono}"
        parts.append(("-" if neg else "+", body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# fields


class ScalarField:
    """Base class; see GenericField and CyclotomicField."""

    mode: str = ""

    def zero(self) -> "Scalar":
        return self(0)

    def one(self) -> "Scalar":
        return self(1)

    def __call__(self, value) -> "Scalar":
        raise NotImplementedError

    def gen(self, name: str) -> "Scalar":
        raise NotImplementedError

    def names(self) -> tuple[str, ...]:
        raise NotImplementedError

    def parse(self, text: str) -> "Scalar":
        if isinstance(text, (int, Fraction)):
            return self(text)
        return parse_expression(text, self.gen, self)

    def generic(self) -> "GenericField":
        raise NotImplementedError

    def specialize(self, x: "Scalar") -> "Scalar":
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_json(data: Mapping) -> "ScalarField":
        try:
            mode = data["mode"]
            if mode == "generic":
                return GenericField(tuple(data["params"]))
            if mode == "generic-sqrt":
                return GenericField(tuple(data["params"]), sqrt=True)
            if mode == "cyclotomic":
                lift = data.get("lift")
                lift_field = ScalarField.from_json(lift) if lift else None
                return CyclotomicField(int(data["order"]), dict(data.get("assign", {"q": 1})), lift_field)
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed field description {data!r}") from exc
        raise ParseError(f"unknown field mode {data.get('mode')!r}")


class GenericField(ScalarField):
    def __init__(self, params: Iterable[str] = ("q",), sqrt: bool = False):
        params = tuple(params)
        if not params:
            raise DomainError("a generic field needs at least one parameter")
        if len(set(params)) != len(params):
            raise DomainError(f"repeated parameter names in {params}")
        for p in params:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", p) or p == "zeta":
                raise DomainError(f"bad parameter name {p!r}")
        if sqrt and ("s" not in params or "q" in params):
            raise DomainError("sqrt mode needs parameter 's' and no separate 'q'")
        self.params = params
        self.sqrt = sqrt
        self.mode = "generic-sqrt" if sqrt else "generic"
        self.ctx = flint.fmpq_mpoly_ctx.get(params, "lex")
        self._gens = dict(zip(params, self.ctx.gens()))
        self._one = self.ctx.constant(1)

    def __eq__(self, other):
        return isinstance(other, GenericField) and (self.params, self.sqrt) == (other.params, other.sqrt)

    def __hash__(self):
        return hash(("generic", self.params, self.sqrt))

    def __repr__(self):
        return f"GenericField({self.params!r}{', sqrt=True' if self.sqrt else ''})"

    def names(self):
        return self.params + (("q",) if self.sqrt else ())

    def _make(self, num, den=None) -> "GenericScalar":
        return GenericScalar(self, num, self._one if den is None else den)

    def __call__(self, value) -> "Scalar":
        if isinstance(value, GenericScalar):
            if value.field != self:
                raise DomainError(f"scalar from {value.field!r} used in {self!r}")
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a scalar")
        if isinstance(value, int):
            return self._make(self.ctx.constant(value))
        if isinstance(value, Fraction):
            return self._make(self.ctx.constant(flint.fmpq(value.numerator, value.denominator)))
        if isinstance(value, str):
            return self.parse(value)
        raise TypeError(f"cannot convert {value!r} to a scalar")

    def gen(self, name: str) -> "Scalar":
        if name in self._gens:
            return self._make(self._gens[name])
        if self.sqrt and name == "q":
            return self._make(self._gens["s"] ** 2)
        raise ParseError(f"unknown parameter {name!r} for {self!r}")

    def generic(self) -> "GenericField":
        return self

    def specialize(self, x):
        return self(x)

    def to_json(self):
        return {"mode": self.mode, "params": list(self.params)}


class CyclotomicField(ScalarField):
    """Q(zeta_r), with named parameters assigned to powers of zeta."""

    mode = "cyclotomic"

    def __init__(self, order: int, assign: Mapping[str, int] | None = None, lift: GenericField | None = None):
        if not isinstance(order, int) or order <= 0:
            raise DomainError(f"cyclotomic order must be positive, got {order!r}")
        self.order = order
        self.assign = dict(assign if assign is not None else {"q": 1})
        if "zeta" in self.assign:
            raise DomainError("'zeta' is reserved for the field generator")
        self.assign = {k: int(v) % order for k, v in sorted(self.assign.items())}
        if lift is None:
            lift = GenericField(tuple(self.assign))
        for n in lift.names():
            if n not in self.assign:
                raise DomainError(f"parameter {n!r} of the lift has no assigned exponent")
        if lift.sqrt and self.assign["q"] != (2 * self.assign["s"]) % order:
            raise DomainError("sqrt lift needs q = s^2 in the assignment")
        self.lift = lift
        self.modulus = _to_fmpq_poly(cyclotomic_poly(order))
        self.degree = self.modulus.degree()
        self._powers = None

    def __eq__(self, other):
        return (
            isinstance(other, CyclotomicField)
            and self.order == other.order
            and self.assign == other.assign
            and self.lift == other.lift
        )

    def __hash__(self):
        return hash(("cyclotomic", self.order, tuple(self.assign.items()), self.lift))

    def __repr__(self):
        return f"CyclotomicField({self.order}, {self.assign!r})"

    def names(self):
        return tuple(self.assign) + ("zeta",)

    def _make(self, poly) -> "CycloScalar":
        return CycloScalar(self, poly % self.modulus)

    def __call__(self, value) -> "Scalar":
        if isinstance(value, CycloScalar):
            if value.field != self:
                raise DomainError(f"scalar from {value.field!r} used in {self!r}")
            return value
        if isinstance(value, GenericScalar):
            return self.specialize(value)
        if isinstance(value, bool):
            raise TypeError("bool is not a scalar")
        if isinstance(value, int):
            return CycloScalar(self, flint.fmpq_poly([value]))
        if isinstance(value, Fraction):
            return CycloScalar(self, flint.fmpq_poly([flint.fmpq(value.numerator, value.denominator)]))
        if isinstance(value, str):
            return self.parse(value)
        raise TypeError(f"cannot convert {value!r} to a scalar")

    def zeta_power(self, k: int) -> "CycloScalar":
        k %= self.order
        if self._powers is None:
            x = flint.fmpq_poly([0, 1])
            pw = [flint.fmpq_poly([1])]
            for _ in range(self.order - 1):
                pw.append((pw[-1] * x) % self.modulus)
            self._powers = pw
        return CycloScalar(self, self._powers[k])

    def generator(self) -> "CycloScalar":
        return self.zeta_power(1)

    def gen(self, name: str) -> "Scalar":
        if name == "zeta":
            return self.zeta_power(1)
        if name in self.assign:
            return self.zeta_power(self.assign[name])
        raise ParseError(f"unknown parameter {name!r} for {self!r}")

    def generic(self) -> GenericField:
        return self.lift

    def _eval_poly(self, poly) -> flint.fmpq_poly:
        params = self.lift.params
        exps = [self.assign[p] for p in params]
        acc = [flint.fmpq(0)] * self.order
        for mono, c in poly.terms():
            k = sum(e * b for e, b in zip(mono, exps)) % self.order
            acc[k] += c
        return flint.fmpq_poly(acc) % self.modulus

    def specialize(self, x) -> "CycloScalar":
        """Image of a lift scalar under parameter -> zeta^assign."""
        if isinstance(x, CycloScalar):
            return self(x)
        if not isinstance(x, GenericScalar):
            return self(x)
        if x.field != self.lift:
            raise DomainError(f"cannot specialize a scalar of {x.field!r} into {self!r}")
        den = self._eval_poly(x.den)
        if den.is_zero():
            raise DomainError(f"{x} has a pole at this root of unity")
        num = self._eval_poly(x.num)
        return self(CycloScalar(self, num)) / CycloScalar(self, den)

    def log(self, x: "Scalar") -> int | None:
        """The k in [0, order) with zeta^k == x, or None."""
        x = self(x)
        self.zeta_power(0)
        for k, p in enumerate(self._powers):
            if p == x.poly:
                return k
        return None

    def to_json(self):
        return {"mode": "cyclotomic", "order": self.order, "assign": dict(self.assign), "lift": self.lift.to_json()}


def cyclotomic_with_sqrt(r: int) -> CyclotomicField:
    """Q(zeta_2r) with q a primitive r-th root and s = zeta_2r a square root of q."""
    return CyclotomicField(2 * r, {"s": 1, "q": 2}, GenericField(("s",), sqrt=True))


# ---------------------------------------------------------------------------
# scalars


class Scalar:
    """Common arithmetic surface; concrete classes below."""

    __slots__ = ()
    field: ScalarField

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field is not self.field and other.field != self.field:
                raise DomainError(f"mixing scalars of {self.field!r} and {other.field!r}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field(other)
        return None

    def __radd__(self, other):
        return self + other

    def __rmul__(self, other):
        return self * other

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def _eq_operand(self, other):
        if isinstance(other, Scalar):
            return other if other.field == self.field else None
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field(other)
        return None

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return f"Scalar({str(self)!r})"

    def to_json(self) -> str:
        return str(self)


class GenericScalar(Scalar):
    __slots__ = ("field", "num", "den")

    def __init__(self, field: GenericField, num, den):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = field._one
        elif not den.is_one():
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
            lc = den.leading_coefficient()
            if lc != 1:
                num = num / lc
                den = den / lc
        self.field = field
        self.num = num
        self.den = den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.den.is_one() and self.num.is_one()

    def is_laurent(self) -> bool:
        """True when the denominator is a single monomial."""
        return len(self.den) == 1

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return GenericScalar(self.field, self.num + o.num, self.den)
        return GenericScalar(self.field, self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return GenericScalar(self.field, self.num - o.num, self.den)
        return GenericScalar(self.field, self.num * o.den - o.num * self.den, self.den * o.den)

    def __neg__(self):
        return GenericScalar(self.field, -self.num, self.den)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            return GenericScalar(self.field, self.num * o.num, self.den)
        return GenericScalar(self.field, self.num * o.num, self.den * o.den)

    def inverse(self) -> "GenericScalar":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return GenericScalar(self.field, self.den, self.num)

    def __eq__(self, other):
        o = self._eq_operand(other)
        if o is None:
            return False
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def __str__(self):
        names = self.field.params
        n = _fmt_poly(self.num.terms(), names)
        if self.den.is_one():
            return n
        d = _fmt_poly(self.den.terms(), names)
        if len(self.num) > 1:
            n = f"({n})"
        return f"{n}/({d})"


class CycloScalar(Scalar):
    __slots__ = ("field", "poly")

    def __init__(self, field: CyclotomicField, poly):
        self.field = field
        self.poly = poly

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def is_one(self) -> bool:
        return self.poly.is_one()

    def is_laurent(self) -> bool:
        return True

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloScalar(self.field, self.poly + o.poly)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloScalar(self.field, self.poly - o.poly)

    def __neg__(self):
        return CycloScalar(self.field, -self.poly)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloScalar(self.field, (self.poly * o.poly) % self.field.modulus)

    def inverse(self) -> "CycloScalar":
        if self.poly.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid: s*poly + t*Phi = g with g a nonzero constant
        g, s, _ = self.poly.xgcd(self.field.modulus)
        return CycloScalar(self.field, (s / g) % self.field.modulus)

    def __eq__(self, other):
        o = self._eq_operand(other)
        if o is None:
            return False
        return self.poly == o.poly

    def __hash__(self):
        return hash(tuple(str(c) for c in self.poly.coeffs()))

    def __str__(self):
        coeffs = self.poly.coeffs()
        terms = [((k,), c) for k, c in reversed(list(enumerate(coeffs))) if c != 0]
        return _fmt_poly(terms, ("zeta",))


# ---------------------------------------------------------------------------
# module-level helpers


def scalar_invert(x: Scalar) -> Scalar:
    return x.inverse()


def evaluate_at_root(p: LaurentIntPoly, field: CyclotomicField) -> CycloScalar:
    """p(zeta) for the generator zeta of a cyclotomic field."""
    if not isinstance(field, CyclotomicField):
        raise DomainError("evaluate_at_root needs a cyclotomic field")
    out = field.zero()
    for e, c in p.terms.items():
        out = out + field.zeta_power(e) * c
    return out


def random_scalar(field: ScalarField, rng: random.Random, size: int = 2) -> Scalar:
    """Small random scalar, used by the verification suites and tests."""

    def rand_poly():
        out = field.zero()
        for _ in range(rng.randint(1, size + 1)):
            c = field(rng.randint(-3, 3))
            for n in field.names():
                if n == "zeta" or rng.random() < 0.5:
                    continue
                c = c * field.gen(n) ** rng.randint(-1, 2)
            out = out + c
        return out

    num = rand_poly()
    if rng.random() < 0.5:
        return num
    den = rand_poly()
    if den.is_zero():
        return num
    return num / den
