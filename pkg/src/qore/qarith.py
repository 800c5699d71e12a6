"""Gaussian t-integers, t-factorials and t-binomials.

Everything lives in Z[t, t^-1], stored as a sparse map exponent -> integer.
The binomials are built from the Pascal recurrence, so no polynomial
division is ever needed; ``LaurentIntPoly.exact_div`` exists for the
independent factorial-quotient check.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Any, Iterable, Mapping

from .errors import DomainError, ParseError


class LaurentIntPoly:
    """Immutable Laurent polynomial in one variable ``t`` with integer coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        clean = {}
        for e, c in (terms or {}).items():
            if not isinstance(e, int) or not isinstance(c, int):
                raise TypeError("exponents and coefficients must be int")
            if c:
                clean[e] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def monomial(cls, exp: int, coef: int = 1) -> "LaurentIntPoly":
        return cls({exp: coef})

    @classmethod
    def constant(cls, c: int) -> "LaurentIntPoly":
        return cls({0: c})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int | None:
        return max(self._terms) if self._terms else None

    def valuation(self) -> int | None:
        return min(self._terms) if self._terms else None

    def coefficient(self, exp: int) -> int:
        return self._terms.get(exp, 0)

    def _coerce(self, other):
        if isinstance(other, LaurentIntPoly):
            return other
        if isinstance(other, int):
            return LaurentIntPoly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentIntPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentIntPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentIntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) == 1:
                ((e, c),) = self._terms.items()
                if c in (1, -1):
                    return LaurentIntPoly({-e * -n: c ** -n})
            raise DomainError("only signed monomials have Laurent inverses")
        out = LaurentIntPoly.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def shift(self, k: int) -> "LaurentIntPoly":
        """Multiply by t^k."""
        return LaurentIntPoly({e + k: c for e, c in self._terms.items()})

    def exact_div(self, other: "LaurentIntPoly") -> "LaurentIntPoly":
        """Quotient in Z[t^+-1]; raises DomainError if the division is not exact."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = dict(self._terms)
        d_top = other.degree()
        lead = other._terms[d_top]
        quot: dict[int, int] = {}
        if not rem:
            return LaurentIntPoly()
        # an exact quotient cannot reach below this exponent
        floor = self.valuation() - other.valuation()
        while rem:
            top = max(rem)
            k = top - d_top
            if k < floor or rem[top] % lead:
                raise DomainError("polynomial division is not exact")
            c = rem[top] // lead
            quot[k] = c
            for e, oc in other._terms.items():
                v = rem.get(e + k, 0) - c * oc
                if v:
                    rem[e + k] = v
                else:
                    rem.pop(e + k, None)
        return LaurentIntPoly(quot)

    def __call__(self, x: Any) -> Any:
        return self.evaluate(x)

    def evaluate(self, x: Any) -> Any:
        """Substitute ``x`` for t. Works for ints, Fractions and field scalars."""
        total = None
        for e, c in self._terms.items():
            term = (x ** e) * c
            total = term if total is None else total + term
        if total is None:
            return x * 0 if not isinstance(x, int) else 0
        return total

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "t" if e == 1 else f"t^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentIntPoly({self._terms!r})"

    def to_json(self) -> dict:
        return {"terms": [[e, str(c)] for e, c in self._terms.items()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentIntPoly":
        try:
            pairs: Iterable = data["terms"]
            out: dict[int, int] = {}
            for e, c in pairs:
                if int(e) in out:
                    raise ParseError(f"duplicate exponent {e}")
                out[int(e)] = int(c)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"malformed Laurent polynomial: {data!r}") from exc
        return cls(out)


ONE = LaurentIntPoly.constant(1)
ZERO = LaurentIntPoly()
T = LaurentIntPoly.monomial(1)


def _check_nonneg(*args: int) -> None:
    for a in args:
        if not isinstance(a, int) or isinstance(a, bool):
            raise DomainError(f"expected an int, got {a!r}")
        if a < 0:
            raise DomainError(f"negative argument {a}")


def t_integer(m: int) -> LaurentIntPoly:
    """(m)_t = 1 + t + ... + t^(m-1)."""
    _check_nonneg(m)
    return LaurentIntPoly({k: 1 for k in range(m)})


@lru_cache(maxsize=None)
def t_factorial(m: int) -> LaurentIntPoly:
    """(m)!_t = (1)_t (2)_t ... (m)_t, with (0)!_t = 1."""
    _check_nonneg(m)
    if m == 0:
        return ONE
    return t_factorial(m - 1) * t_integer(m)


@lru_cache(maxsize=None)
def _binom(n: int, m: int) -> LaurentIntPoly:
    if m == 0 or m == n:
        return ONE
    # C(n, m) = C(n-1, m) + t^(n-m) C(n-1, m-1)
    return _binom(n - 1, m) + _binom(n - 1, m - 1).shift(n - m)


def t_binomial(n: int, m: int) -> LaurentIntPoly:
    """Gaussian binomial coefficient via the Pascal recurrence."""
    _check_nonneg(n, m)
    if m > n:
        raise DomainError(f"binomial({n}, {m}) needs m <= n")
    return _binom(n, m)
