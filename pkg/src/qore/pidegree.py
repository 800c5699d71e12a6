"""PI degrees of quantum tori from integer exponent matrices.

If q is a primitive l-th root of unity and the torus has relations
x_i x_j = q^(a_ij) x_j x_i, its PI degree is sqrt(h) where h is the size of
the image of Z^n -> (Z/l)^n, v -> A v.  With the Smith form
U A V = diag(d_1, ..., d_n) this is the product of l / gcd(d_i, l).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DomainError, ParseError
from .qarith import LaurentIntPoly


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DomainError("entries do not match the stated shape")
        for r in self.entries:
            for v in r:
                if not isinstance(v, int) or isinstance(v, bool):
                    raise DomainError(f"non-integer entry {v!r}")

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        rows = [tuple(int(v) for v in r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.of([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, m: int, n: int | None = None) -> "IntMatrix":
        n = m if n is None else n
        return cls.of([[0] * n for _ in range(m)]) if m else cls(0, n, ())

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else ())

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DomainError("shape mismatch")
        out = [
            [sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols)) for j in range(other.cols)]
            for i in range(self.rows)
        ]
        return IntMatrix(self.rows, other.cols, tuple(tuple(r) for r in out))

    def __neg__(self):
        return IntMatrix.of([[-v for v in r] for r in self.entries])

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_skew_symmetric(self) -> bool:
        if not self.is_square():
            return False
        return all(self.entries[i][j] == -self.entries[j][i] for i in range(self.rows) for j in range(self.cols))

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if not self.is_square():
            raise DomainError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(r) for r in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": self.tolist()}

    @classmethod
    def from_json(cls, data: Mapping) -> "IntMatrix":
        try:
            rows, cols = int(data["rows"]), int(data["cols"])
            entries = tuple(tuple(int(v) if float(v) == int(v) else _bad(v) for v in r) for r in data["entries"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed matrix: {exc}") from exc
        try:
            return cls(rows, cols, entries)
        except DomainError as exc:
            raise ParseError(str(exc)) from exc


def _bad(v):
    raise ValueError(f"non-integer entry {v!r}")


@dataclass(frozen=True)
class SNFResult:
    S: IntMatrix
    U: IntMatrix
    V: IntMatrix
    invariant_factors: tuple[int, ...]


def smith_normal_form(A: IntMatrix) -> SNFResult:
    """Smith form with unimodular U, V and U A V = S.

    The pivot is always the smallest nonzero absolute value, ties broken in
    row-major order, so the transforms are deterministic.
    """
    m, n = A.rows, A.cols
    S = [list(r) for r in A.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(a, b):
        S[a], S[b] = S[b], S[a]
        U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for row in S:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        S[dst] = [x + k * y for x, y in zip(S[dst], S[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in S:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(min(m, n)):
        cands = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not cands:
            break
        _, i, j = min(cands)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = S[t][t]
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // p))
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // p))
            rest = [(abs(S[t][j]), t, j) for j in range(t + 1, n) if S[t][j]]
            rest += [(abs(S[i][t]), i, t) for i in range(t + 1, m) if S[i][t]]
            if rest:
                # a remainder survived; it is smaller than the pivot
                _, i, j = min(rest)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    inv = tuple(S[k][k] for k in range(min(m, n)))
    return SNFResult(IntMatrix.of(S) if m else IntMatrix(0, n, ()), IntMatrix.of(U) if m else IntMatrix(0, 0, ()), IntMatrix.of(V) if n else IntMatrix(0, 0, ()), inv)


def image_cardinality(A: IntMatrix, ell: int) -> int:
    """|image of Z^n -> (Z/ell)^m| for v -> A v."""
    if not isinstance(ell, int) or ell <= 0:
        raise DomainError(f"ell must be a positive int, got {ell!r}")
    h = 1
    for d in smith_normal_form(A).invariant_factors:
        h *= ell // math.gcd(d, ell)
    return h


def brute_force_image(A: IntMatrix, ell: int, limit: int = 10**7) -> int:
    """Count the image by enumerating (Z/ell)^n; an oracle for small cases."""
    if not isinstance(ell, int) or ell <= 0:
        raise DomainError(f"ell must be a positive int, got {ell!r}")
    n = A.cols
    if ell ** n > limit:
        raise DomainError(f"{ell}^{n} vectors exceeds the enumeration limit {limit}")
    if n == 0 or A.rows == 0:
        return 1
    vecs = np.indices((ell,) * n, dtype=np.int64).reshape(n, -1)
    img = (np.array(A.tolist(), dtype=np.int64) % ell) @ vecs % ell
    return len(np.unique(img, axis=1).T)


@dataclass(frozen=True)
class PIDegreeReport:
    ell: int
    h: int
    pi_degree: int
    invariant_factors: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "h": self.h,
            "pi_degree": self.pi_degree,
            "invariant_factors": list(self.invariant_factors),
        }


def pi_degree(A: IntMatrix, ell: int) -> PIDegreeReport:
    if not A.is_skew_symmetric():
        raise DomainError("the exponent matrix must be skew-symmetric")
    if not isinstance(ell, int) or ell <= 0:
        raise DomainError(f"ell must be a positive int, got {ell!r}")
    inv = smith_normal_form(A).invariant_factors
    h = 1
    for d in inv:
        h *= ell // math.gcd(d, ell)
    root = math.isqrt(h)
    if root * root != h:
        raise DomainError(f"image size {h} is not a square")
    return PIDegreeReport(ell, h, root, inv)


def charpoly(A: IntMatrix) -> LaurentIntPoly:
    """det(x I - A) by the Faddeev-LeVerrier recursion, in the variable t."""
    if not A.is_square():
        raise DomainError("characteristic polynomial of a non-square matrix")
    n = A.rows
    a = A.tolist()
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    M = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_(k-1) + c_(n-k+1) I
        AM = [[sum(a[i][l] * M[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        M = [[AM[i][j] + (coeffs[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
        tr = sum(sum(a[i][l] * M[l][i] for l in range(n)) for i in range(n))
        if tr % k:
            raise ArithmeticError("non-integral trace quotient")
        coeffs[n - k] = -tr // k
    return LaurentIntPoly({e: c for e, c in enumerate(coeffs)})


def exponent_matrix(lam, field) -> IntMatrix:
    """Discrete logs of commutation scalars relative to the field generator.

    Logs are taken in (-order/2, order/2] above the diagonal and negated
    below it, so a consistent table gives a skew-symmetric matrix.
    """
    n = len(lam)
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            k = field.log(lam[i][j])
            if k is None:
                raise DomainError(f"{lam[i][j]} is not a power of the field generator")
            if i == j:
                if k % field.order:
                    raise DomainError("diagonal commutation scalar is not 1")
                continue
            if k > field.order // 2:
                k -= field.order
            if i < j:
                rows[i][j] = k
            elif (k + rows[j][i]) % field.order:
                raise DomainError(f"commutation scalars at ({i}, {j}) are not mutually inverse")
            else:
                rows[i][j] = -rows[j][i]
    return IntMatrix.of(rows)
