"""Removing q-skew derivations.

For a presentation whose last generator x has a derivation delta with
delta tau = q tau delta and q != 1, the map

    f(r) = sum_n q^(n(n+1)/2) (q - 1)^(-n) d_n(tau^(-n)(r)) x^(-n)

embeds the coefficient ring R into the localization at the powers of x and
satisfies x f(r) = f(tau(r)) x.  Replacing x by an invertible generator with
zero derivation therefore gives an isomorphic localization.  Iterating over
the generators from last to first, after moving the already treated ones
out of the way, ends at a quantum torus with the same commutation scalars.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import DomainError, NotRemovable, NotReorderable, SpecError
from .ore import OreElement, OreSpec, Scalar, check_qskew, QSkewFailure


@dataclass
class RemovalStep:
    """One derivation removal.

    ``source`` is the presentation the step acts on (its last generator is
    ``removed_var``); ``target`` has that generator invertible and
    derivation-free.  ``images`` sends each generator of ``target`` to an
    element of ``source.localized_spec()``; ``ore_generators`` are the
    removed generator and the cleared numerators of the nontrivial images.
    """

    removed_var: str
    source: OreSpec
    target: OreSpec
    images: dict[str, OreElement]
    ore_generators: tuple[OreElement, ...]


@dataclass
class RemovalResult:
    lambda_final: tuple
    steps: list[RemovalStep]
    ore_generators: tuple[OreElement, ...]
    torus: OreSpec = field(repr=False)


def canonical_scale(r: OreElement) -> OreElement:
    """Scale so the lexicographically largest monomial has coefficient 1."""
    if r.is_zero():
        return r
    top = max(r.terms)
    return r / r.terms[top]


def _last_q(spec: OreSpec) -> Scalar:
    i = spec.n - 1
    q = spec.qskew[i]
    if q == spec.field.one():
        raise NotRemovable(f"skew parameter of {spec.vars[i]} is 1")
    return q


def f_image(spec: OreSpec, r, max_check: int = 4, max_index: int = 64) -> OreElement:
    """Image of r (in the generators before the last) in the localization.

    The sum is cut at the nilpotence bound computed from the generator
    tables; ``max_check`` further indices are confirmed to vanish.
    """
    i = spec.n - 1
    if i < 0 or not spec.has_delta(i):
        raise NotRemovable("the last generator has no derivation")
    q = _last_q(spec)
    r = spec._own(r)
    spec._check_below(i, r.terms, "f_image")
    hd = spec.higher_derivation(i, max_index)
    L = spec.localized_spec()
    bound = hd.index_bound(r)
    qm1 = q - 1
    out: dict = {}
    for n in range(bound + 1):
        tr = spec._tau_terms(i, r.terms, -n)
        dn = hd._terms(n, tr)
        if not dn:
            continue
        coef = q ** (n * (n + 1) // 2) / qm1 ** n
        for e, c in dn.items():
            e2 = list(e)
            e2[i] = -n
            out[tuple(e2)] = c * coef
    for n in range(bound + 1, bound + 1 + max_check):
        if hd._terms(n, spec._tau_terms(i, r.terms, -n)):
            raise NotRemovable(f"d_{n} is nonzero past the nilpotence bound")
    return OreElement(L, out)


def split_by_last(r: OreElement) -> dict[int, OreElement]:
    """Write a localized element as sum_k c_k x^k; returns {k: c_k}."""
    spec = r.spec
    i = spec.n - 1
    base = spec
    out: dict[int, dict] = {}
    for e, c in r.terms.items():
        e2 = list(e)
        k = e2[i]
        e2[i] = 0
        out.setdefault(k, {})[tuple(e2)] = c
    return {k: OreElement(base, t) for k, t in sorted(out.items())}


def preimage(spec: OreSpec, r) -> dict[int, OreElement]:
    """Find a_k in R with r = sum_k f(a_k) x^(-k), by peeling off f(r) - r."""
    r = spec._own(r)
    out: dict[int, OreElement] = {}
    if r.is_zero():
        return out
    out[0] = r
    rest = f_image(spec, r) - r
    for k, rk in split_by_last(rest).items():
        if k >= 0:
            raise DomainError("f(r) - r has a nonnegative power of the last generator")
        sub = preimage(spec, spec._own(rk))
        for m, a in sub.items():
            cur = out.get(m - k)
            out[m - k] = -a if cur is None else cur - a
    return {k: v for k, v in sorted(out.items()) if not v.is_zero()}


def numerator(r: OreElement, var: int) -> OreElement:
    """r times the smallest power of x_var that clears its negative exponents."""
    m = -r.min_exponent(var)
    if m <= 0:
        return r
    return r * r.spec.gen(var, m)


def remove_last_derivation(spec: OreSpec, max_index: int = 64) -> tuple[OreSpec, RemovalStep]:
    n = spec.n
    i = n - 1
    x = spec.vars[i]
    if not spec.has_delta(i):
        images = {v: spec.localized_spec().gen(v) for v in spec.vars}
        return spec, RemovalStep(x, spec, spec, images, (spec.gen(i),))
    try:
        check_qskew(spec, i)
    except QSkewFailure as exc:
        raise NotRemovable(str(exc)) from exc
    _last_q(spec)
    L = spec.localized_spec()
    images: dict[str, OreElement] = {}
    gens = [spec.gen(i)]
    for j in range(i):
        v = spec.vars[j]
        if j in spec.invertible:
            images[v] = L.gen(j)
            continue
        img = f_image(spec, spec.gen(j), max_index=max_index)
        images[v] = img
        if img != L.gen(j):
            gens.append(canonical_scale(spec._own(numerator(img, i))))
    images[x] = L.gen(i)
    target = spec.without_delta(i)
    return target, RemovalStep(x, spec, target, images, tuple(gens))


def reorder_variables(spec: OreSpec, order: Sequence[str | int]) -> OreSpec:
    """Present the same algebra with the generators in ``order``.

    A pair may swap only if neither acts on the other by a derivation, and
    every derivation image must still be written in earlier generators.
    """
    perm = [spec.index[o] if isinstance(o, str) else o for o in order]
    if sorted(perm) != list(range(spec.n)):
        raise NotReorderable(f"{order} is not a permutation of {spec.vars}")
    pos = {old: new for new, old in enumerate(perm)}
    for (i, j), terms in spec.delta.items():
        if pos[j] > pos[i]:
            raise NotReorderable(
                f"{spec.vars[i]} acts on {spec.vars[j]} by a derivation; cannot move {spec.vars[j]} past it"
            )
        for e in terms:
            for k, v in enumerate(e):
                if v and pos[k] > pos[i]:
                    raise NotReorderable(
                        f"delta_{spec.vars[i]}({spec.vars[j]}) mentions {spec.vars[k]}, which would come later"
                    )
    try:
        return spec._derived(perm=perm)
    except SpecError as exc:
        raise NotReorderable(str(exc)) from exc


def substitute(r: OreElement, images: Mapping[str, OreElement], target: OreSpec) -> OreElement:
    """Apply the homomorphism given on generators (by name) to r."""
    spec = r.spec
    out = target.zero()
    cache: dict = {}
    for e, c in r.terms.items():
        term = target.scalar(c)
        for k, v in enumerate(e):
            if not v:
                continue
            key = (k, v)
            if key not in cache:
                img = target._own(images[spec.vars[k]])
                cache[key] = img ** v
            term = term * cache[key]
        out = out + term
    return out


def convert(r: OreElement, target: OreSpec) -> OreElement:
    """Rewrite r in another presentation of the same algebra (same names)."""
    return substitute(r, {v: target.gen(v) for v in r.spec.vars}, target)


def iterate_removal(spec: OreSpec, max_index: int = 64) -> RemovalResult:
    """Remove every derivation, last generator first."""
    current = spec
    steps: list[RemovalStep] = []
    while True:
        ds = [k for k in range(current.n) if current.has_delta(k)]
        if not ds:
            break
        k = max(ds)
        if k != current.n - 1:
            order = list(current.vars[:k]) + list(current.vars[k + 1:]) + [current.vars[k]]
            current = reorder_variables(current, order)
        current, step = remove_last_derivation(current, max_index)
        steps.append(step)
    torus = current._derived(invertible=frozenset(range(current.n)), localized=False)
    torus = reorder_variables(torus, list(spec.vars))

    gens: list[OreElement] = []
    for u in spec.vars:
        e = current.gen(u)
        for step in reversed(steps):
            L = step.source.localized_spec()
            img = substitute(e, step.images, L)
            img = numerator(img, L.index[step.removed_var])
            e = step.source._own(img)
        g = canonical_scale(convert(e, spec))
        if g not in gens:
            gens.append(g)
    return RemovalResult(torus.lam, steps, tuple(gens), torus)


@dataclass
class HomomorphismReport:
    pairs: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def removal_ready(spec: OreSpec) -> OreSpec:
    """Reorder so the last generator carrying a derivation comes last."""
    ds = [k for k in range(spec.n) if spec.has_delta(k)]
    if not ds:
        raise NotRemovable("no generator carries a derivation")
    k = max(ds)
    if k == spec.n - 1:
        return spec
    return reorder_variables(spec, list(spec.vars[:k]) + list(spec.vars[k + 1:]) + [spec.vars[k]])


def check_homomorphism(spec: OreSpec, rng, pairs: int = 100, max_degree: int = 3) -> HomomorphismReport:
    """f(rs) = f(r) f(s) and x f(r) = f(tau(r)) x on random r, s."""
    from .ore import random_element

    spec = removal_ready(spec)
    i = spec.n - 1
    L = spec.localized_spec()
    x = L.gen(i)
    rep = HomomorphismReport()
    for _ in range(pairs):
        r = random_element(spec, rng, max_degree=max_degree, upto=i)
        s = random_element(spec, rng, max_degree=max_degree, upto=i)
        fr, fs = f_image(spec, r), f_image(spec, s)
        if f_image(spec, r * s) != fr * fs:
            rep.failures.append(("multiplicative", str(r), str(s)))
        if x * fr != f_image(spec, spec.tau(i, r)) * x:
            rep.failures.append(("intertwining", str(r)))
        rep.pairs += 1
    return rep
