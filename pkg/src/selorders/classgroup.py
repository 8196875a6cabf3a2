"""Ideal class groups of imaginary quadratic fields via binary quadratic forms.

Classes are modeled by reduced positive definite forms of a fundamental
discriminant d < 0; the group law is Dirichlet composition.  Primes of the
field are tagged with their splitting kind and (when degree one) their class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from sympy import factorint, isprime
from sympy.ntheory.residue_ntheory import sqrt_mod


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def inverse(self) -> "QuadForm":
        return reduce(QuadForm(self.a, -self.b, self.c))


def is_fundamental(d: int) -> bool:
    if d >= 0:
        return False
    if d % 4 == 1:
        return _squarefree(-d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(-m)
    return False


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(n).values())


def principal_form(d: int) -> QuadForm:
    if d % 4 == 1:
        return QuadForm(1, 1, (1 - d) // 4)
    return QuadForm(1, 0, -d // 4)


def reduce(f: QuadForm) -> QuadForm:
    """Unique reduced representative of the class of a positive definite form."""
    a, b, c = f.a, f.b, f.c
    d = b * b - 4 * a * c
    if a <= 0 or d >= 0:
        raise ValueError("form must be positive definite")
    while True:
        # normalize b into (-a, a]
        r = b % (2 * a)
        if r > a:
            r -= 2 * a
        if r != b:
            b = r
            c = (b * b - d) // (4 * a)
        if a > c:
            a, b, c = c, -b, a
            continue
        break
    if a == c and b < 0:
        b = -b
    return QuadForm(a, b, c)


def _egcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def compose(f: QuadForm, g: QuadForm) -> QuadForm:
    """Dirichlet composition, returned reduced."""
    d = f.disc()
    if g.disc() != d:
        raise ValueError("discriminant mismatch")
    a1, b1, c1 = f.a, f.b, f.c
    a2, b2, c2 = g.a, g.b, g.c
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, dd = 0, a1
    else:
        dd, u, _ = _egcd(a2, a1)
        y1 = u
    if s % dd == 0:
        y2, x2, d1 = -1, 0, dd
    else:
        d1, u, v = _egcd(s, dd)
        x2, y2 = u, -v
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    a3 = v1 * v2
    b3 = b2 + 2 * v2 * r
    c3 = (b3 * b3 - d) // (4 * a3)
    assert (b3 * b3 - d) % (4 * a3) == 0
    return reduce(QuadForm(a3, b3, c3))


def form_pow(f: QuadForm, k: int, d: int) -> QuadForm:
    result = principal_form(d)
    base = reduce(f)
    if k < 0:
        base = base.inverse()
        k = -k
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def _enumerate_reduced(d: int):
    forms = []
    amax = math.isqrt(-d // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a) != 0:
                continue
            c = (b * b - d) // (4 * a)
            if c < a:
                continue
            if b < 0 and (a == c or a == -b):
                continue  # reduced convention: b >= 0 on the boundary
            forms.append(QuadForm(a, b, c))
    return sorted(forms)


class ClassGroup:
    """The full class group of a fundamental discriminant d < 0."""

    def __init__(self, d: int):
        if not is_fundamental(d):
            raise ValueError(f"{d} is not a fundamental discriminant < 0")
        self.d = d
        self.elements = _enumerate_reduced(d)
        self.h = len(self.elements)
        self.identity = principal_form(d)
        self.structure = _abelian_structure(
            self.elements, lambda x, y: compose(x, y), self.identity
        )

    def op(self, f: QuadForm, g: QuadForm) -> QuadForm:
        return compose(f, g)

    def pow(self, f: QuadForm, k: int) -> QuadForm:
        return form_pow(f, k, self.d)

    def order_of(self, f: QuadForm) -> int:
        k = 1
        g = reduce(f)
        while g != self.identity:
            g = compose(g, f)
            k += 1
        return k

    def subgroup_generated(self, gens) -> frozenset:
        seen = {self.identity}
        frontier = [self.identity]
        gens = [reduce(g) for g in gens]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return frozenset(seen)


def _abelian_structure(elements, op, identity):
    """Invariant-factor decomposition d_1 | d_2 | ... of a finite abelian group."""
    if len(elements) == 1:
        return ()

    def order_of(x):
        k, y = 1, x
        while y != identity:
            y = op(y, x)
            k += 1
        return k

    orders = {x: order_of(x) for x in elements}
    exponent = 1
    for o in orders.values():
        exponent = exponent * o // math.gcd(exponent, o)
    g = min(x for x, o in orders.items() if o == exponent)
    # quotient by <g>: recurse on coset representatives
    cyc = [identity]
    while len(cyc) < exponent:
        cyc.append(op(cyc[-1], g))
    rep_of = {}
    reps = []
    for x in sorted(elements):
        if x in rep_of:
            continue
        coset = sorted(op(x, c) for c in cyc)
        for y in coset:
            rep_of[y] = coset[0]
        reps.append(coset[0])

    def q_op(r1, r2):
        return rep_of[op(r1, r2)]

    return _abelian_structure(reps, q_op, rep_of[identity]) + (exponent,)


@lru_cache(maxsize=None)
def class_group(d: int) -> ClassGroup:
    return ClassGroup(d)


@dataclass(frozen=True)
class PrimeOfK:
    """A prime of the imaginary quadratic field of discriminant d above ell.

    `which` picks one of the two conjugate primes when ell splits: 0 takes
    the minimal root b of b^2 = d (mod 4*ell) in [0, 2*ell), 1 the other.
    Inert primes carry no form (their class is principal, f = 2).
    """

    ell: int
    d: int
    kind: str  # 'split' | 'inert' | 'ramified'
    which: int = 0
    b: int | None = None
    form: QuadForm | None = None

    def class_form(self) -> QuadForm:
        """Ideal class of the prime; principal for inert primes (ell)."""
        if self.form is not None:
            return self.form
        return principal_form(self.d)


def splitting_kind(ell: int, d: int) -> str:
    if not isprime(ell):
        raise ValueError(f"not a rational prime: {ell}")
    if d % ell == 0:
        return "ramified"
    if ell == 2:
        return "split" if d % 8 == 1 else "inert"
    return "split" if pow(d, (ell - 1) // 2, ell) == 1 else "inert"


def _root_mod_4ell(ell: int, d: int) -> int:
    """Minimal b in [0, 2*ell) with b^2 = d (mod 4*ell)."""
    if ell == 2:
        for b in range(4):
            if (b * b - d) % 8 == 0:
                return b
        raise ValueError("no square root; prime does not have degree one")
    r = sqrt_mod(d % ell, ell)
    if r is None:
        raise ValueError("no square root; prime does not have degree one")
    candidates = []
    for base in (r, ell - r if r else 0):
        for b in (base, base + ell):
            b %= 2 * ell
            if (b * b - d) % 4 == 0:
                candidates.append(b)
    candidates = [b for b in candidates if (b * b - d) % (4 * ell) == 0]
    return min(candidates)


def prime_class(ell: int, d: int, which: int = 0) -> PrimeOfK:
    """Splitting kind of ell and, when degree one, the class of the prime above it."""
    kind = splitting_kind(ell, d)
    if kind == "inert":
        return PrimeOfK(ell, d, "inert")
    b0 = _root_mod_4ell(ell, d)
    b = b0 if which == 0 else (2 * ell - b0) % (2 * ell)
    if kind == "ramified":
        which = 0
        b = b0
    form = reduce(QuadForm(ell, b, (b * b - d) // (4 * ell)))
    return PrimeOfK(ell, d, kind, which, b, form)
