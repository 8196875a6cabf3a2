"""Degree-p extensions of an imaginary quadratic field K given by a monic
polynomial g over O_K; splitting shapes of primes via residue-field
factorization, polynomial discriminants, and conductor support for the
supported order families (monogenic and multiplier).

O_K = Z[omega] with omega = (1 + sqrt(d))/2 for d odd, omega = sqrt(d)/2 for
d divisible by 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import factorint

from .classgroup import PrimeOfK, is_fundamental, prime_class


def omega_trace_norm(d: int):
    """(T, N) with omega^2 = T*omega - N, i.e. min poly x^2 - T x + N."""
    if d % 4 == 1:
        return 1, (1 - d) // 4
    return 0, -d // 4


@dataclass(frozen=True)
class QuadInt:
    """u + v*omega in O_K (or its fraction field when coordinates are rational)."""

    u: Fraction
    v: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "u", Fraction(self.u))
        object.__setattr__(self, "v", Fraction(self.v))

    def _coerce(self, other):
        if isinstance(other, QuadInt):
            if other.d != self.d:
                raise ValueError("discriminant mismatch")
            return other
        return QuadInt(other, 0, self.d)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadInt(self.u + o.u, self.v + o.v, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        return QuadInt(self.u - o.u, self.v - o.v, self.d)

    def __neg__(self):
        return QuadInt(-self.u, -self.v, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        t, n = omega_trace_norm(self.d)
        return QuadInt(
            self.u * o.u - n * self.v * o.v,
            self.u * o.v + self.v * o.u + t * self.v * o.v,
            self.d,
        )

    def is_zero(self):
        return self.u == 0 and self.v == 0

    def is_rational(self):
        return self.v == 0

    def norm(self) -> Fraction:
        t, n = omega_trace_norm(self.d)
        return self.u * self.u + t * self.u * self.v + n * self.v * self.v

    def inverse(self) -> "QuadInt":
        t, _ = omega_trace_norm(self.d)
        nm = self.norm()
        if nm == 0:
            raise ZeroDivisionError("zero element")
        conj = QuadInt(self.u + t * self.v, -self.v, self.d)
        return QuadInt(conj.u / nm, conj.v / nm, self.d)

    def is_integral(self):
        return self.u.denominator == 1 and self.v.denominator == 1


# ---------------------------------------------------------------------------
# residue fields


class PrimeField:
    """F_ell; elements are ints in [0, ell)."""

    def __init__(self, ell: int):
        self.ell = ell
        self.q = ell
        self.zero = 0
        self.one = 1

    def add(self, x, y):
        return (x + y) % self.ell

    def sub(self, x, y):
        return (x - y) % self.ell

    def neg(self, x):
        return (-x) % self.ell

    def mul(self, x, y):
        return (x * y) % self.ell

    def inv(self, x):
        return pow(x, -1, self.ell)

    def elements(self):
        return range(self.ell)


class QuadExtField:
    """F_{ell^2} = F_ell[t]/(t^2 - T t + N); elements are pairs (a0, a1)."""

    def __init__(self, ell: int, t: int, n: int):
        self.ell = ell
        self.q = ell * ell
        self.t = t % ell
        self.n = n % ell
        self.zero = (0, 0)
        self.one = (1, 0)

    def add(self, x, y):
        return ((x[0] + y[0]) % self.ell, (x[1] + y[1]) % self.ell)

    def sub(self, x, y):
        return ((x[0] - y[0]) % self.ell, (x[1] - y[1]) % self.ell)

    def neg(self, x):
        return ((-x[0]) % self.ell, (-x[1]) % self.ell)

    def mul(self, x, y):
        ell, t, n = self.ell, self.t, self.n
        return (
            (x[0] * y[0] - n * x[1] * y[1]) % ell,
            (x[0] * y[1] + x[1] * y[0] + t * x[1] * y[1]) % ell,
        )

    def inv(self, x):
        ell, t, n = self.ell, self.t, self.n
        nm = (x[0] * x[0] + t * x[0] * x[1] + n * x[1] * x[1]) % ell
        c = pow(nm, -1, ell)
        return (((x[0] + t * x[1]) * c) % ell, (-x[1] * c) % ell)

    def elements(self):
        return ((a, b) for a in range(self.ell) for b in range(self.ell))


@dataclass(frozen=True)
class ResidueField:
    """Residue field of a prime of K with the reduction map on O_K."""

    nu: PrimeOfK
    field: object
    omega_image: object

    @property
    def q(self):
        return self.field.q

    def reduce(self, x: QuadInt):
        # ell-integral rationals reduce through a modular inverse
        f = self.field
        ell = self.nu.ell
        ru = (x.u.numerator * pow(x.u.denominator, -1, ell)) % ell
        rv = (x.v.numerator * pow(x.v.denominator, -1, ell)) % ell
        return f.add(self._lift(ru), f.mul(self._lift(rv), self.omega_image))

    def _lift(self, r: int):
        f = self.field
        if isinstance(f, PrimeField):
            return r % f.ell
        return (r % f.ell, 0)


def residue_field(nu: PrimeOfK) -> ResidueField:
    """F_ell with omega mapped per `which` for degree-one primes; F_{ell^2}
    presented as F_ell[t]/(min poly of omega) for inert primes."""
    t, n = omega_trace_norm(nu.d)
    ell = nu.ell
    if nu.kind == "inert":
        f = QuadExtField(ell, t, n)
        return ResidueField(nu, f, (0, 1))
    b = nu.b
    if nu.d % 4 == 1:
        r = ((1 + b) // 2) % ell
    else:
        r = (b // 2) % ell
    return ResidueField(nu, PrimeField(ell), r)


# ---------------------------------------------------------------------------
# polynomials over a finite field: coefficient lists, low degree first


def poly_trim(f, coeffs):
    while coeffs and coeffs[-1] == f.zero:
        coeffs.pop()
    return coeffs


def poly_deg(coeffs):
    return len(coeffs) - 1


def poly_sub(f, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else f.zero
        y = b[i] if i < len(b) else f.zero
        out.append(f.sub(x, y))
    return poly_trim(f, out)


def poly_mul(f, a, b):
    if not a or not b:
        return []
    out = [f.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == f.zero:
            continue
        for j, y in enumerate(b):
            out[i + j] = f.add(out[i + j], f.mul(x, y))
    return poly_trim(f, out)


def poly_divmod(f, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [f.zero] * max(0, len(a) - len(b) + 1)
    inv_lead = f.inv(b[-1])
    while len(a) >= len(b):
        c = f.mul(a[-1], inv_lead)
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] = f.sub(a[k + i], f.mul(c, y))
        poly_trim(f, a)
        if not a:
            break
    return poly_trim(f, q), a


def poly_mod(f, a, b):
    return poly_divmod(f, a, b)[1]


def poly_monic(f, a):
    if not a:
        return a
    inv = f.inv(a[-1])
    return [f.mul(x, inv) for x in a]


def poly_gcd(f, a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, poly_mod(f, a, b)
    return poly_monic(f, a)


def poly_deriv(f, a):
    out = []
    for i in range(1, len(a)):
        c = f.zero
        for _ in range(i):
            c = f.add(c, a[i])
        out.append(c)
    return poly_trim(f, out)


def poly_powmod(f, a, e: int, m):
    result = [f.one]
    a = poly_mod(f, a, m)
    while e:
        if e & 1:
            result = poly_mod(f, poly_mul(f, result, a), m)
        a = poly_mod(f, poly_mul(f, a, a), m)
        e >>= 1
    return result


def _char_root(f, a):
    """Inverse Frobenius on a polynomial with zero derivative: g(x^ell) -> g."""
    ell = f.ell
    out = []
    for i in range(0, len(a), ell):
        c = a[i]
        # ell-th root of c is c^(q/ell)
        e = f.q // ell
        root = f.one
        base = c
        k = e
        while k:
            if k & 1:
                root = f.mul(root, base)
            base = f.mul(base, base)
            k >>= 1
        out.append(root)
    return poly_trim(f, out)


def distinct_factor_degrees(f, g) -> tuple:
    """Degrees (with multiplicity over distinct factors) of the irreducible
    factors of g over the field f, via the gcd ladder x^(q^i) - x."""
    g = poly_monic(f, list(g))
    degrees = []
    while poly_deg(g) > 0:
        dg = poly_deriv(f, g)
        if not dg:
            g = _char_root(f, g)
            continue
        v = poly_divmod(f, g, poly_gcd(f, g, dg))[0]
        v = poly_monic(f, v)
        # v is squarefree: distinct-degree ladder
        x = [f.zero, f.one]
        w = list(v)
        power = x
        i = 0
        while poly_deg(w) > 0:
            i += 1
            power = poly_powmod(f, power, f.q, v)
            h = poly_gcd(f, poly_sub(f, poly_mod(f, power, w), poly_mod(f, x, w)), w)
            if poly_deg(h) > 0:
                degrees.extend([i] * (poly_deg(h) // i))
                w = poly_monic(f, poly_divmod(f, w, h)[0])
            if i > poly_deg(v):
                raise RuntimeError("distinct-degree ladder failed to terminate")
        # strip all occurrences of v's factors from g
        while True:
            common = poly_gcd(f, g, v)
            if poly_deg(common) < 1:
                break
            g = poly_monic(f, poly_divmod(f, g, common)[0])
    return tuple(sorted(degrees))


# ---------------------------------------------------------------------------
# relative extensions


@dataclass(frozen=True)
class SplitShape:
    """Residue degrees of the distinct irreducible factors of g mod nu."""

    degrees: tuple
    repeated: bool

    def is_split_completely(self, p: int) -> bool:
        return not self.repeated and self.degrees == (1,) * p

    def is_inert(self, p: int) -> bool:
        return not self.repeated and self.degrees == (p,)

    def is_mixed(self, p: int) -> bool:
        return not self.repeated and not (
            self.is_split_completely(p) or self.is_inert(p)
        )

    @property
    def dk_legal(self) -> bool:
        """Squarefree reduction: Dedekind-Kummer applies unconditionally."""
        return not self.repeated


@dataclass(frozen=True)
class RelativeExtension:
    """L = K[x]/(g) for a monic degree-p polynomial g over O_K."""

    d: int
    p: int
    coeffs: tuple  # QuadInt, low degree first, length p + 1, monic

    def __post_init__(self):
        if not is_fundamental(self.d):
            raise ValueError("d must be a fundamental discriminant < 0")
        coeffs = tuple(
            c if isinstance(c, QuadInt) else QuadInt(c, 0, self.d)
            for c in self.coeffs
        )
        if len(coeffs) != self.p + 1:
            raise ValueError("polynomial must have degree p")
        if coeffs[-1].u != 1 or coeffs[-1].v != 0:
            raise ValueError("polynomial must be monic")
        if any(not c.is_integral() for c in coeffs):
            raise ValueError("coefficients must lie in O_K")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_int_coeffs(cls, d: int, p: int, coeffs) -> "RelativeExtension":
        return cls(d, p, tuple(QuadInt(c, 0, d) for c in coeffs))

    def has_rational_coeffs(self) -> bool:
        return all(c.is_rational() for c in self.coeffs)


def disc_poly(ext: RelativeExtension) -> QuadInt:
    """Discriminant of g: signed Sylvester resultant of g and g'."""
    p = ext.p
    g = list(ext.coeffs)
    dg = [ext.coeffs[i] * i for i in range(1, p + 1)]
    n, m = p, p - 1
    size = n + m
    zero = QuadInt(0, 0, ext.d)
    rows = []
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(g)):
            row[i + j] = c
        rows.append(row)
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(dg)):
            row[i + j] = c
        rows.append(row)
    res = _quadint_det(rows, ext.d)
    sign = -1 if (p * (p - 1) // 2) % 2 else 1
    out = res * sign
    assert out.is_integral()
    return out


def _quadint_det(rows, d: int) -> QuadInt:
    n = len(rows)
    m = [list(r) for r in rows]
    det = QuadInt(1, 0, d)
    for k in range(n):
        piv = next((i for i in range(k, n) if not m[i][k].is_zero()), None)
        if piv is None:
            return QuadInt(0, 0, d)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det = det * m[k][k]
        inv = m[k][k].inverse()
        for i in range(k + 1, n):
            f = m[i][k] * inv
            if not f.is_zero():
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return det


def splitting_shape(nu: PrimeOfK, ext: RelativeExtension) -> SplitShape:
    """Shape of g mod nu; the repeated flag marks squarefree failure, where
    Dedekind-Kummer conclusions about nu in L are not certified."""
    if nu.d != ext.d:
        raise ValueError("prime and extension disagree on the base field")
    rf = residue_field(nu)
    f = rf.field
    g = poly_trim(f, [rf.reduce(c) for c in ext.coeffs])
    if poly_deg(g) != ext.p:
        raise ValueError("reduction dropped the leading coefficient")
    dg = poly_deriv(f, g)
    repeated = (not dg) or poly_deg(poly_gcd(f, g, dg)) > 0
    degrees = distinct_factor_degrees(f, g)
    return SplitShape(degrees, repeated)


@dataclass(frozen=True)
class OrderSpec:
    """A commutative order in O_L: monogenic O_K[a] or multiplier O_K + nu*O_L."""

    family: str  # 'monogenic' | 'multiplier'
    nu: PrimeOfK | None = None

    def __post_init__(self):
        if self.family not in ("monogenic", "multiplier"):
            raise ValueError("unknown order family")
        if self.family == "multiplier" and self.nu is None:
            raise ValueError("multiplier family requires a prime")


def conductor_support(spec: OrderSpec, ext: RelativeExtension) -> frozenset:
    """Primes of K dividing the norm of the conductor of the order.

    Monogenic family: primes dividing (disc g) -- exact when L/K is everywhere
    unramified, an over-approximation otherwise.  Multiplier family: {nu}.
    """
    if spec.family == "multiplier":
        return frozenset([spec.nu])
    dd = disc_poly(ext)
    if dd.is_zero():
        raise ValueError("polynomial is not squarefree over K")
    nm = abs(int(dd.norm()))
    support = set()
    for ell in factorint(nm):
        kind = prime_class(ell, ext.d).kind
        if kind == "inert":
            if int(dd.u) % ell == 0 and int(dd.v) % ell == 0:
                support.add(prime_class(ell, ext.d))
        else:
            for which in (0, 1) if kind == "split" else (0,):
                nu = prime_class(ell, ext.d, which)
                rf = residue_field(nu)
                if rf.reduce(dd) == rf.field.zero:
                    support.add(nu)
    return frozenset(support)
