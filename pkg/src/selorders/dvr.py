"""Exact arithmetic over Z localized at a prime p (a discrete valuation ring).

Scalars are arbitrary-precision rationals with a distinguished prime p, the
uniformizer.  Matrices are square and nonsingular wherever they represent
lattice bases; everything is immutable and every operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

INFINITY = float("inf")


class DegenerateLatticeError(ValueError):
    """Raised when a singular matrix is used where a lattice basis is required."""


def pval(x, p: int):
    """p-adic valuation of a rational; +infinity for zero."""
    x = Fraction(x)
    if x == 0:
        return INFINITY
    v = 0
    num = x.numerator
    while num % p == 0:
        num //= p
        v += 1
    den = x.denominator
    while den % p == 0:
        den //= p
        v -= 1
    return v


@dataclass(frozen=True)
class LocalScalar:
    """An exact rational viewed in the localization of Z at `prime`."""

    value: Fraction
    prime: int

    def __post_init__(self):
        if self.prime < 2:
            raise ValueError("prime must be >= 2")
        object.__setattr__(self, "value", Fraction(self.value))

    def val(self):
        return pval(self.value, self.prime)

    def is_integral(self) -> bool:
        return self.val() >= 0

    def _check(self, other: "LocalScalar"):
        if self.prime != other.prime:
            raise ValueError("prime mismatch")

    def __add__(self, other):
        self._check(other)
        return LocalScalar(self.value + other.value, self.prime)

    def __mul__(self, other):
        self._check(other)
        return LocalScalar(self.value * other.value, self.prime)


def val(x: LocalScalar):
    """Valuation of a LocalScalar (module-level spelling)."""
    return x.val()


class LocalMatrix:
    """A square matrix of exact rationals tied to a prime p."""

    __slots__ = ("entries", "prime", "n")

    def __init__(self, rows, prime: int):
        if prime < 2:
            raise ValueError("prime must be >= 2")
        entries = tuple(tuple(Fraction(x) for x in row) for row in rows)
        n = len(entries)
        if any(len(row) != n for row in entries):
            raise ValueError("matrix must be square")
        self.entries = entries
        self.prime = prime
        self.n = n

    @classmethod
    def identity(cls, n: int, prime: int) -> "LocalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], prime)

    @classmethod
    def diagonal(cls, diag, prime: int) -> "LocalMatrix":
        n = len(diag)
        return cls(
            [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)], prime
        )

    def __eq__(self, other):
        return (
            isinstance(other, LocalMatrix)
            and self.prime == other.prime
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.entries, self.prime))

    def __repr__(self):
        return f"LocalMatrix({[list(r) for r in self.entries]}, prime={self.prime})"

    def _check(self, other: "LocalMatrix"):
        if self.prime != other.prime:
            raise ValueError("prime mismatch")
        if self.n != other.n:
            raise ValueError("dimension mismatch")

    def __matmul__(self, other: "LocalMatrix") -> "LocalMatrix":
        self._check(other)
        n = self.n
        a, b = self.entries, other.entries
        return LocalMatrix(
            [
                [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)
            ],
            self.prime,
        )

    def scale(self, c) -> "LocalMatrix":
        c = Fraction(c)
        return LocalMatrix(
            [[c * x for x in row] for row in self.entries], self.prime
        )

    def det(self) -> Fraction:
        # fraction elimination; exact
        n = self.n
        m = [list(row) for row in self.entries]
        det = Fraction(1)
        for k in range(n):
            piv = next((i for i in range(k, n) if m[i][k] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != k:
                m[k], m[piv] = m[piv], m[k]
                det = -det
            det *= m[k][k]
            inv = 1 / m[k][k]
            for i in range(k + 1, n):
                f = m[i][k] * inv
                if f:
                    m[i] = [x - f * y for x, y in zip(m[i], m[k])]
        return det

    def inverse(self) -> "LocalMatrix":
        n = self.n
        m = [list(row) + [Fraction(int(i == j)) for j in range(n)]
             for i, row in enumerate(self.entries)]
        for k in range(n):
            piv = next((i for i in range(k, n) if m[i][k] != 0), None)
            if piv is None:
                raise DegenerateLatticeError("degenerate lattice")
            m[k], m[piv] = m[piv], m[k]
            inv = 1 / m[k][k]
            m[k] = [x * inv for x in m[k]]
            for i in range(n):
                if i != k and m[i][k]:
                    f = m[i][k]
                    m[i] = [x - f * y for x, y in zip(m[i], m[k])]
        return LocalMatrix([row[n:] for row in m], self.prime)

    def is_integral(self) -> bool:
        """True iff every entry lies in the localization (valuation >= 0)."""
        p = self.prime
        return all(pval(x, p) >= 0 for row in self.entries for x in row)

    def min_entry_val(self):
        p = self.prime
        return min(pval(x, p) for row in self.entries for x in row)


def smith_invariants(a: LocalMatrix) -> tuple:
    """Valuations (a_1 <= ... <= a_n) of the invariant factors of `a` over Z_(p).

    Elimination with a minimal-valuation pivot; over a DVR one pass per pivot
    suffices since the pivot divides every remaining entry.
    """
    p, n = a.prime, a.n
    m = [list(row) for row in a.entries]
    invs = []
    for k in range(n):
        pivot = None  # (val, i, j)
        for i in range(k, n):
            for j in range(k, n):
                if m[i][j] == 0:
                    continue
                v = pval(m[i][j], p)
                if pivot is None or (v, i, j) < pivot:
                    pivot = (v, i, j)
        if pivot is None:
            raise DegenerateLatticeError("degenerate lattice")
        _, pi, pj = pivot
        m[k], m[pi] = m[pi], m[k]
        for row in m:
            row[k], row[pj] = row[pj], row[k]
        piv = m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / piv
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
        for j in range(k + 1, n):
            f = m[k][j] / piv
            if f:
                for i in range(k, n):
                    m[i][j] -= f * m[i][k]
        invs.append(pval(piv, p))
    invs.sort()
    return tuple(invs)


def _canonical_residue(r: Fraction, e: int, p: int) -> Fraction:
    """Canonical representative of the coset r + p^e Z_(p).

    The representative carries exactly the p-adic digits of r below p^e;
    it is p^v * t with v = val(r) and t an integer in [1, p^(e-v)), p not
    dividing t (or 0 when val(r) >= e).
    """
    v = pval(r, p)
    if v >= e:
        return Fraction(0)
    u = r / Fraction(p) ** v  # p-unit rational
    k = e - v
    mod = p ** k
    t = (u.numerator * pow(u.denominator, -1, mod)) % mod
    return Fraction(t) * Fraction(p) ** v


def hnf_local(a: LocalMatrix) -> LocalMatrix:
    """Canonical column form of a nonsingular matrix over Z_(p).

    Lower triangular with p-power pivots on the diagonal; entries left of a
    pivot p^e are canonical residues mod p^e.  Two matrices have the same
    column span over the localization iff their forms are identical.
    """
    p, n = a.prime, a.n
    if a.det() == 0:
        raise DegenerateLatticeError("degenerate lattice")
    cols = [[a.entries[i][j] for i in range(n)] for j in range(n)]
    for i in range(n):
        best = None  # (val, j)
        for j in range(i, n):
            if cols[j][i] == 0:
                continue
            v = pval(cols[j][i], p)
            if best is None or (v, j) < best:
                best = (v, j)
        if best is None:
            raise DegenerateLatticeError("degenerate lattice")
        e, bj = best
        cols[i], cols[bj] = cols[bj], cols[i]
        piv = Fraction(p) ** e
        u = cols[i][i] / piv
        cols[i] = [x / u for x in cols[i]]
        for j in range(i + 1, n):
            f = cols[j][i] / piv
            if f:
                cols[j] = [x - f * y for x, y in zip(cols[j], cols[i])]
        for j in range(i):
            c = _canonical_residue(cols[j][i], e, p)
            f = (cols[j][i] - c) / piv
            if f:
                cols[j] = [x - f * y for x, y in zip(cols[j], cols[i])]
    return LocalMatrix(
        [[cols[j][i] for j in range(n)] for i in range(n)], p
    )
