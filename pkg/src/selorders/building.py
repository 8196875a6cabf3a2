"""Vertices of the affine building for SL_n over Q_p-style local fields.

A vertex is a homothety class of full-rank lattices; its endomorphism ring is
a maximal order in M_n.  Type labels and the type distance are computed from
invariant factors of exact transition matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dvr import LocalMatrix, hnf_local, pval, smith_invariants


class LatticeClass:
    """Homothety class of a full lattice, held by a canonical representative.

    The representative is the local column normal form of any basis, rescaled
    so its minimal invariant-factor valuation is 0.  Two classes are equal iff
    their representatives are identical.
    """

    __slots__ = ("canonical", "prime", "n")

    def __init__(self, basis: LocalMatrix):
        h = hnf_local(basis)
        a1 = smith_invariants(h)[0]
        if a1 != 0:
            h = h.scale(Fraction(basis.prime) ** (-a1))
        self.canonical = h
        self.prime = basis.prime
        self.n = basis.n

    def __eq__(self, other):
        return (
            isinstance(other, LatticeClass) and self.canonical == other.canonical
        )

    def __hash__(self):
        return hash(self.canonical)

    def __repr__(self):
        return f"LatticeClass({self.canonical!r})"

    @classmethod
    def standard(cls, n: int, prime: int) -> "LatticeClass":
        return cls(LocalMatrix.identity(n, prime))


@dataclass(frozen=True)
class ApartmentFrame:
    """A frame of basis lines: columns of a nonsingular matrix."""

    basis: LocalMatrix

    def __post_init__(self):
        if self.basis.det() == 0:
            raise ValueError("frame must be nonsingular")

    @property
    def prime(self):
        return self.basis.prime

    @property
    def n(self):
        return self.basis.n

    @classmethod
    def standard(cls, n: int, prime: int) -> "ApartmentFrame":
        return cls(LocalMatrix.identity(n, prime))


@dataclass(frozen=True)
class OrderPattern:
    """Diagonal conjugation pattern (m_1 <= ... <= m_p), normalized m_1 = 0."""

    m: tuple

    def __post_init__(self):
        m = tuple(int(x) for x in self.m)
        if any(m[i] > m[i + 1] for i in range(len(m) - 1)):
            raise ValueError("pattern must be nondecreasing")
        if m and m[0] != 0:
            raise ValueError("pattern must be normalized to m_1 = 0")
        object.__setattr__(self, "m", m)


def type_distance(l1: LatticeClass, l2: LatticeClass) -> int:
    """Type offset between the maximal orders End(l1), End(l2), mod n.

    Computed as the sum of invariant-factor valuations of the transition
    matrix expressing l2 in the basis of l1, after rescaling into containment;
    the result is independent of representatives and of the rescaling.
    """
    if l1.prime != l2.prime or l1.n != l2.n:
        raise ValueError("lattice classes live in different buildings")
    p, n = l1.prime, l1.n
    c = l1.canonical.inverse() @ l2.canonical
    e = max(0, -min(pval(x, p) for row in c.entries for x in row))
    scaled = c.scale(Fraction(p) ** e)
    return sum(smith_invariants(scaled)) % n


def vertex_from_coords(frame: ApartmentFrame, a) -> LatticeClass:
    """Class of the lattice sum of O p^{a_i} omega_i over the frame columns."""
    a = tuple(int(x) for x in a)
    if len(a) != frame.n:
        raise ValueError("coordinate length must match frame dimension")
    p = frame.prime
    b = frame.basis.entries
    scaled = LocalMatrix(
        [
            [b[i][j] * Fraction(p) ** a[j] for j in range(frame.n)]
            for i in range(frame.n)
        ],
        p,
    )
    return LatticeClass(scaled)


def chamber_vertices(frame: ApartmentFrame) -> list:
    """The p vertices of the chamber over the frame, in type order 0..p-1.

    Vertex k spans p*omega_1, ..., p*omega_k, omega_{k+1}, ..., omega_p.
    """
    p = frame.n
    return [
        vertex_from_coords(frame, (1,) * k + (0,) * (p - k)) for k in range(p)
    ]


def end_contains(lat: LatticeClass, x: LocalMatrix) -> bool:
    """True iff x maps the lattice into itself, i.e. x lies in End(lat)."""
    if x.n != lat.n or x.prime != lat.prime:
        raise ValueError("matrix does not act on this lattice")
    b = lat.canonical
    return (b.inverse() @ x @ b).is_integral()


def order_pattern_contains(pattern: OrderPattern, x: LocalMatrix) -> bool:
    """True iff val(x[i][j]) >= m_i - m_j for all i, j."""
    m = pattern.m
    if x.n != len(m):
        raise ValueError("pattern size must match matrix dimension")
    p = x.prime
    return all(
        pval(x.entries[i][j], p) >= m[i] - m[j]
        for i in range(x.n)
        for j in range(x.n)
    )


def char_poly(x: LocalMatrix) -> list:
    """Characteristic polynomial coefficients, low degree first, exact.

    Faddeev-LeVerrier over the rationals; returns [c_0, ..., c_{n-1}, 1].
    """
    n = x.n
    a = x.entries
    m = [[Fraction(0)] * n for _ in range(n)]
    coeffs = [Fraction(1)]  # leading
    for k in range(1, n + 1):
        # m <- a @ m + c_{k-1} I
        am = [
            [sum(a[i][t] * m[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)
        ]
        for i in range(n):
            am[i][i] += coeffs[-1]
        tr = sum(
            sum(a[i][t] * am[t][i] for t in range(n)) for i in range(n)
        )
        coeffs.append(-tr / k)
        m = am
    return list(reversed(coeffs))
