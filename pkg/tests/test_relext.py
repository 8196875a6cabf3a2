"""Quadratic integers, residue fields, splitting shapes of degree-p
extensions, and conductor supports.

Splitting shapes at degree-one primes are cross-checked by brute-force root
counting over the residue field, an oracle independent of the distinct-degree
factorization ladder.
"""

from fractions import Fraction

import pytest

from selorders.classgroup import prime_class
from selorders.relext import (
    OrderSpec,
    QuadInt,
    RelativeExtension,
    conductor_support,
    disc_poly,
    distinct_factor_degrees,
    omega_trace_norm,
    poly_divmod,
    poly_gcd,
    poly_mul,
    residue_field,
    splitting_shape,
)

X3_X_1 = RelativeExtension.from_int_coeffs(-23, 3, [-1, -1, 0, 1])


def brute_force_shape(nu, ext):
    """Factor degrees over F_ell / F_ell^2 by exhaustive root splitting."""
    rf = residue_field(nu)
    f = rf.field
    coeffs = [rf.reduce(c) for c in ext.coeffs]

    def poly_eval(g, x):
        acc = f.zero
        for c in reversed(g):
            acc = f.add(f.mul(acc, x), c)
        return acc

    degrees = []
    g = list(coeffs)
    roots_found = True
    while len(g) > 2 and roots_found:
        roots_found = False
        for x in f.elements():
            if poly_eval(g, x) == f.zero:
                # divide off (t - x)
                lin = [f.neg(x), f.one]
                q, r = poly_divmod(f, g, lin)
                assert all(c == f.zero for c in r)
                g = q
                degrees.append(1)
                roots_found = True
                break
    rest = len(g) - 1
    if rest == 1:
        degrees.append(1)
    elif rest > 0:
        # no roots left: for p = 3 the residual quadratic/cubic is
        # irreducible iff it still has no root, which we just checked
        degrees.append(rest)
    return tuple(sorted(degrees))


def test_omega_trace_norm():
    assert omega_trace_norm(-23) == (1, 6)   # x^2 - x + 6
    assert omega_trace_norm(-4) == (0, 1)    # x^2 + 1
    assert omega_trace_norm(-84) == (0, 21)  # x^2 + 21


def test_quadint_arithmetic():
    w = QuadInt(Fraction(0), Fraction(1), -23)  # omega
    t, n = omega_trace_norm(-23)
    sq = w * w
    # omega^2 = t*omega - n
    assert sq == QuadInt(Fraction(-n), Fraction(t), -23)
    assert (w + w).v == 2
    assert w.norm() == n
    inv = w.inverse()
    assert (w * inv) == QuadInt(Fraction(1), Fraction(0), -23)


def test_quadint_integrality():
    assert QuadInt(Fraction(3), Fraction(-2), -23).is_integral()
    assert not QuadInt(Fraction(1, 2), Fraction(0), -23).is_integral()


def test_residue_field_split():
    nu = prime_class(2, -23)
    rf = residue_field(nu)
    assert rf.q == 2
    w = QuadInt(Fraction(0), Fraction(1), -23)
    assert rf.reduce(w) == 1  # omega = (1 + sqrt(-23))/2 maps to 1 mod nu


def test_residue_field_inert():
    nu = prime_class(5, -23)
    rf = residue_field(nu)
    assert rf.q == 25
    w = QuadInt(Fraction(0), Fraction(1), -23)
    img = rf.reduce(w)
    f = rf.field
    t, n = omega_trace_norm(-23)
    # image satisfies x^2 - t x + n = 0 in F_25
    lhs = f.sub(f.mul(img, img), f.mul(rf.reduce(QuadInt(Fraction(t), Fraction(0), -23)), img))
    assert f.add(lhs, rf.reduce(QuadInt(Fraction(n), Fraction(0), -23))) == f.zero


def test_residue_field_ramified():
    nu = prime_class(23, -23)
    rf = residue_field(nu)
    assert rf.q == 23
    w = QuadInt(Fraction(0), Fraction(1), -23)
    assert rf.reduce(w) == 12  # (1 + sqrt(-23))/2 = (1 + 0)/2 = 12 mod 23


def test_poly_toolkit_over_small_field():
    nu = prime_class(31, -23)
    f = residue_field(nu).field
    a = [3, 0, 1]       # x^2 + 3
    b = [1, 1]          # x + 1
    prod = poly_mul(f, a, b)
    q, r = poly_divmod(f, prod, b)
    assert q == a and r == []
    g = poly_gcd(f, prod, b)
    assert len(g) == 2  # gcd is x + 1 up to scalar


def test_distinct_factor_degrees_quadratic():
    nu = prime_class(3, -23)
    f = residue_field(nu).field
    # x^2 + 1 mod 3: -1 is not a QR mod 3, irreducible
    assert distinct_factor_degrees(f, [1, 0, 1]) == (2,)
    # x^2 - 1 = (x-1)(x+1)
    assert distinct_factor_degrees(f, [2, 0, 1]) == (1, 1)
    # x^2: only the distinct factor x is reported
    assert distinct_factor_degrees(f, [0, 0, 1]) == (1,)


def test_disc_poly():
    assert disc_poly(X3_X_1) == QuadInt(Fraction(-23), Fraction(0), -23)
    cube = RelativeExtension.from_int_coeffs(-23, 3, [-1, 0, 0, 1])
    assert disc_poly(cube) == QuadInt(Fraction(-27), Fraction(0), -23)


def test_extension_validation():
    with pytest.raises(ValueError):
        RelativeExtension.from_int_coeffs(-23, 3, [1, 1])  # wrong degree
    with pytest.raises(ValueError):
        RelativeExtension.from_int_coeffs(-23, 3, [-1, 0, 0, 2])  # not monic
    with pytest.raises(ValueError):
        RelativeExtension(-23, 3, (
            QuadInt(Fraction(1, 2), Fraction(0), -23),
            QuadInt(Fraction(0), Fraction(0), -23),
            QuadInt(Fraction(0), Fraction(0), -23),
            QuadInt(Fraction(1), Fraction(0), -23),
        ))  # non-integral coefficient


def test_splitting_shapes_hilbert_cubic():
    # x^3 - x - 1 cuts out the degree-3 unramified extension of Q(sqrt(-23)):
    # splitting is governed by the ideal class of the prime
    nu2 = prime_class(2, -23)        # class of order 3: inert in L
    assert splitting_shape(nu2, X3_X_1).degrees == (3,)
    nu59 = prime_class(59, -23)      # principal: splits completely
    assert splitting_shape(nu59, X3_X_1).degrees == (1, 1, 1)
    nu5 = prime_class(5, -23)        # inert in K, principal: splits
    assert splitting_shape(nu5, X3_X_1).degrees == (1, 1, 1)


def test_splitting_shape_repeated():
    nu23 = prime_class(23, -23)
    shape = splitting_shape(nu23, X3_X_1)
    assert shape.repeated and not shape.dk_legal


def test_shape_against_brute_force():
    for ell in (2, 3, 13, 29, 31, 41, 47, 59, 71):
        nu = prime_class(ell, -23)
        if nu.kind == "inert":
            continue
        shape = splitting_shape(nu, X3_X_1)
        if shape.dk_legal:
            assert shape.degrees == brute_force_shape(nu, X3_X_1)


def test_shape_predicates():
    nu2 = prime_class(2, -23)
    s = splitting_shape(nu2, X3_X_1)
    assert s.is_inert(3) and not s.is_split_completely(3) and not s.is_mixed(3)
    nu59 = prime_class(59, -23)
    s = splitting_shape(nu59, X3_X_1)
    assert s.is_split_completely(3) and not s.is_inert(3)


def test_conductor_support_multiplier():
    nu = prime_class(2, -23)
    spec = OrderSpec("multiplier", nu)
    assert conductor_support(spec, X3_X_1) == frozenset({nu})


def test_conductor_support_monogenic():
    spec = OrderSpec("monogenic")
    support = conductor_support(spec, X3_X_1)
    # disc(x^3 - x - 1) = -23: the only candidate is the ramified prime,
    # and O_K[alpha] is maximal there iff 23 divides the index, which it
    # does not; either answer must be a subset of primes above 23
    assert all(nu.ell == 23 for nu in support)
