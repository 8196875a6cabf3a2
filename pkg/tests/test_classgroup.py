"""Binary quadratic forms, composition, class groups, and primes of K.

The independent oracle for composition is multiplication of the
corresponding ideals (a, (-b + sqrt(d))/2) in O_K, reduced back to a form.
"""

import math
import random
from fractions import Fraction

import pytest

from selorders.classgroup import (
    ClassGroup,
    QuadForm,
    class_group,
    compose,
    form_pow,
    is_fundamental,
    prime_class,
    principal_form,
    reduce,
    splitting_kind,
)

# fundamental discriminants used for randomized form sampling
SAMPLE_D = [-23, -31, -47, -71, -84, -111, -164, -239]


def random_form(rng, d):
    """A random primitive form of discriminant d, via a random class and a
    random SL2(Z) change of variable."""
    group = class_group(d)
    f = rng.choice(group.elements)
    a, b, c = f.a, f.b, f.c
    for _ in range(rng.randint(1, 6)):
        if rng.random() < 0.5:
            # (a, b, c) -> (a, b + 2a, a + b + c)   [x -> x + y]
            a, b, c = a, b + 2 * a, a + b + c
        else:
            # (a, b, c) -> (c, -b, a)               [x, y -> -y, x]
            a, b, c = c, -b, a
    return QuadForm(a, b, c), f


def ideal_compose_oracle(f, g, d):
    """Compose forms by multiplying the ideals they correspond to.

    The form (a, b, c) corresponds to the Z-module with basis
    (a, (-b + sqrt(d))/2).  We multiply the two modules, take a 2-element
    Z-basis by integer row reduction of the 4 generators (as coordinates
    over 1/2 and sqrt(d)/2), and read off the reduced form.
    """
    # represent z = (x + y sqrt(d))/2 as (x, y) with x = y mod 2
    def mul(z1, z2):
        x1, y1 = z1
        x2, y2 = z2
        return ((x1 * x2 + y1 * y2 * d) // 2, (x1 * y2 + x2 * y1) // 2)

    b1 = [(2 * f.a, 0), (-f.b, 1)]
    b2 = [(2 * g.a, 0), (-g.b, 1)]
    gens = [mul(u, v) for u in b1 for v in b2]
    # row reduce over Z on (y, x): find the module's standard basis
    rows = [(y, x) for x, y in gens]
    rows = [r for r in rows if r != (0, 0)]
    # first: gcd of all y-components, realized by an actual element
    while True:
        rows.sort(key=lambda r: (r[0] == 0, abs(r[0])))
        if len(rows) < 2 or rows[1][0] == 0:
            break
        pivot = rows[0]
        new = []
        for r in rows[1:]:
            if r[0] != 0:
                q = r[0] // pivot[0]
                r = (r[0] - q * pivot[0], r[1] - q * pivot[1])
            new.append(r)
        rows = [pivot] + new
    pivot = rows[0]
    if pivot[0] < 0:
        pivot = (-pivot[0], -pivot[1])
    tail = [r[1] for r in rows[1:] if r[1] != 0]
    assert tail, "degenerate module"
    a0 = math.gcd(*tail)
    # basis: alpha = a0/2 (rational), beta = (x1 + y1 sqrt d)/2 with y1 > 0;
    # Norm(ideal) = a0 * y1 / 2, and the class of the module is read off as
    # N(x*alpha - y*beta) / N(ideal)
    y1, x1 = pivot
    n_ideal = Fraction(a0 * y1, 2)
    na = Fraction(a0 * a0, 4) / n_ideal
    nb = Fraction(-2 * (a0 * x1), 4) / n_ideal
    nc = (Fraction(x1 * x1 - y1 * y1 * d, 4)) / n_ideal
    assert na.denominator == 1 and nb.denominator == 1 and nc.denominator == 1
    form = QuadForm(int(na), int(nb), int(nc))
    if form.a < 0:
        form = QuadForm(-form.a, form.b, -form.c)
    return reduce(form)


def test_is_fundamental():
    assert is_fundamental(-4)
    assert is_fundamental(-23)
    assert not is_fundamental(-12)  # -3 * 4
    assert not is_fundamental(-21)  # -21 = 3 mod 4
    assert not is_fundamental(5)


def test_reduce_fixture():
    assert reduce(QuadForm(3, 10, 9)) == QuadForm(1, 0, 2)
    assert reduce(QuadForm(2, -2, 3)) == QuadForm(2, 2, 3)
    f = reduce(QuadForm(7, 29, 31))
    assert abs(f.b) <= f.a <= f.c and f.disc() == QuadForm(7, 29, 31).disc()


def test_reduce_preserves_class():
    rng = random.Random(17)
    for _ in range(60):
        d = rng.choice(SAMPLE_D)
        f, cls = random_form(rng, d)
        assert f.disc() == d
        assert reduce(f) == cls


def test_compose_against_ideal_oracle():
    rng = random.Random(29)
    for _ in range(80):
        d = rng.choice(SAMPLE_D)
        group = class_group(d)
        f = rng.choice(group.elements)
        g = rng.choice(group.elements)
        assert compose(f, g) == ideal_compose_oracle(f, g, d)


def test_group_axioms():
    for d in (-23, -47, -84):
        group = class_group(d)
        e = group.identity
        assert e == principal_form(d)
        for f in group.elements:
            assert group.op(f, e) == f
            assert group.op(f, f.inverse()) == e
            for g in group.elements:
                assert group.op(f, g) == group.op(g, f)


def test_known_class_numbers():
    assert class_group(-4).h == 1
    assert class_group(-23).h == 3
    assert class_group(-31).h == 3
    assert class_group(-47).h == 5
    assert class_group(-23).structure == (3,)
    assert class_group(-84).structure == (2, 2)


def test_form_pow():
    group = class_group(-47)
    f = next(x for x in group.elements if x != group.identity)
    assert form_pow(f, 5, -47) == group.identity
    assert form_pow(f, 0, -47) == group.identity
    assert form_pow(f, -1, -47) == reduce(f.inverse())


def test_splitting_kinds():
    assert splitting_kind(2, -23) == "split"
    assert splitting_kind(23, -23) == "ramified"
    assert splitting_kind(5, -23) == "inert"
    assert splitting_kind(2, -4) == "ramified"
    assert splitting_kind(59, -23) == "split"


def test_prime_class_fixtures():
    nu = prime_class(2, -23)
    assert nu.kind == "split"
    assert nu.class_form() == QuadForm(2, 1, 3)
    conj = prime_class(2, -23, which=1)
    assert conj.class_form() == QuadForm(2, -1, 3)
    assert reduce(compose(nu.class_form(), conj.class_form())) \
        == principal_form(-23)
    # inert primes are principal
    assert prime_class(5, -23).class_form() == principal_form(-23)
    # primes above 59 in Q(sqrt(-23)) are principal
    assert prime_class(59, -23).class_form() == principal_form(-23)


def test_prime_class_which_normalization():
    # inert primes ignore the conjugate choice
    assert prime_class(5, -23, which=1).which == 0
    # ramified primes are self-conjugate
    ram0 = prime_class(23, -23, which=0)
    ram1 = prime_class(23, -23, which=1)
    assert ram0 == ram1 and ram1.which == 0
    with pytest.raises(ValueError):
        prime_class(0, -23)


def test_enumeration_oracle_small_range():
    # compare composition-built structure against brute-force orders
    for d in (-23, -47, -71, -84, -120):
        if not is_fundamental(d):
            continue
        group = ClassGroup(d)
        e = group.identity
        total = 1
        for inv in group.structure:
            total *= inv
        assert total == group.h
        for f in group.elements:
            k = group.order_of(f)
            assert group.pow(f, k) == e
            assert group.h % k == 0
