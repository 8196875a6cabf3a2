"""The main decision procedure: does a commutative order embed into all, none,
or exactly one out of p isomorphism classes of maximal orders?

Condition (1) -- containment of L in the class field attached to the genus --
is decided by bounded prime sampling: negative answers carry a finite
certificate, positive answers are accepted by stabilization.  Condition (2)
checks the conductor support against complete splitting, via class membership
once condition (1) holds.  Indeterminate is a first-class outcome.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from sympy import Poly, Symbol, nextprime

from .classgroup import PrimeOfK, QuadForm, prime_class
from .genus import DeviationData, GenusGroup, genus_group, rho
from .relext import OrderSpec, RelativeExtension, conductor_support, splitting_shape

INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class AlgebraSpec:
    """A central simple algebra of dimension p^2 over K, given by Ram(B)."""

    d: int
    p: int
    ram: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "ram", frozenset(self.ram))
        if self.p % 2 == 0:
            raise ValueError("p must be odd")
        for nu in self.ram:
            if not isinstance(nu, PrimeOfK) or nu.d != self.d:
                raise ValueError("ramification set must hold primes of K")


@dataclass(frozen=True)
class SampleRecord:
    ell: int
    which: int
    degrees: tuple
    repeated: bool
    coset_rep: QuadForm | None


@dataclass
class SubgroupHL:
    """Outcome of the condition-(1) test.

    status 'contained' carries the subgroup of the class group cut out by L
    (as a set of genus cosets); 'not-contained' carries a finite certificate;
    'indeterminate' reports an exhausted sampling bound.
    """

    status: str  # 'contained' | 'not-contained' | 'indeterminate'
    reason: str
    mode: str  # 'certificate' | 'stabilization' | 'exhausted'
    genus: GenusGroup
    split_cosets: frozenset = frozenset()
    samples: tuple = ()

    def contains(self, form: QuadForm) -> bool:
        if self.status != "contained":
            raise ValueError("no subgroup available: " + self.reason)
        return self.genus.coset(form) in self.split_cosets

    def member_forms(self) -> frozenset:
        """H_L as a set of reduced forms of the full class group."""
        return frozenset(
            f for f in self.genus.base.elements if self.contains(f)
        )


def embeds_in_algebra(algebra: AlgebraSpec, ext: RelativeExtension):
    """True, False, or 'indeterminate': does L embed into B?

    L embeds iff every ramified prime has all local degrees divisible by p,
    i.e. shape {p} at squarefree reductions.  Non-squarefree reductions at
    ramified primes are never silently resolved.
    """
    for nu in sorted(algebra.ram, key=lambda x: (x.ell, x.which)):
        shape = splitting_shape(nu, ext)
        if not shape.dk_legal:
            return INDETERMINATE
        if not shape.is_inert(algebra.p):
            return False
    return True


def irreducibility_check(ext: RelativeExtension, bound: int = 500):
    """True, False, or 'indeterminate': is g irreducible over K?

    Rational coefficients are decided exactly (irreducibility over Q lifts to
    K since [K:Q] = 2 is coprime to the odd degree p); otherwise a bounded
    scan looks for a prime of shape {p}, a positive certificate.
    """
    if ext.has_rational_coeffs():
        x = Symbol("x")
        poly = Poly(
            [int(c.u) for c in reversed(ext.coeffs)], x, domain="QQ"
        )
        factors = poly.factor_list()[1]
        return len(factors) == 1 and factors[0][1] == 1 and \
            factors[0][0].degree() == ext.p
    ell = 1
    for _ in range(bound):
        ell = int(nextprime(ell))
        pk = prime_class(ell, ext.d)
        if pk.kind == "inert":
            continue
        shape = splitting_shape(pk, ext)
        if shape.dk_legal and shape.degrees == (ext.p,):
            return True
    return INDETERMINATE


def class_field_membership(
    algebra: AlgebraSpec,
    ext: RelativeExtension,
    bound: int = 2000,
    stabilization: int = 200,
) -> SubgroupHL:
    """Decide condition (1): is L contained in the class field of the genus?"""
    g = genus_group(algebra.d, algebra.p, algebra.ram)
    p = algebra.p
    if g.m == 0:
        return SubgroupHL(
            "not-contained",
            "genus group is trivial; no index-p subgroup exists",
            "certificate",
            g,
        )
    samples = []
    split_cosets = set()
    inert_cosets = set()
    subgroup = g.subgroup_generated([])
    last_change = 0
    seen = 0
    ell = 1
    for _ in range(bound):
        ell = int(nextprime(ell))
        pk = prime_class(ell, algebra.d)
        if pk.kind == "inert":
            continue
        shape = splitting_shape(pk, ext)
        if not shape.dk_legal:
            samples.append(SampleRecord(ell, pk.which, shape.degrees, True, None))
            continue
        coset = g.coset_of_prime(pk)
        samples.append(
            SampleRecord(ell, pk.which, shape.degrees, False, coset.rep)
        )
        seen += 1
        if shape.is_mixed(p):
            return SubgroupHL(
                "not-contained",
                f"prime {ell} has mixed splitting shape {shape.degrees}: "
                "L/K is not an unramified cyclic extension",
                "certificate",
                g,
                samples=tuple(samples),
            )
        if shape.is_split_completely(p):
            if coset not in split_cosets:
                split_cosets.add(coset)
                subgroup = g.subgroup_generated(split_cosets)
                last_change = seen
        else:  # inert in L
            if coset not in inert_cosets:
                inert_cosets.add(coset)
                last_change = seen
            if coset == g.identity:
                return SubgroupHL(
                    "not-contained",
                    f"prime {ell} is trivial in the genus group but inert in L",
                    "certificate",
                    g,
                    samples=tuple(samples),
                )
        if subgroup & inert_cosets:
            bad = min(x.rep for x in subgroup & inert_cosets)
            return SubgroupHL(
                "not-contained",
                "splitting in L is not determined by genus classes "
                f"(witness class {bad})",
                "certificate",
                g,
                samples=tuple(samples),
            )
        if len(subgroup) == g.order:
            return SubgroupHL(
                "not-contained",
                "classes of completely split primes generate the whole "
                "genus group",
                "certificate",
                g,
                samples=tuple(samples),
            )
        if (
            len(subgroup) * p == g.order
            and inert_cosets
            and seen - last_change >= stabilization
        ):
            return SubgroupHL(
                "contained",
                "split classes stabilized to an index-p subgroup",
                "stabilization",
                g,
                split_cosets=frozenset(subgroup),
                samples=tuple(samples),
            )
    return SubgroupHL(
        INDETERMINATE,
        f"sampling bound {bound} exhausted before stabilization",
        "exhausted",
        g,
        samples=tuple(samples),
    )


@dataclass
class SelectivityVerdict:
    """Outcome record of the main decision procedure."""

    algebra: AlgebraSpec
    order: OrderSpec
    embeds: object  # bool | 'indeterminate'
    cond1: object = None  # bool | 'indeterminate' | None
    cond2: object = None
    selective: object = None
    fraction: object = None  # Fraction(1) or Fraction(1, p)
    hl: SubgroupHL | None = None
    genus: GenusGroup | None = None
    reasons: dict = field(default_factory=dict)

    @property
    def determinate(self) -> bool:
        return INDETERMINATE not in (self.embeds, self.cond1, self.cond2)


def selectivity_verdict(
    algebra: AlgebraSpec,
    order: OrderSpec,
    ext: RelativeExtension,
    bound: int = 2000,
    stabilization: int = 200,
) -> SelectivityVerdict:
    """The main-theorem decision: into which fraction of the isomorphism
    classes of maximal orders does the order embed?"""
    verdict = SelectivityVerdict(algebra, order, embeds=None)
    irr = irreducibility_check(ext, bound=min(bound, 500))
    if irr is not True:
        verdict.embeds = INDETERMINATE
        verdict.reasons["irreducibility"] = (
            "polynomial is reducible over K" if irr is False
            else "irreducibility not certified within the bound"
        )
        return verdict
    emb = embeds_in_algebra(algebra, ext)
    verdict.embeds = emb
    if emb is INDETERMINATE:
        verdict.reasons["embeds"] = (
            "a ramified prime divides disc g; splitting unresolved"
        )
        return verdict
    if emb is False:
        verdict.selective = False
        verdict.reasons["embeds"] = (
            "a ramified prime of B does not stay inert in L"
        )
        return verdict

    hl = class_field_membership(algebra, ext, bound, stabilization)
    verdict.hl = hl
    verdict.genus = hl.genus
    if hl.status == INDETERMINATE:
        verdict.cond1 = INDETERMINATE
        verdict.reasons["cond1"] = hl.reason
        return verdict
    verdict.cond1 = hl.status == "contained"
    verdict.reasons["cond1"] = f"{hl.mode}: {hl.reason}"

    if verdict.cond1:
        support = conductor_support(order, ext)
        nonsplit = []
        for nu in sorted(support, key=lambda x: (x.ell, x.which)):
            # inert primes of K are principal, hence split completely in
            # any subfield of the Hilbert class field
            form = nu.class_form()
            if not hl.contains(form):
                nonsplit.append(nu)
        verdict.cond2 = not nonsplit
        verdict.reasons["cond2"] = (
            "all conductor primes split completely in L" if not nonsplit
            else "conductor prime(s) "
            + ", ".join(str(nu.ell) for nu in nonsplit)
            + " do not split completely in L"
        )
    else:
        verdict.cond2 = None
        verdict.reasons["cond2"] = "not evaluated: condition (1) fails"

    verdict.selective = bool(verdict.cond1) and bool(verdict.cond2)
    verdict.fraction = (
        Fraction(1, algebra.p) if verdict.selective else Fraction(1)
    )
    return verdict


def admits_order(verdict: SelectivityVerdict, dev: DeviationData) -> bool:
    """Does the isomorphism class presented by `dev` contain the order?

    Non-selective verdicts admit everywhere; selective ones admit exactly the
    classes whose distance from the reference has trivial Frobenius in L/K.
    """
    if not verdict.determinate:
        raise ValueError("verdict has indeterminate components")
    if verdict.embeds is False:
        raise ValueError("L does not embed in B; no class admits the order")
    if not verdict.selective:
        return True
    image = rho(DeviationData(), dev, verdict.genus)
    return image in verdict.hl.split_cosets
