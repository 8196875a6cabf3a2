"""The genus group of maximal orders as an elementary abelian p-quotient of
the class group, the distance map rho between deviation-presented orders,
generator-prime selection, and the gamma-parametrization of the genus.

A maximal order in the genus is presented as a finite deviation map from
degree-one primes of K to building vertices; absent primes mean "equal to the
reference order there".
"""

from __future__ import annotations

from dataclasses import dataclass

from sympy import isprime, nextprime

from .building import LatticeClass, chamber_vertices, type_distance
from .classgroup import PrimeOfK, QuadForm, class_group, prime_class, reduce


class GeneratorSearchError(RuntimeError):
    """Raised when the bounded generator-prime scan is exhausted."""


@dataclass(frozen=True)
class GenusElement:
    """A coset of the genus group, held by its minimal form representative."""

    rep: QuadForm


class GenusGroup:
    """C_K / (C_K^p * <classes of Ram(B)>): elementary abelian of exponent p.

    Indexes the isomorphism classes of maximal orders in a degree-p^2 algebra
    with ramification set `ram`; ramified classes collapse to the identity.
    """

    def __init__(self, d: int, p: int, ram=()):
        if p % 2 == 0 or not isprime(p):
            raise ValueError("p must be an odd prime")
        base = class_group(d)
        self.base = base
        self.d = d
        self.p = p
        self.ram = frozenset(ram)
        gens = [base.pow(f, p) for f in base.elements]
        gens += [nu.class_form() for nu in self.ram]
        self.subgroup = base.subgroup_generated(gens)
        self._rep_of = {}
        reps = []
        for x in base.elements:
            if x in self._rep_of:
                continue
            coset = sorted(base.op(x, h) for h in self.subgroup)
            for y in coset:
                self._rep_of[y] = coset[0]
            reps.append(coset[0])
        self.reps = tuple(sorted(reps))
        self.identity = GenusElement(self._rep_of[base.identity])
        order = len(self.reps)
        m = 0
        while p**m < order:
            m += 1
        if p**m != order:
            raise AssertionError("genus group order is not a p-power")
        self.m = m

    @property
    def order(self) -> int:
        return len(self.reps)

    def coset(self, form: QuadForm) -> GenusElement:
        return GenusElement(self._rep_of[reduce(form)])

    def coset_of_prime(self, nu: PrimeOfK) -> GenusElement:
        return self.coset(nu.class_form())

    def mul(self, a: GenusElement, b: GenusElement) -> GenusElement:
        return self.coset(self.base.op(a.rep, b.rep))

    def pow(self, a: GenusElement, k: int) -> GenusElement:
        return self.coset(self.base.pow(a.rep, k))

    def elements(self):
        return [GenusElement(r) for r in self.reps]

    def subgroup_generated(self, elems) -> frozenset:
        seen = {self.identity}
        frontier = [self.identity]
        elems = list(elems)
        while frontier:
            x = frontier.pop()
            for g in elems:
                y = self.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return frozenset(seen)


def genus_group(d: int, p: int, ram=()) -> GenusGroup:
    return GenusGroup(d, p, ram)


class DeviationData:
    """Finite map from degree-one primes of K to building vertices.

    Presents a maximal order relative to the reference order, which is the
    standard vertex (End of the standard lattice) at every prime.
    """

    def __init__(self, local=None):
        local = dict(local or {})
        for nu, lat in local.items():
            if not isinstance(nu, PrimeOfK):
                raise TypeError("deviation keys must be primes of K")
            if nu.kind == "inert":
                raise ValueError(
                    "deviations are restricted to degree-one primes of K"
                )
            if not isinstance(lat, LatticeClass):
                raise TypeError("deviation values must be lattice classes")
            if lat.prime != nu.ell:
                raise ValueError("lattice prime must match the prime of K")
        self.local = local

    def support(self):
        return set(self.local)

    def at(self, nu: PrimeOfK, p: int) -> LatticeClass:
        lat = self.local.get(nu)
        if lat is not None:
            return lat
        return LatticeClass.standard(p, nu.ell)

    def __eq__(self, other):
        return isinstance(other, DeviationData) and self.local == other.local


def rho(dev1: DeviationData, dev2: DeviationData, g: GenusGroup) -> GenusElement:
    """Image in the genus group of the prime-by-prime type-distance idele."""
    result = g.identity
    for nu in sorted(dev1.support() | dev2.support(), key=lambda x: (x.ell, x.which)):
        td = type_distance(dev1.at(nu, g.p), dev2.at(nu, g.p))
        if td:
            result = g.mul(result, g.pow(g.coset_of_prime(nu), td))
    return result


def choose_generators(
    g: GenusGroup,
    h_l=None,
    avoid=(),
    bound: int = 10000,
) -> list:
    """Deterministic scan for degree-one primes whose classes generate g.

    With `h_l` (a set of class-group forms cut out by the degree-p field L),
    the first generator is required outside h_l (inert in L) and the rest
    inside it (split completely in L).  `bound` caps the number of rational
    primes scanned.
    """
    if g.m == 0:
        return []
    avoid_ells = {nu.ell if isinstance(nu, PrimeOfK) else int(nu) for nu in avoid}
    ram_ells = {nu.ell for nu in g.ram}
    gens = []
    generated = g.subgroup_generated([])
    ell = 1
    for _ in range(bound):
        ell = int(nextprime(ell))
        if ell in avoid_ells or ell in ram_ells:
            continue
        pk = prime_class(ell, g.d)
        if pk.kind == "inert":
            continue
        cls = g.coset_of_prime(pk)
        if cls in generated:
            continue
        if h_l is not None:
            in_hl = pk.class_form() in h_l
            if not gens and in_hl:
                continue  # first generator must be inert in L
            if gens and not in_hl:
                continue  # later generators must split completely in L
        gens.append(pk)
        generated = g.subgroup_generated([g.coset_of_prime(x) for x in gens])
        if len(generated) == g.order:
            return gens
    raise GeneratorSearchError(
        f"generator search exhausted after scanning {bound} primes"
    )


def parametrization(g: GenusGroup, gens, frames, gamma) -> DeviationData:
    """Deviation D^gamma: prime i deviated to the type-gamma_i chamber vertex."""
    gamma = tuple(int(x) % g.p for x in gamma)
    if len(gamma) != len(gens):
        raise ValueError("gamma length must match the generator count")
    local = {}
    for nu, gi in zip(gens, gamma):
        if gi == 0:
            continue
        frame = frames[nu]
        local[nu] = chamber_vertices(frame)[gi]
    return DeviationData(local)
