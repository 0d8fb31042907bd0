"""Concrete model of the metabelian 2-group G = <rho, sigma, tau> and its transfer maps.

Elements are normal forms rho^eps * sigma^a * tau^b over the abelian normal
subgroup A = <sigma, tau> of index 2.  The defining data (m, n, q, psi):

  q = 1:  sigma^(2^m) = tau^(2^(n+1)) = 1,  rho^2 = psi,
          rho^-1 sigma rho = sigma^-1, rho^-1 tau rho = tau^-1,
          psi = sigma^(2^(m-1))                (SIGMA_ONLY)
              | tau^(2^n) sigma^(2^(m-1))      (TAU_SIGMA)
  q = 2:  sigma^(2^(m+1)) = tau^(2^(n+2)) = 1, sigma^(2^m) = tau^(2^(n+1)),
          rho^2 = tau^(2^n) sigma^(2^(m-1)),
          rho^-1 sigma rho = sigma^3, rho^-1 tau rho = tau^-1.

Construction validates that conjugation by rho squares to the identity on A
and fixes psi (this forces m = 2 when q = 2); inconsistent parameters are
rejected loudly rather than silently collapsing the group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import reduce

from .abelian import AbelianType, abelian_structure

__all__ = [
    "PsiVariant",
    "PresentationError",
    "GPresentation",
    "Subgroup",
    "ClassVector",
    "CLASS_VECTORS",
    "span",
    "transfer",
    "transfer_index2",
    "transfer_kernel",
    "abelian_invariants",
    "lower_central_series",
]

ENUMERATION_GUARD = 1 << 20

GElement = tuple[int, int, int]  # (eps, a, b) in normal form


class PsiVariant(Enum):
    SIGMA_ONLY = "sigma"
    TAU_SIGMA = "tau-sigma"


class PresentationError(ValueError):
    """The (m, n, q, psi) data does not define a consistent group."""


@dataclass(frozen=True)
class GPresentation:
    m: int
    n: int
    q: int
    psi: PsiVariant = PsiVariant.TAU_SIGMA

    def __post_init__(self) -> None:
        if self.m < 2 or self.n < 1:
            raise PresentationError(f"need m >= 2 and n >= 1, got m={self.m}, n={self.n}")
        if self.q not in (1, 2):
            raise PresentationError(f"q must be 1 or 2, got {self.q}")
        if self.q == 2 and self.psi is not PsiVariant.TAU_SIGMA:
            raise PresentationError("q = 2 forces rho^2 = tau^(2^n) sigma^(2^(m-1))")
        # conjugation by rho must be an involution of A fixing psi
        for g in (self.sigma(), self.tau()):
            twice = self._conj_a(*self._conj_a(g[1], g[2]))
            if twice != (g[1], g[2]):
                raise PresentationError(
                    f"rho^-2 g rho^2 != g for (m={self.m}, n={self.n}, q={self.q}); "
                    "inconsistent presentation (q = 2 requires m = 2)"
                )
        pa, pb = self._psi_exponents()
        if self._canon(self._conj_a(pa, pb)[0], self._conj_a(pa, pb)[1]) != self._canon(pa, pb):
            raise PresentationError("conjugation by rho does not fix psi")

    # --- structural constants -------------------------------------------

    @property
    def a_mod(self) -> int:
        return 1 << (self.m + 1 if self.q == 2 else self.m)

    @property
    def b_mod(self) -> int:
        return 1 << (self.n + 1)

    @property
    def order(self) -> int:
        return 2 * self.a_mod * self.b_mod

    @property
    def sigma_twist(self) -> int:
        # rho^-1 sigma rho = sigma^sigma_twist
        return 3 if self.q == 2 else -1

    def _psi_exponents(self) -> tuple[int, int]:
        pa = 1 << (self.m - 1)
        pb = 0 if (self.q == 1 and self.psi is PsiVariant.SIGMA_ONLY) else 1 << self.n
        return pa, pb

    # --- normal forms ----------------------------------------------------

    def _canon(self, a: int, b: int) -> tuple[int, int]:
        if self.q == 1:
            return a % self.a_mod, b % self.b_mod
        b %= 1 << (self.n + 2)
        if b >= self.b_mod:  # tau^(2^(n+1)) = sigma^(2^m)
            b -= self.b_mod
            a += 1 << self.m
        return a % self.a_mod, b % self.b_mod

    def element(self, eps: int, a: int, b: int) -> GElement:
        a, b = self._canon(a, b)
        return (eps & 1, a, b)

    def identity(self) -> GElement:
        return (0, 0, 0)

    def rho(self) -> GElement:
        return (1, 0, 0)

    def sigma(self) -> GElement:
        return self.element(0, 1, 0)

    def tau(self) -> GElement:
        return self.element(0, 0, 1)

    def _conj_a(self, a: int, b: int) -> tuple[int, int]:
        # rho^-1 (sigma^a tau^b) rho
        return self._canon(a * self.sigma_twist, -b)

    def mul(self, x: GElement, y: GElement) -> GElement:
        e1, a1, b1 = x
        e2, a2, b2 = y
        if e2:
            a1, b1 = self._conj_a(a1, b1)
        e = e1 + e2
        a = a1 + a2
        b = b1 + b2
        if e == 2:
            pa, pb = self._psi_exponents()
            e, a, b = 0, a + pa, b + pb
        a, b = self._canon(a, b)
        return (e, a, b)

    def inv(self, x: GElement) -> GElement:
        e, a, b = x
        if e == 0:
            return self.element(0, -a, -b)
        pa, pb = self._psi_exponents()
        return self.element(1, -a * self.sigma_twist - pa, b - pb)

    def power(self, x: GElement, k: int) -> GElement:
        if k < 0:
            x, k = self.inv(x), -k
        acc = self.identity()
        while k:
            if k & 1:
                acc = self.mul(acc, x)
            x = self.mul(x, x)
            k >>= 1
        return acc

    def conj(self, x: GElement, g: GElement) -> GElement:
        return self.mul(self.mul(self.inv(g), x), g)

    def commutator(self, x: GElement, y: GElement) -> GElement:
        return self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))

    def elements(self) -> list[GElement]:
        if self.order > ENUMERATION_GUARD:
            raise ValueError(f"group order {self.order} exceeds guard {ENUMERATION_GUARD}")
        return [
            (e, a, b)
            for e in (0, 1)
            for a in range(self.a_mod)
            for b in range(self.b_mod)
        ]

    def element_order(self, x: GElement) -> int:
        k = 1
        y = x
        while y != self.identity():
            y = self.mul(y, x)
            k += 1
        return k

    def word(self, letters: str) -> GElement:
        """Product of generators named by letters: 's', 't', 'r' (e.g. 'str' or 'ss')."""
        table = {"s": self.sigma(), "t": self.tau(), "r": self.rho()}
        return reduce(self.mul, (table[ch] for ch in letters), self.identity())


# ---------------------------------------------------------------------------
# Subgroups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    pres: GPresentation
    generators: tuple[GElement, ...]
    elements: frozenset[GElement]

    @classmethod
    def generated(cls, pres: GPresentation, gens) -> "Subgroup":
        gens = tuple(pres.element(*g) for g in gens)
        elems = _closure(pres, gens)
        return cls(pres, gens, elems)

    @classmethod
    def from_elements(cls, pres: GPresentation, elems) -> "Subgroup":
        """Recover a small generating set greedily from an element set."""
        elems = frozenset(elems)
        gens: list[GElement] = []
        closure = frozenset([pres.identity()])
        for x in sorted(elems):
            if x not in closure:
                gens.append(x)
                closure = _closure(pres, tuple(gens))
        assert closure == elems, "element set is not closed under the group law"
        return cls(pres, tuple(gens), elems)

    @classmethod
    def whole_group(cls, pres: GPresentation) -> "Subgroup":
        return cls.generated(pres, [pres.rho(), pres.sigma(), pres.tau()])

    @classmethod
    def trivial(cls, pres: GPresentation) -> "Subgroup":
        return cls(pres, (), frozenset([pres.identity()]))

    @property
    def order(self) -> int:
        return len(self.elements)

    def index_in(self, other: "Subgroup") -> int:
        assert self.elements <= other.elements
        return other.order // self.order

    def __contains__(self, x: GElement) -> bool:
        return x in self.elements

    def __le__(self, other: "Subgroup") -> bool:
        return self.elements <= other.elements

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return Subgroup.from_elements(self.pres, self.elements & other.elements)

    def is_normal_in(self, other: "Subgroup") -> bool:
        return all(
            self.pres.conj(x, g) in self.elements
            for g in other.generators
            for x in self.elements
        )

    def derived_subgroup(self) -> "Subgroup":
        """Commutator subgroup: normal closure in self of generator commutators."""
        pres = self.pres
        seeds = [
            pres.commutator(x, y)
            for x, y in itertools.combinations(self.generators, 2)
        ]
        return _normal_closure(pres, seeds, self.generators)

    def abelianization(self) -> AbelianType:
        return abelian_invariants(self, self.derived_subgroup())


def _closure(pres: GPresentation, gens: tuple[GElement, ...]) -> frozenset[GElement]:
    elems = {pres.identity()}
    frontier = [pres.identity()]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = pres.mul(x, g)
                if y not in elems:
                    elems.add(y)
                    new.append(y)
        frontier = new
    return frozenset(elems)


def _normal_closure(pres, seeds, conjugators) -> Subgroup:
    current = frozenset(pres.element(*s) for s in seeds)
    while True:
        sub = _closure(pres, tuple(current))
        conj = {
            pres.conj(x, g) for x in sub for g in conjugators
        }
        if conj <= sub:
            return Subgroup.from_elements(pres, sub)
        current = sub | conj


# ---------------------------------------------------------------------------
# Quotients, abelian invariants, lower central series
# ---------------------------------------------------------------------------


def _coset_reps(pres, H: Subgroup, N: Subgroup):
    """Right cosets N*x inside H: canonical reps and the rep-of map."""
    rep_of: dict[GElement, GElement] = {}
    reps: list[GElement] = []
    for x in sorted(H.elements):
        if x in rep_of:
            continue
        coset = sorted(pres.mul(nu, x) for nu in N.elements)
        r = coset[0]
        reps.append(r)
        for y in coset:
            rep_of[y] = r
    return reps, rep_of


def abelian_invariants(H: Subgroup, N: Subgroup) -> AbelianType:
    """Elementary divisors of the (abelian) quotient H/N; N must be normal in H."""
    pres = H.pres
    if not N.elements <= H.elements:
        raise ValueError("modulus subgroup is not contained in H")
    if not N.is_normal_in(H):
        raise ValueError("modulus subgroup is not normal in H")
    reps, rep_of = _coset_reps(pres, H, N)

    def op(x, y):
        return rep_of[pres.mul(x, y)]

    return abelian_structure(reps, op, rep_of[pres.identity()])


def lower_central_series(pres: GPresentation) -> list[Subgroup]:
    """gamma_1 = G down to the trivial group, gamma_(i+1) = [gamma_i, G]."""
    G = Subgroup.whole_group(pres)
    series = [G]
    while series[-1].order > 1:
        prev = series[-1]
        seeds = {
            pres.commutator(x, g) for x in prev.elements for g in G.generators
        }
        nxt = _normal_closure(pres, seeds, G.generators)
        assert nxt.elements < prev.elements, "lower central series stalled"
        series.append(nxt)
    return series


def nilpotency_class(pres: GPresentation) -> int:
    return len(lower_central_series(pres)) - 1


def coclass(pres: GPresentation) -> int:
    h = pres.order.bit_length() - 1
    return h - nilpotency_class(pres)


# ---------------------------------------------------------------------------
# Transfer (Verlagerung)
# ---------------------------------------------------------------------------


def transfer(
    pres: GPresentation,
    H: Subgroup,
    g: GElement,
    _ctx: dict | None = None,
) -> GElement:
    """V_{G/H}(g G') as a canonical representative of its coset of H'.

    Standard coset-representative transfer: with right cosets H x_i, write
    x_i g = h_i x_j(i); the value is prod_i h_i mod H'.  The value is a
    well-defined function of g G' (checked in tests, not assumed).
    """
    if _ctx is None:
        _ctx = transfer_context(pres, H)
    reps, locate, hprime_rep = _ctx["reps"], _ctx["locate"], _ctx["hprime_rep"]
    val = pres.identity()
    for x in reps:
        xg = pres.mul(x, g)
        target = locate[xg]
        h = pres.mul(xg, pres.inv(target))
        assert h in H.elements
        val = pres.mul(val, h)
    return hprime_rep[val]


def transfer_context(pres: GPresentation, H: Subgroup) -> dict:
    """Precomputed coset data for repeated transfers into one subgroup."""
    all_elems = sorted(pres.elements())
    reps: list[GElement] = []
    locate: dict[GElement, GElement] = {}
    for x in all_elems:
        if x in locate:
            continue
        reps.append(x)
        for h in H.elements:
            locate[pres.mul(h, x)] = x
    Hp = H.derived_subgroup()
    _, hprime_rep = _coset_reps(pres, H, Hp)
    return {"reps": reps, "locate": locate, "hprime_rep": hprime_rep, "derived": Hp}


def transfer_index2(pres: GPresentation, H: Subgroup, g: GElement, z: GElement) -> GElement:
    """Closed form for index-2 subgroups: g^2 [g, z] H' if g in H, else g^2 H'.

    z is the nontrivial coset representative; used as a test oracle against
    the generic coset transfer.
    """
    assert z not in H.elements, "z must represent the nontrivial coset"
    Hp = H.derived_subgroup()
    _, hprime_rep = _coset_reps(pres, H, Hp)
    if g in H.elements:
        val = pres.mul(pres.mul(g, g), pres.commutator(g, z))
    else:
        val = pres.mul(g, g)
    return hprime_rep[val]


# ---------------------------------------------------------------------------
# The class group (Z/2)^3 of the base field and its dictionary with G/G'
# ---------------------------------------------------------------------------

ClassVector = tuple[int, int, int]  # exponents of [H0], [H1], [H2]

CLASS_VECTORS: tuple[ClassVector, ...] = tuple(
    (x0, x1, x2) for x0 in (0, 1) for x1 in (0, 1) for x2 in (0, 1)
)


def vadd(u: ClassVector, v: ClassVector) -> ClassVector:
    return (u[0] ^ v[0], u[1] ^ v[1], u[2] ^ v[2])


def span(vectors) -> frozenset[ClassVector]:
    out = {(0, 0, 0)}
    frontier = [(0, 0, 0)]
    while frontier:
        new = []
        for x in frontier:
            for v in vectors:
                y = vadd(x, v)
                if y not in out:
                    out.add(y)
                    new.append(y)
        frontier = new
    return frozenset(out)


def class_to_group(pres: GPresentation, v: ClassVector) -> GElement:
    """Representative of the coset of G' matching [H0]^x0 [H1]^x1 [H2]^x2.

    The dictionary is tau <-> [H0], rho <-> [H1], rho*sigma <-> [H2]
    (so sigma <-> [H1 H2]).
    """
    x0, x1, x2 = v
    out = pres.identity()
    if x0:
        out = pres.mul(out, pres.tau())
    if x1:
        out = pres.mul(out, pres.rho())
    if x2:
        out = pres.mul(out, pres.mul(pres.rho(), pres.sigma()))
    return out


def group_to_class(pres: GPresentation, x: GElement, derived: Subgroup) -> ClassVector:
    """Inverse dictionary: which class vector has x in its G'-coset."""
    for v in CLASS_VECTORS:
        rep = class_to_group(pres, v)
        if pres.mul(pres.inv(rep), x) in derived.elements:
            return v
    raise ValueError(f"{x} lies in no G'-coset (G' wrong?)")


def transfer_kernel(pres: GPresentation, H: Subgroup) -> frozenset[ClassVector]:
    """Class vectors whose transfer to H is trivial (the capitulation kernel)."""
    ctx = transfer_context(pres, H)
    triv = ctx["hprime_rep"][pres.identity()]
    kernel = []
    for v in CLASS_VECTORS:
        g = class_to_group(pres, v)
        if transfer(pres, H, g, _ctx=ctx) == triv:
            kernel.append(v)
    return frozenset(kernel)
