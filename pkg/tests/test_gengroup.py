import itertools
import random

import pytest

from classtower.abelian import AbelianType
from classtower.gengroup import (
    CLASS_VECTORS,
    GPresentation,
    PresentationError,
    PsiVariant,
    Subgroup,
    abelian_invariants,
    class_to_group,
    coclass,
    lower_central_series,
    nilpotency_class,
    span,
    transfer,
    transfer_context,
    transfer_index2,
    transfer_kernel,
)

SIGMA, TAU_SIGMA = PsiVariant.SIGMA_ONLY, PsiVariant.TAU_SIGMA


def admissible_presentations(max_m=5, max_n=5):
    """The exponent patterns that actual prime pairs realize."""
    out = []
    for m in range(3, max_m + 1):  # q = 1, n = 1, m >= 3
        out.append(GPresentation(m, 1, 1, TAU_SIGMA))
        out.append(GPresentation(m, 1, 1, SIGMA))
    for n in range(2, max_n + 1):  # q = 1, m = 2, n >= 2
        out.append(GPresentation(2, n, 1, TAU_SIGMA))
        out.append(GPresentation(2, n, 1, SIGMA))
    for n in range(1, max_n + 1):  # q = 2, m = 2
        out.append(GPresentation(2, n, 2, TAU_SIGMA))
    return out


SMALL = [
    GPresentation(3, 1, 1, TAU_SIGMA),
    GPresentation(3, 1, 1, SIGMA),
    GPresentation(2, 2, 1, TAU_SIGMA),
    GPresentation(2, 2, 1, SIGMA),
    GPresentation(2, 1, 2),
    GPresentation(2, 2, 2),
]


def test_order_formula_and_enumeration():
    assert GPresentation(3, 1, 1).order == 64
    assert GPresentation(2, 1, 2).order == 64
    assert GPresentation(2, 2, 1).order == 64
    for pres in constructible_presentations(10):
        elems = pres.elements()
        assert len(elems) == len(set(elems)) == pres.order
        q_bits = 3 if pres.q == 2 else 2
        assert pres.order == 1 << (pres.m + pres.n + q_bits)
        # products of normal forms land on normal forms (closure spot check)
        sample = elems[:: max(1, len(elems) // 40)]
        for x in sample[:12]:
            for y in sample[:12]:
                assert pres.mul(x, y) in set(elems)


def constructible_presentations(max_mn):
    """Every (m, n, q, psi) the constructor accepts with m + n <= max_mn."""
    out = []
    for m in range(2, max_mn):
        for n in range(1, max_mn - m + 1):
            for psi in (SIGMA, TAU_SIGMA):
                out.append(GPresentation(m, n, 1, psi))
            if m == 2:
                out.append(GPresentation(2, n, 2, TAU_SIGMA))
    return out


def test_inconsistent_presentations_rejected():
    with pytest.raises(PresentationError):
        GPresentation(3, 1, 2)  # q = 2 needs m = 2
    with pytest.raises(PresentationError):
        GPresentation(1, 1, 1)
    with pytest.raises(PresentationError):
        GPresentation(2, 0, 1)
    with pytest.raises(PresentationError):
        GPresentation(2, 1, 3)
    with pytest.raises(PresentationError):
        GPresentation(2, 1, 2, SIGMA)


def test_defining_relations():
    for pres in SMALL + admissible_presentations(5, 5):
        rho, sig, tau = pres.rho(), pres.sigma(), pres.tau()
        e = pres.identity()
        assert pres.power(rho, 4) == e
        assert pres.power(sig, 1 << pres.m) == (
            e if pres.q == 1 else pres.power(tau, 1 << (pres.n + 1))
        )
        assert pres.power(tau, 1 << (pres.n + 1 + (pres.q == 2))) == e
        psi = pres.mul(rho, rho)
        pa = 1 << (pres.m - 1)
        pb = 0 if (pres.q == 1 and pres.psi is SIGMA) else 1 << pres.n
        assert psi == pres.element(0, pa, pb)
        assert pres.commutator(tau, sig) == e
        twist = pres.power(sig, 2 if pres.q == 1 else -2)
        assert pres.commutator(rho, sig) == twist
        assert pres.commutator(rho, tau) == pres.power(tau, 2)


def test_associativity_exhaustive_small():
    pres = GPresentation(2, 1, 2)  # order 64; 64^3 triples
    elems = pres.elements()
    for x in elems:
        for y in elems:
            xy = pres.mul(x, y)
            for z in elems:
                assert pres.mul(xy, z) == pres.mul(x, pres.mul(y, z))


def test_associativity_random_larger():
    rng = random.Random(11)
    for pres in admissible_presentations(5, 5):
        elems = pres.elements()
        for _ in range(200):
            x, y, z = (rng.choice(elems) for _ in range(3))
            assert pres.mul(pres.mul(x, y), z) == pres.mul(x, pres.mul(y, z))
        for _ in range(50):
            x = rng.choice(elems)
            assert pres.mul(x, pres.inv(x)) == pres.identity()


def test_power_commutator_identities():
    for pres in SMALL:
        rho, sig, tau = pres.rho(), pres.sigma(), pres.tau()
        inv = pres.inv
        mul = pres.mul
        # rho^-1 sigma rho = sigma^-1 (q=1) or sigma^3 (q=2); rho^-1 tau rho = tau^-1
        assert pres.conj(sig, rho) == pres.power(sig, -1 if pres.q == 1 else 3)
        assert pres.conj(tau, rho) == inv(tau)
        rho2 = mul(rho, rho)
        assert pres.commutator(rho2, sig) == pres.identity()
        assert pres.commutator(rho2, tau) == pres.identity()
        taurho = mul(tau, rho)
        assert mul(taurho, taurho) == rho2
        sigrho = mul(sig, rho)
        sigtaurho = mul(sig, taurho)
        expected = rho2 if pres.q == 1 else mul(rho2, pres.power(sig, 4))
        assert mul(sigrho, sigrho) == expected
        assert mul(sigtaurho, sigtaurho) == expected
        for r in range(0, pres.n + 2):
            t2r = pres.power(tau, 1 << r)
            assert pres.commutator(rho, t2r) == pres.power(tau, 1 << (r + 1))
            s2r = pres.power(sig, 1 << r)
            sign = 1 if pres.q == 1 else -1
            assert pres.commutator(rho, s2r) == pres.power(sig, sign * (1 << (r + 1)))


def test_derived_subgroup_is_squares():
    for pres in admissible_presentations(5, 5):
        G = Subgroup.whole_group(pres)
        derived = G.derived_subgroup()
        expected = Subgroup.generated(
            pres, [pres.power(pres.sigma(), 2), pres.power(pres.tau(), 2)]
        )
        assert derived.elements == expected.elements


def test_lower_central_series_and_coclass():
    for pres in admissible_presentations(5, 5):
        series = lower_central_series(pres)
        for j in range(1, len(series)):
            expected = Subgroup.generated(
                pres,
                [
                    pres.power(pres.sigma(), 1 << j),
                    pres.power(pres.tau(), 1 << j),
                ],
            )
            assert series[j].elements == expected.elements, (pres, j)
        m, n = pres.m, pres.n
        if pres.q == 1:
            expected_class = max(n, m - 1) + 1
        else:
            expected_class = max(n + 1, m) + 1
        assert nilpotency_class(pres) == expected_class
        assert coclass(pres) == 3


def test_abelianization_is_2_2_2():
    for pres in SMALL:
        G = Subgroup.whole_group(pres)
        assert abelian_invariants(G, G.derived_subgroup()) == AbelianType((2, 2, 2))


def test_abelian_invariants_examples():
    pres = GPresentation(3, 1, 1, TAU_SIGMA)
    sig, tau, rho = pres.sigma(), pres.tau(), pres.rho()
    H = Subgroup.generated(pres, [sig, pres.power(tau, 2)])
    assert abelian_invariants(H, Subgroup.trivial(pres)) == AbelianType((2, 8))
    K1 = Subgroup.generated(pres, [sig, rho])
    assert K1.abelianization() == AbelianType((2, 4))


def test_abelian_invariants_rejects_non_normal():
    pres = GPresentation(3, 1, 1, TAU_SIGMA)
    G = Subgroup.whole_group(pres)
    H = Subgroup.generated(pres, [pres.rho()])  # <rho> is not normal in G
    assert not H.is_normal_in(G)
    with pytest.raises(ValueError):
        abelian_invariants(G, H)


def test_transfer_known_values():
    # V_{G/G1}(rho G') = G1', V(tau G') = tau^2 G1' != G1' when (p1/p2) = -1
    pres = GPresentation(3, 1, 1, TAU_SIGMA)
    G1 = Subgroup.generated(pres, [pres.sigma(), pres.rho()])
    ctx = transfer_context(pres, G1)
    triv = ctx["hprime_rep"][pres.identity()]
    assert transfer(pres, G1, pres.rho(), _ctx=ctx) == triv
    assert transfer(pres, G1, pres.sigma(), _ctx=ctx) == triv
    tau_val = transfer(pres, G1, pres.tau(), _ctx=ctx)
    assert tau_val == ctx["hprime_rep"][pres.power(pres.tau(), 2)]
    assert tau_val != triv


def test_transfer_identity_is_trivial():
    for pres in SMALL[:3]:
        H = Subgroup.generated(pres, [pres.sigma(), pres.tau()])
        ctx = transfer_context(pres, H)
        triv = ctx["hprime_rep"][pres.identity()]
        assert transfer(pres, H, pres.identity(), _ctx=ctx) == triv


def test_transfer_closed_form_agrees_with_generic():
    # every index-2 subgroup, every element, orders <= 2^9
    for pres in SMALL:
        if pres.order > 512:
            continue
        G = Subgroup.whole_group(pres)
        derived = G.derived_subgroup()
        for H in _index2_subgroups(pres, derived):
            ctx = transfer_context(pres, H)
            z = next(x for x in sorted(G.elements) if x not in H.elements)
            for g in sorted(G.elements):
                assert transfer(pres, H, g, _ctx=ctx) == transfer_index2(pres, H, g, z)


def _index2_subgroups(pres, derived):
    # index-2 subgroups = preimages of index-2 subgroups of G/(G')  = (2,2,2)
    from classtower.gengroup import vadd

    out = []
    for kernel_vectors in itertools.combinations([v for v in CLASS_VECTORS if v != (0, 0, 0)], 2):
        vs = span(kernel_vectors)
        if len(vs) != 4:
            continue
        gens = [class_to_group(pres, v) for v in vs] + list(derived.generators)
        out.append(Subgroup.generated(pres, gens))
    seen = set()
    uniq = []
    for H in out:
        if H.elements not in seen:
            seen.add(H.elements)
            uniq.append(H)
    assert len(uniq) == 7
    return uniq


def test_transfer_rep_choice_independence():
    rng = random.Random(3)
    pres = GPresentation(2, 1, 2)
    H = Subgroup.generated(pres, [pres.tau(), pres.power(pres.sigma(), 2)])
    ctx = transfer_context(pres, H)
    G = Subgroup.whole_group(pres)
    for _ in range(40):
        g = rng.choice(sorted(G.elements))
        base = transfer(pres, H, g, _ctx=ctx)
        # transfer of any element of the same G'-coset agrees
        derived = G.derived_subgroup()
        d = rng.choice(sorted(derived.elements))
        assert transfer(pres, H, pres.mul(g, d), _ctx=ctx) == base


def test_transfer_kernel_examples():
    # H = <sigma, rho>: kernel = <[H1], [H2]> (K1 row behavior)
    pres = GPresentation(3, 1, 1, TAU_SIGMA)
    H = Subgroup.generated(pres, [pres.sigma(), pres.rho()])
    kern = transfer_kernel(pres, H)
    assert kern == span([(0, 1, 0), (0, 0, 1)])
    # H = G is the identity transfer: only the trivial class dies
    G = Subgroup.whole_group(pres)
    assert transfer_kernel(pres, G) == frozenset({(0, 0, 0)})
    # H = G' (the Hilbert-class-field subgroup): every class transfers into
    # G'' trivially, i.e. total capitulation (principal ideal theorem)
    assert transfer_kernel(pres, G.derived_subgroup()) == frozenset(CLASS_VECTORS)
    # total capitulation into <tau, sigma^2> when q = 2
    pres2 = GPresentation(2, 1, 2)
    H2 = Subgroup.generated(pres2, [pres2.tau(), pres2.power(pres2.sigma(), 2)])
    assert transfer_kernel(pres2, H2) == frozenset(CLASS_VECTORS)


def test_class_to_group_dictionary():
    for pres in SMALL:
        G = Subgroup.whole_group(pres)
        derived = G.derived_subgroup()
        # the 8 class vectors hit the 8 cosets of G' exactly once
        seen = set()
        for v in CLASS_VECTORS:
            x = class_to_group(pres, v)
            coset = frozenset(pres.mul(x, d) for d in derived.elements)
            seen.add(coset)
        assert len(seen) == 8
        # sigma lands in the [H1 H2] coset
        x = class_to_group(pres, (0, 1, 1))
        assert pres.mul(pres.inv(x), pres.sigma()) in derived.elements


def test_word_helper():
    pres = GPresentation(3, 1, 1, TAU_SIGMA)
    assert pres.word("st") == pres.mul(pres.sigma(), pres.tau())
    assert pres.word("ss") == pres.power(pres.sigma(), 2)
    assert pres.word("") == pres.identity()
