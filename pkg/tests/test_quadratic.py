import random

import pytest

from classtower.abelian import AbelianType
from classtower.quadratic import (
    BQForm,
    class_group,
    class_number,
    compose,
    exponents_mn,
    field_discriminant,
    fundamental_unit,
    norm_eps,
    principal_form,
    reduce_definite,
    reduce_indefinite,
    two_part_of_class_group,
)
from classtower.symbols import primes_5_mod_8, validate_pair


def pell_brute(m):
    """Smallest unit > 1 of O_{Q(sqrt(m))} by direct search; oracle for small m."""
    import math

    for v in range(1, 10**6):
        candidates = []
        for w in (1, 2) if m % 4 == 1 else (1,):
            mv2 = m * v * v
            for sign in (-1, 1):
                t = mv2 + sign * w * w
                if t <= 0:
                    continue
                u = math.isqrt(t)
                for cand in (u, u + 1):
                    if cand > 0 and cand * cand == t:
                        if w == 2 and (cand % 2) != (v % 2):
                            continue
                        candidates.append((cand, v, w, sign))
        if candidates:
            return min(candidates, key=lambda t: (t[0] + t[1] * m**0.5) / t[2])
    raise AssertionError(f"no unit below bound for m={m}")


SQUAREFREE_SMALL = [m for m in range(2, 60) if all(m % (d * d) for d in range(2, 8))]


def test_fundamental_unit_examples():
    u2 = fundamental_unit(2)
    assert (u2.u, u2.v, u2.w, u2.norm) == (1, 1, 1, -1)
    u65 = fundamental_unit(65)
    assert (u65.u, u65.v, u65.w, u65.norm) == (8, 1, 1, -1)
    u5 = fundamental_unit(5)
    assert (u5.u, u5.v, u5.w, u5.norm) == (1, 1, 2, -1)
    u3 = fundamental_unit(3)
    assert (u3.u, u3.v, u3.w, u3.norm) == (2, 1, 1, 1)
    u94 = fundamental_unit(94)
    assert (u94.u, u94.v, u94.norm) == (2143295, 221064, 1)


def test_fundamental_unit_matches_brute_force():
    for m in SQUAREFREE_SMALL:
        unit = fundamental_unit(m)
        u, v, w, sign = pell_brute(m)
        assert (unit.u, unit.v, unit.w, unit.norm) == (u, v, w, sign), m


def test_fundamental_unit_rejects():
    with pytest.raises(ValueError):
        fundamental_unit(12)
    with pytest.raises(ValueError):
        fundamental_unit(1)


def test_norm_eps_values():
    assert norm_eps(65) == -1
    assert norm_eps(2) == -1
    assert norm_eps(377) == 1  # pair (13, 29): quartic product is -1
    assert norm_eps(130) == -1  # N(eps) = -1 holds for every d = 2*p1*p2


def test_field_discriminant():
    assert field_discriminant(65) == 65
    assert field_discriminant(-65) == -260
    assert field_discriminant(130) == 520
    assert field_discriminant(-130) == -520


KNOWN_IMAGINARY = {
    -3: 1, -4: 1, -7: 1, -8: 1, -11: 1, -15: 2, -19: 1, -20: 2, -23: 3,
    -24: 2, -31: 3, -35: 2, -39: 4, -40: 2, -43: 1, -47: 5, -52: 2,
    -56: 4, -71: 7, -84: 4, -95: 8, -163: 1, -260: 8,
}


def test_known_imaginary_class_numbers():
    for D, h in KNOWN_IMAGINARY.items():
        assert class_number(D) == h, D


def test_known_imaginary_structures():
    assert class_group(-84).abelian_type() == AbelianType((2, 2))
    assert class_group(-260).abelian_type() == AbelianType((2, 4))
    assert class_group(-23).abelian_type() == AbelianType((3,))
    assert class_group(-95).abelian_type() == AbelianType((8,))
    assert class_group(-39).abelian_type() == AbelianType((4,))


KNOWN_REAL_WIDE = {5: 1, 8: 1, 12: 1, 13: 1, 40: 2, 60: 2, 65: 2, 136: 2, 229: 3}


def test_known_real_class_numbers():
    for D, h in KNOWN_REAL_WIDE.items():
        assert class_number(D) == h, D


def test_narrow_vs_wide():
    # N(eps_3) = +1: narrow group of disc 12 is twice the wide group
    g12 = class_group(12)
    assert (g12.order, g12.narrow_order) == (1, 2)
    # N(eps_10) = -1: narrow = wide for disc 40
    g40 = class_group(40)
    assert (g40.order, g40.narrow_order) == (2, 2)


def test_class_group_rejects():
    with pytest.raises(ValueError):
        class_group(7)  # 3 mod 4
    with pytest.raises(ValueError):
        class_group(16)  # square
    with pytest.raises(ValueError):
        class_group(10**9)


def test_reduced_form_count_is_group_order():
    # independent counting check: composition-derived structure fills the
    # exact number of reduced definite forms
    from classtower.quadratic import _reduced_definite_forms

    for D in (-260, -84, -95, -515, -1004, -10007, -34180):
        grp = class_group(D)
        assert grp.order == len(_reduced_definite_forms(D))
        if grp.structure is not None:
            assert grp.structure.order() == grp.order


def test_composition_group_axioms_random():
    rng = random.Random(7)
    for D in (-260, -84, -95, -515, -9912, -99991, 316, 520, 229, 1020, 99928):
        elements, op, one = _group_law(D)
        sample = elements if len(elements) <= 6 else rng.sample(elements, 6)
        for f in sample:
            assert op(f, one) == f
            assert any(op(f, g) == one for g in elements)  # inverse exists
            for g in sample:
                assert op(f, g) == op(g, f)
                for h in sample[:3]:
                    assert op(op(f, g), h) == op(f, op(g, h))


def _group_law(D):
    from classtower.quadratic import _CycleGroup, _DefiniteGroup

    grp = _DefiniteGroup(D) if D < 0 else _CycleGroup(D)
    return list(grp.elements), grp.op, grp.identity


def test_definite_inverse_is_b_negation():
    for D in (-260, -84, -95):
        from classtower.quadratic import _reduced_definite_forms

        one = reduce_definite(principal_form(D))
        for f in _reduced_definite_forms(D):
            assert reduce_definite(compose(f, f.inverse())) == one


def test_exponents_mn_fixture_rows():
    assert exponents_mn(validate_pair(5, 13)) == (2, 1)
    assert exponents_mn(validate_pair(5, 37)) == (3, 1)
    assert exponents_mn(validate_pair(5, 461)) == (2, 4)


def test_genus_two_two_and_shape_constraints_small():
    ps = primes_5_mod_8(150)
    pairs = [(a, b) for i, a in enumerate(ps) for b in ps[i + 1 :]]
    for p1, p2 in pairs:
        pair = validate_pair(p1, p2)
        r, d = pair.r, pair.d
        assert two_part_of_class_group(field_discriminant(d)) == AbelianType((2, 2))
        assert two_part_of_class_group(field_discriminant(-d)) == AbelianType((2, 2))
        minus = two_part_of_class_group(field_discriminant(-r))
        assert minus.rank() == 2 and minus.divisors[0] == 2
        assert minus.divisors[1] >= 4  # m >= 2
        plus = two_part_of_class_group(field_discriminant(r))
        assert plus.is_cyclic() and plus.order() >= 2  # n >= 1
        assert norm_eps(d) == -1


def test_reduce_indefinite_reaches_reduced():
    for D in (316, 520, 229, 1020):
        f = principal_form(D)
        g = reduce_indefinite(f)
        from classtower.quadratic import _is_reduced_indefinite
        import math

        assert _is_reduced_indefinite(g.a, g.b, math.isqrt(D))
        assert g.disc() == D
