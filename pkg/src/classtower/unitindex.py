"""The unit index q in {1, 2}: is eps_2 * eps_r * eps_2r a square in Q(sqrt2, sqrt r)?

r = p1*p2.  Elements of the real multiquadratic field live on the exact basis
(1, sqrt2, sqrt r, sqrt 2r) with rational coefficients.  The square test runs
in two stages: a numeric candidate search (high-precision conjugate square
roots, all 8 essentially distinct sign patterns, coefficients rounded to
half-integers) whose winner is verified by exact re-expansion, and an exact
subfield descent through Q(sqrt2) used both as a fast disproof filter and as
a complete backstop, so "no root" is never a precision artifact.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .quadratic import QuadUnit, fundamental_unit
from .symbols import (
    PrimePair,
    jacobi,
    quartic_symbol,
    quartic_symbol_mod2,
)

__all__ = [
    "MultiQuadElt",
    "exact_square_root",
    "unit_index_q",
    "q_from_symbols",
    "QAgreementError",
]

_PRECISIONS = (128, 256, 512, 1024, 2048, 4096, 8192)


class QAgreementError(AssertionError):
    """The exact square test and the quartic-symbol criterion disagreed."""


@dataclass(frozen=True)
class MultiQuadElt:
    """c0 + c1*sqrt(2) + c2*sqrt(r) + c3*sqrt(2r) with exact rational ci."""

    r: int
    c: tuple[Fraction, Fraction, Fraction, Fraction]

    @classmethod
    def make(cls, r: int, c0=0, c1=0, c2=0, c3=0) -> "MultiQuadElt":
        return cls(r, (Fraction(c0), Fraction(c1), Fraction(c2), Fraction(c3)))

    @classmethod
    def from_unit(cls, unit: QuadUnit, r: int) -> "MultiQuadElt":
        u, v = Fraction(unit.u, unit.w), Fraction(unit.v, unit.w)
        if unit.m == 2:
            return cls(r, (u, v, Fraction(0), Fraction(0)))
        if unit.m == r:
            return cls(r, (u, Fraction(0), v, Fraction(0)))
        if unit.m == 2 * r:
            return cls(r, (u, Fraction(0), Fraction(0), v))
        raise ValueError(f"unit of Q(sqrt {unit.m}) does not live in Q(sqrt2, sqrt{r})")

    def __add__(self, other: "MultiQuadElt") -> "MultiQuadElt":
        assert self.r == other.r
        return MultiQuadElt(self.r, tuple(a + b for a, b in zip(self.c, other.c)))

    def __sub__(self, other: "MultiQuadElt") -> "MultiQuadElt":
        assert self.r == other.r
        return MultiQuadElt(self.r, tuple(a - b for a, b in zip(self.c, other.c)))

    def __mul__(self, other: "MultiQuadElt") -> "MultiQuadElt":
        assert self.r == other.r
        r = self.r
        x0, x1, x2, x3 = self.c
        y0, y1, y2, y3 = other.c
        return MultiQuadElt(
            r,
            (
                x0 * y0 + 2 * x1 * y1 + r * x2 * y2 + 2 * r * x3 * y3,
                x0 * y1 + x1 * y0 + r * (x2 * y3 + x3 * y2),
                x0 * y2 + x2 * y0 + 2 * (x1 * y3 + x3 * y1),
                x0 * y3 + x3 * y0 + x1 * y2 + x2 * y1,
            ),
        )

    def conj_sqrt_r(self) -> "MultiQuadElt":
        """The conjugate fixing Q(sqrt 2): sqrt(r) -> -sqrt(r)."""
        c0, c1, c2, c3 = self.c
        return MultiQuadElt(self.r, (c0, c1, -c2, -c3))

    def conj_sqrt2(self) -> "MultiQuadElt":
        c0, c1, c2, c3 = self.c
        return MultiQuadElt(self.r, (c0, -c1, c2, -c3))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.c)

    def embeddings(self, prec_bits: int):
        """The four real embeddings, ordered (+,+), (-,+), (+,-), (-,-)."""
        with mpmath.workprec(prec_bits):
            s2 = mpmath.sqrt(2)
            sr = mpmath.sqrt(self.r)
            s2r = s2 * sr
            c = [_to_mpf(x) for x in self.c]
            return [
                c[0] + e2 * c[1] * s2 + er * c[2] * sr + e2 * er * c[3] * s2r
                for e2, er in ((1, 1), (-1, 1), (1, -1), (-1, -1))
            ]


def _to_mpf(x: Fraction):
    return mpmath.mpf(x.numerator) / mpmath.mpf(x.denominator)


# ---------------------------------------------------------------------------
# Exact square roots in Q and Q(sqrt 2)
# ---------------------------------------------------------------------------


def _sqrt_fraction(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _sqrt_in_q2(u: Fraction, v: Fraction) -> tuple[Fraction, Fraction] | None:
    """A root (x, y) of (x + y*sqrt2)^2 = u + v*sqrt2, if one exists in Q(sqrt2)."""
    if u == 0 and v == 0:
        return (Fraction(0), Fraction(0))
    t = _sqrt_fraction(u * u - 2 * v * v)
    if t is None:
        return None
    for tt in (t, -t):
        w = (u + tt) / 2
        x = _sqrt_fraction(w)
        if x is None:
            continue
        if x != 0:
            y = v / (2 * x)
            if x * x + 2 * y * y == u and 2 * x * y == v:
                return (x, y)
        elif v == 0:
            y = _sqrt_fraction(u / 2)
            if y is not None:
                return (Fraction(0), y)
    return None


def _q2_elt(elt: MultiQuadElt) -> tuple[Fraction, Fraction]:
    assert elt.c[2] == 0 and elt.c[3] == 0, f"not in Q(sqrt2): {elt.c}"
    return elt.c[0], elt.c[1]


def _sqrt_via_subfield(target: MultiQuadElt) -> MultiQuadElt | None:
    """Exact and complete square root by descent through Q(sqrt 2).

    If target = s^2 then s*s^sigma, s+s^sigma, s-s^sigma all square into
    explicitly computable elements of Q(sqrt2); solving those three square
    roots exactly reconstructs s or proves no root exists.
    """
    r = target.r
    sigma = target.conj_sqrt_r()
    a_u, a_v = _q2_elt(target + sigma)
    b_u, b_v = _q2_elt(target * sigma)
    beta = _sqrt_in_q2(b_u, b_v)
    if beta is None:
        return None
    for sign in (1, -1):
        bu, bv = sign * beta[0], sign * beta[1]
        gamma = _sqrt_in_q2(a_u + 2 * bu, a_v + 2 * bv)  # = 2*(c0 + c1*sqrt2)
        if gamma is None:
            continue
        delta = _sqrt_in_q2(
            (a_u - 2 * bu) / (4 * r), (a_v - 2 * bv) / (4 * r)
        )  # = c2 + c3*sqrt2
        if delta is None:
            continue
        for s2 in (1, -1):
            cand = MultiQuadElt(
                r,
                (gamma[0] / 2, gamma[1] / 2, s2 * delta[0], s2 * delta[1]),
            )
            if (cand * cand).c == target.c:
                return cand
    return None


# ---------------------------------------------------------------------------
# Numeric candidate stage
# ---------------------------------------------------------------------------

_SIGN_PATTERNS = [
    (1, e2, e3, e4) for e2 in (1, -1) for e3 in (1, -1) for e4 in (1, -1)
]


def _numeric_candidates(target: MultiQuadElt, prec_bits: int):
    """Half-integer coefficient candidates from rounded conjugate square roots."""
    with mpmath.workprec(prec_bits):
        embs = target.embeddings(prec_bits)
        if any(e <= 0 for e in embs):
            return  # not totally positive at this precision: no real square roots
        roots = [mpmath.sqrt(e) for e in embs]
        s2 = mpmath.sqrt(2)
        sr = mpmath.sqrt(target.r)
        s2r = s2 * sr
        for pat in _SIGN_PATTERNS:
            t = [p * x for p, x in zip(pat, roots)]
            c0 = (t[0] + t[1] + t[2] + t[3]) / 4
            c1 = (t[0] - t[1] + t[2] - t[3]) / (4 * s2)
            c2 = (t[0] + t[1] - t[2] - t[3]) / (4 * sr)
            c3 = (t[0] - t[1] - t[2] + t[3]) / (4 * s2r)
            coeffs = []
            ok = True
            for x in (c0, c1, c2, c3):
                n = mpmath.nint(2 * x)
                if abs(2 * x - n) > mpmath.mpf("0.25"):
                    ok = False
                    break
                coeffs.append(Fraction(int(n), 2))
            if ok:
                yield MultiQuadElt(target.r, tuple(coeffs))


def exact_square_root(target: MultiQuadElt) -> MultiQuadElt | None:
    """s with s*s = target exactly, or None when target is not a square.

    Numeric stage: conjugate square roots at 128..8192 bits generate
    candidates; acceptance is only ever the exact identity s^2 = target.
    An exact Q(sqrt2) descent disproves squareness early (the relative norm
    of a square must be a Q(sqrt2) square) and decides any case the numeric
    schedule exhausts, so escalation failure cannot produce a wrong answer.
    """
    if target.is_zero():
        return MultiQuadElt.make(target.r)
    sigma_norm = target * target.conj_sqrt_r()
    if _sqrt_in_q2(*_q2_elt(sigma_norm)) is None:
        return None
    for prec in _PRECISIONS:
        for cand in _numeric_candidates(target, prec):
            if (cand * cand).c == target.c:
                return cand
    return _sqrt_via_subfield(target)


# ---------------------------------------------------------------------------
# The unit index
# ---------------------------------------------------------------------------


def unit_product(pair: PrimePair) -> MultiQuadElt:
    """eps_2 * eps_{p1p2} * eps_{2p1p2} on the exact basis."""
    r = pair.r
    eps_r = fundamental_unit(r)
    if eps_r.w != 1:
        # r = 1 (mod 8) should force integral coordinates; the arithmetic
        # below stays exact either way, so diagnose rather than assume.
        warnings.warn(
            f"eps_{r} has half-integral coordinates (w=2); unexpected for r = 1 mod 8",
            stacklevel=2,
        )
    e2 = MultiQuadElt.from_unit(fundamental_unit(2), r)
    er = MultiQuadElt.from_unit(eps_r, r)
    e2r = MultiQuadElt.from_unit(fundamental_unit(2 * r), r)
    return e2 * er * e2r


def q_from_symbols(pair: PrimePair) -> int:
    """q by the quartic-symbol criterion, valid only when (p1/p2) = -1.

    q = 2 iff (p1p2/2)_4 (2p1/p2)_4 (2p2/p1)_4 = -1.
    """
    if pair.legendre != -1:
        raise ValueError(
            f"symbol criterion for q needs (p1/p2) = -1, pair {pair} has +1"
        )
    p1, p2 = pair.p1, pair.p2
    prod = (
        quartic_symbol_mod2(p1 * p2)
        * quartic_symbol(2 * p1 % p2, p2)
        * quartic_symbol(2 * p2 % p1, p1)
    )
    return 2 if prod == -1 else 1


def unit_index_q(pair: PrimePair) -> int:
    """The unit index q = q(Q(sqrt2, sqrt r)/Q) in {1, 2}, r = p1*p2.

    q = 2 exactly when eps_2*eps_r*eps_2r is a square in the real field.
    N(eps_r) = +1 settles q = 1 outright; otherwise the exact square test
    decides, cross-checked against the symbol criterion when (p1/p2) = -1.
    """
    if fundamental_unit(pair.r).norm == 1:
        q = 1
    else:
        root = exact_square_root(unit_product(pair))
        q = 2 if root is not None else 1
    if pair.legendre == -1:
        q_sym = q_from_symbols(pair)
        if q_sym != q:
            raise QAgreementError(
                f"pair {pair}: exact square test gives q={q}, symbols give q={q_sym}"
            )
    return q
