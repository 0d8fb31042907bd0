"""Arithmetic in Z[i]: splitting p = 5 (mod 8) and quadratic symbols mod Gaussian primes.

A prime p = 5 (mod 8) splits as p = pi * conj(pi) with the normalized factor
pi = e + 2if, e odd > 0, f > 0 (so p = e^2 + 4f^2).  The quadratic residue
symbol (alpha/pi) is evaluated in the residue field Z[i]/(pi) = F_p via the
substitution i -> -e * (2f)^(-1) mod p, then one modular exponentiation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .symbols import is_prime

__all__ = [
    "GaussianInt",
    "PrimeSplit",
    "ONE_PLUS_I",
    "split_prime",
    "gauss_symbol",
    "symbol_pi",
    "symbol_B",
]


@dataclass(frozen=True)
class GaussianInt:
    """An element a + bi of Z[i] with arbitrary-precision coordinates."""

    re: int
    im: int

    def __add__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self) -> "GaussianInt":
        return GaussianInt(-self.re, -self.im)

    def conjugate(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def __str__(self) -> str:
        return f"{self.re}{self.im:+d}i"


ONE_PLUS_I = GaussianInt(1, 1)


@dataclass(frozen=True)
class PrimeSplit:
    """p = pi * conj(pi); split_prime returns pi = e + 2if normalized (e odd > 0, f > 0).

    conjugate_choice() deliberately breaks the normalization: swapping pi with
    conj(pi) is the symmetry that permutes the K4/K5 and K6/K7 predictions.
    """

    p: int
    pi: GaussianInt

    @property
    def pi_bar(self) -> GaussianInt:
        return self.pi.conjugate()

    @property
    def e(self) -> int:
        return self.pi.re

    @property
    def f(self) -> int:
        return self.pi.im // 2

    def conjugate_choice(self) -> "PrimeSplit":
        return PrimeSplit(self.p, self.pi.conjugate())


def _sqrt_minus_one(p: int) -> int:
    """Some t with t^2 = -1 (mod p), p = 1 (mod 4) prime."""
    for a in range(2, p):
        t = pow(a, (p - 1) // 4, p)
        if t * t % p == p - 1:
            return t
    raise AssertionError(f"no sqrt(-1) mod {p}; {p} is not a 1 mod 4 prime")


def split_prime(p: int) -> PrimeSplit:
    """Split p = 5 (mod 8) in Z[i], returning pi = e + 2if with e, f > 0.

    Cornacchia descent on a square root of -1 mod p yields p = x^2 + y^2;
    since p is odd exactly one of x, y is even and it is 2f.
    """
    if not is_prime(p) or p % 8 != 5:
        raise ValueError(f"split_prime needs a prime p = 5 (mod 8), got {p}")
    t = _sqrt_minus_one(p)
    # Euclid descent: the first remainder below sqrt(p) is a leg of the square sum.
    a, b = p, min(t, p - t)
    bound = math.isqrt(p)
    while b > bound:
        a, b = b, a % b
    x = b
    y2 = p - x * x
    y = math.isqrt(y2)
    assert y * y == y2, f"Cornacchia failure for p={p}"
    e, f2 = (x, y) if x % 2 == 1 else (y, x)
    assert f2 % 2 == 0 and e * e + f2 * f2 == p
    return PrimeSplit(p, GaussianInt(e, f2))


def _residue_i(pi: GaussianInt, p: int) -> int:
    # pi = a + bi = 0 in Z[i]/(pi)  =>  i = -a * b^(-1) mod p  (b is invertible:
    # p | b would force p | a, impossible for norm(pi) = p).
    return (-pi.re * pow(pi.im, -1, p)) % p


def gauss_symbol(alpha: GaussianInt, pi: GaussianInt) -> int:
    """Quadratic residue symbol (alpha/pi) in {+1, -1} for a split Gaussian prime pi.

    Computed as the image of alpha^((N-1)/2) in Z[i]/(pi) = F_N, N = norm(pi)
    an odd prime.  Inert primes (norm q^2) are rejected; nothing here needs them.
    """
    n = pi.norm()
    if n % 2 == 0 or not is_prime(n):
        raise ValueError(
            f"gauss_symbol modulus must have odd prime norm, got norm({pi}) = {n}"
        )
    i_res = _residue_i(pi, n)
    a = (alpha.re + alpha.im * i_res) % n
    if a == 0:
        raise ValueError(f"gauss_symbol argument {alpha} is divisible by {pi}")
    r = pow(a, (n - 1) // 2, n)
    return 1 if r == 1 else -1


def symbol_pi(split1: PrimeSplit, split2: PrimeSplit) -> int:
    """The classification symbol pi = (pi_1/pi_3) for a pair of splits."""
    if split1.p == split2.p:
        raise ValueError("symbol_pi needs splits of distinct primes")
    return gauss_symbol(split1.pi, split2.pi)


def symbol_B(split1: PrimeSplit, split2: PrimeSplit) -> int:
    """The classification symbol B = (1+i/pi_1)(1+i/pi_3)."""
    if split1.p == split2.p:
        raise ValueError("symbol_B needs splits of distinct primes")
    return gauss_symbol(ONE_PLUS_I, split1.pi) * gauss_symbol(ONE_PLUS_I, split2.pi)
