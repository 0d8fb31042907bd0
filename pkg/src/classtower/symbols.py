"""Residue symbols over Z and validation of the prime pairs we work with.

Everything here is exact integer arithmetic: Jacobi/Legendre symbols, the
rational quartic residue symbol (a/p)_4 for p = 1 (mod 4), its special-case
companion (x/2)_4, and the entry check that a pair of primes satisfies
p1 = p2 = 5 (mod 8), p1 != p2.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "InvalidPairError",
    "PrimePair",
    "is_prime",
    "jacobi",
    "quartic_symbol",
    "quartic_symbol_mod2",
    "validate_pair",
]


class InvalidPairError(ValueError):
    """A prime pair failed validation (not prime, wrong congruence, or equal)."""


# Deterministic Miller-Rabin witnesses for n < 2^64 (Sinclair's set); the same
# panel is reused as a fixed strong-probable-prime test above that bound.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    """Miller-Rabin primality test, deterministic for n < 2**64."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n), by binary reciprocity; no factoring of n.

    Equals the Legendre symbol when n is prime; 0 when gcd(a, n) > 1.
    """
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol requires odd positive n, got n={n}")
    a %= n
    sign = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def quartic_symbol(a: int, p: int) -> int:
    """Rational quartic residue symbol (a/p)_4 = a^((p-1)/4) mod p, in {+1, -1}.

    Requires p prime, p = 1 (mod 4), and a a quadratic residue mod p (the
    symbol is only +/-1 under that hypothesis).
    """
    if p % 4 != 1 or not is_prime(p):
        raise ValueError(f"quartic symbol needs a prime p = 1 (mod 4), got p={p}")
    if jacobi(a, p) != 1:
        raise ValueError(
            f"quartic symbol (a/p)_4 needs (a/p) = +1, got a={a}, p={p}"
        )
    r = pow(a, (p - 1) // 4, p)
    # r^2 = a^((p-1)/2) = 1 (mod p), so r is +1 or -1 mod p.
    if r == 1:
        return 1
    if r == p - 1:
        return -1
    raise AssertionError(f"a^((p-1)/4) mod p not +/-1 for a={a}, p={p}")


def quartic_symbol_mod2(x: int) -> int:
    """The symbol (x/2)_4 = (-1)^((x-1)/8) for x = 1 (mod 8)."""
    if x % 8 != 1:
        raise ValueError(f"(x/2)_4 requires x = 1 (mod 8), got x={x}")
    return -1 if ((x - 1) // 8) % 2 else 1


@dataclass(frozen=True)
class PrimePair:
    """A validated pair of distinct primes p1 = p2 = 5 (mod 8)."""

    p1: int
    p2: int

    @property
    def r(self) -> int:
        """The radicand p1*p2 of the real quadratic resolvent fields."""
        return self.p1 * self.p2

    @property
    def d(self) -> int:
        """The defining radicand d = 2*p1*p2."""
        return 2 * self.p1 * self.p2

    @property
    def legendre(self) -> int:
        """The Legendre symbol (p1/p2) (= (p2/p1), both primes are 1 mod 4)."""
        return jacobi(self.p1, self.p2)

    def swapped(self) -> "PrimePair":
        return PrimePair(self.p2, self.p1)


def validate_pair(p1: int, p2: int) -> PrimePair:
    """Check p1, p2 are distinct primes with p1 = p2 = 5 (mod 8)."""
    for p in (p1, p2):
        if not is_prime(p):
            raise InvalidPairError(f"{p} is not prime")
        if p % 8 != 5:
            raise InvalidPairError(f"{p} = {p % 8} (mod 8), need 5 (mod 8)")
    if p1 == p2:
        raise InvalidPairError(f"primes must be distinct, got p1 = p2 = {p1}")
    return PrimePair(p1, p2)


def primes_5_mod_8(limit: int) -> list[int]:
    """All primes p <= limit with p = 5 (mod 8)."""
    return [p for p in range(5, limit + 1, 8) if is_prime(p)]
