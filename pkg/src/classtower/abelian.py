"""Abelian type invariants and structure extraction for finite abelian groups.

AbelianType is the canonical elementary-divisor chain (ascending, each divisor
dividing the next); it is the common currency every oracle and prediction is
compared in.  abelian_structure() recovers the chain of a concrete finite
abelian group from order statistics: if the type is (p^e1, ..., p^er) then
#{x : x^(p^k) = id} = p^(sum_i min(k, e_i)), so the counts of p^k-torsion
elements determine the exponent multiset.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

__all__ = ["AbelianType", "abelian_structure", "factorize"]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (inputs here are modest)."""
    if n <= 0:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class AbelianType:
    """Elementary divisor chain d1 | d2 | ... | dk, ascending, all di > 1.

    The empty chain is the trivial group.
    """

    divisors: tuple[int, ...]

    def __post_init__(self) -> None:
        for d in self.divisors:
            if d <= 1:
                raise ValueError(f"divisors must exceed 1, got {self.divisors}")
        for a, b in zip(self.divisors, self.divisors[1:]):
            if b % a != 0:
                raise ValueError(f"not a divisor chain: {self.divisors}")

    @classmethod
    def from_factors(cls, factors: Iterable[int]) -> "AbelianType":
        """Canonical type of a direct sum of cyclic groups of the given orders.

        Accepts any cyclic decomposition (e.g. a printed tuple like (30, 10, 2)
        or (2, 3)); per-prime exponents are realigned into a divisor chain.
        """
        per_prime: dict[int, list[int]] = {}
        for f in factors:
            if f < 1:
                raise ValueError(f"cyclic orders must be >= 1, got {f}")
            if f == 1:
                continue
            for p, e in factorize(f).items():
                per_prime.setdefault(p, []).append(e)
        width = max((len(v) for v in per_prime.values()), default=0)
        chain = []
        for j in range(width):
            d = 1
            for p, exps in per_prime.items():
                exps_sorted = sorted(exps, reverse=True)
                if j < len(exps_sorted):
                    d *= p ** exps_sorted[j]
            chain.append(d)
        return cls(tuple(sorted(chain)))

    def order(self) -> int:
        n = 1
        for d in self.divisors:
            n *= d
        return n

    def two_part(self) -> "AbelianType":
        """Each divisor replaced by its largest power-of-2 factor, 1s dropped."""
        parts = []
        for d in self.divisors:
            t = 1
            while d % 2 == 0:
                t *= 2
                d //= 2
            if t > 1:
                parts.append(t)
        return AbelianType(tuple(sorted(parts)))

    def rank(self) -> int:
        return len(self.divisors)

    def is_cyclic(self) -> bool:
        return len(self.divisors) <= 1

    def __str__(self) -> str:
        return "(" + ", ".join(str(d) for d in self.divisors) + ")"


def abelian_structure(
    elements: Sequence[Hashable],
    op: Callable,
    identity: Hashable,
) -> AbelianType:
    """Elementary divisors of a finite abelian group given by its elements and law."""
    n = len(elements)
    if n == 1:
        return AbelianType(())
    per_prime_exponents: dict[int, list[int]] = {}
    for p, e_max in factorize(n).items():
        # counts[k] = #{x : x^(p^k) = identity}; stable once the full p-Sylow
        # subgroup is counted.
        powers = list(elements)
        counts = [1]
        while counts[-1] < p ** e_max and powers:
            powers = [_pow(x, p, op, identity) for x in powers]
            c = sum(1 for x in powers if x == identity)
            if c == counts[-1]:
                break
            counts.append(c)
        # r_k = #{invariant factors with p-exponent >= k}
        ranks = []
        for prev, cur in zip(counts, counts[1:]):
            q, rem = divmod(cur, prev)
            assert rem == 0, "torsion counts not p-power graded; group not abelian?"
            r = 0
            while q > 1:
                q //= p
                r += 1
            ranks.append(r)
        exponents: list[int] = []
        for k, r in enumerate(ranks, start=1):
            nxt = ranks[k] if k < len(ranks) else 0
            exponents.extend([k] * (r - nxt))
        per_prime_exponents[p] = sorted(exponents, reverse=True)
    width = max((len(v) for v in per_prime_exponents.values()), default=0)
    chain = []
    for j in range(width):
        d = 1
        for p, exps in per_prime_exponents.items():
            if j < len(exps):
                d *= p ** exps[j]
        chain.append(d)
    result = AbelianType(tuple(sorted(chain)))
    assert result.order() == n, f"structure {result} does not fill order {n}"
    return result


def _pow(x, p: int, op, identity):
    acc = identity
    base = x
    e = p
    while e:
        if e & 1:
            acc = op(acc, base)
        base = op(base, base)
        e >>= 1
    return acc
