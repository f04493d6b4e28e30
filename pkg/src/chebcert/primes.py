"""Exact integer sieves: primes, prime powers, von Mangoldt data."""

from __future__ import annotations

import functools
import math

import numpy as np

__all__ = [
    "prime_flags",
    "primes_up_to",
    "prime_count",
    "prime_power_count",
    "prime_powers_up_to",
    "mangoldt_prime_powers",
    "least_primes_in_progressions",
    "euler_phi",
    "prime_factors",
    "cyclotomic_discriminant",
]


@functools.lru_cache(maxsize=4)
def prime_flags(n: int) -> np.ndarray:
    """Boolean array ``flags[k]`` telling whether k is prime, for 0 <= k <= n."""
    n = int(n)
    flags = np.ones(max(n + 1, 2), dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    flags.setflags(write=False)
    return flags[: n + 1]


def primes_up_to(n: int) -> np.ndarray:
    return np.flatnonzero(prime_flags(n)).astype(np.int64)


def prime_count(x: int) -> int:
    """pi(x), exactly."""
    if x < 2:
        return 0
    return int(np.count_nonzero(prime_flags(int(x))))


def prime_powers_up_to(x: int, min_exponent: int = 2):
    """Sorted list of p**h <= x with h >= min_exponent."""
    out = []
    for p in primes_up_to(math.isqrt(int(x)) + 1).tolist():
        q = p**min_exponent
        while q <= x:
            out.append(q)
            q *= p
    return sorted(out)


def prime_power_count(x: int) -> int:
    """S(x): number of prime powers p**h <= x with h >= 2."""
    return len(prime_powers_up_to(int(x)))


@functools.lru_cache(maxsize=4)
def mangoldt_prime_powers(n: int):
    """All prime powers q = p**h <= n with their primes, as int64 arrays."""
    ps = primes_up_to(n)
    qs, bs = [ps], [ps]
    base = ps[ps <= math.isqrt(n)]
    power = base.copy()
    while base.size:
        power = power * base
        keep = power <= n
        base, power = base[keep], power[keep]
        if base.size:
            qs.append(power)
            bs.append(base)
    q = np.concatenate(qs)
    b = np.concatenate(bs)
    order = np.argsort(q, kind="stable")
    return q[order], b[order]


def euler_phi(q: int) -> int:
    out = q
    for p in prime_factors(q):
        out = out // p * (p - 1)
    return out


def prime_factors(q: int):
    """Distinct prime factors in increasing order."""
    out = []
    n = q
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def cyclotomic_discriminant(q: int) -> int:
    """|disc(Q(zeta_q))| = q**phi(q) / prod_{p | q} p**(phi(q)/(p-1))."""
    if q < 1:
        raise ValueError("modulus must be positive")
    if q % 4 == 2:
        q //= 2  # Q(zeta_{2m}) = Q(zeta_m) for odd m
    if q == 1:
        return 1
    phi = euler_phi(q)
    num = q**phi
    den = 1
    for p in prime_factors(q):
        den *= p ** (phi // (p - 1))
    if num % den:
        raise ArithmeticError("discriminant formula did not divide exactly")
    return num // den


def least_primes_in_progressions(q: int, limit: int | None = None):
    """Map each residue a coprime to q onto the least prime p = a (mod q)."""
    if q < 1:
        raise ValueError("modulus must be positive")
    residues = {a for a in range(q) if math.gcd(a, q) == 1}
    bound = limit or max(1000, 50 * q * max(1, int(math.log(q + 1)) ** 2))
    while True:
        ps = primes_up_to(bound)
        res, first = np.unique(ps % q, return_index=True)
        found = {int(a): int(ps[i]) for a, i in zip(res.tolist(), first.tolist()) if a in residues}
        if len(found) == len(residues) or limit is not None:
            return dict(sorted(found.items()))
        bound *= 4
