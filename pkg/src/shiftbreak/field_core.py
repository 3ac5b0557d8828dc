"""Prime-field substrate: contexts, factorization, subgroups, indices, characters.

Everything here is pure and immutable after construction.  The index table is
a dense array and is only built for moduli up to 2^24; larger moduli fail
loudly instead of switching algorithms silently.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

from .errors import NoInverse, NotDividing, NotPrime, Overflow, TooLarge

MAX_P = 2**61
DENSE_TABLE_CAP = 2**24

# Witness set valid for deterministic Miller-Rabin below 2^64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Trial-division factorization as ((prime, multiplicity), ...)."""
    out = []
    m = n
    q = 2
    while q * q <= m:
        if m % q == 0:
            k = 0
            while m % q == 0:
                m //= q
                k += 1
            out.append((q, k))
        q += 1 if q == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


@dataclass(frozen=True)
class PrimeContext:
    p: int
    g: int  # least primitive root
    group_order_factors: tuple[tuple[int, int], ...]  # factorization of p-1


@dataclass(frozen=True)
class ExponentParams:
    e: int
    d: int  # (p-1)/e
    e_factors: tuple[tuple[int, int], ...]


def make_context(p: int) -> PrimeContext:
    if not (3 <= p < MAX_P):
        raise Overflow(f"p={p} outside [3, 2^61)")
    if not is_prime(p):
        raise NotPrime(f"p={p} is composite")
    factors = factorize(p - 1)
    g = _least_primitive_root(p, factors)
    return PrimeContext(p=p, g=g, group_order_factors=factors)


def _least_primitive_root(p: int, factors: tuple[tuple[int, int], ...]) -> int:
    for g in range(2, p):
        if all(pow(g, (p - 1) // ell, p) != 1 for ell, _ in factors):
            return g
    raise NotPrime(f"no primitive root found for p={p}")


def make_params(ctx: PrimeContext, e: int) -> ExponentParams:
    if e < 1 or (ctx.p - 1) % e != 0:
        raise NotDividing(f"e={e} does not divide p-1={ctx.p - 1}")
    return ExponentParams(e=e, d=(ctx.p - 1) // e, e_factors=factorize(e))


def mod_pow(a: int, k: int, ctx: PrimeContext) -> int:
    return pow(a, k, ctx.p)


def mod_inv(a: int, ctx: PrimeContext) -> int:
    if a % ctx.p == 0:
        raise NoInverse("zero has no inverse")
    return pow(a, -1, ctx.p)


def subgroup_elements(ctx: PrimeContext, params: ExponentParams) -> tuple[int, ...]:
    """The order-e subgroup G_e = {x : x^e = 1}, sorted ascending."""
    h = pow(ctx.g, params.d, ctx.p)
    out = []
    x = 1
    for _ in range(params.e):
        out.append(x)
        x = x * h % ctx.p
    return tuple(sorted(out))


@dataclass(frozen=True)
class IndexTable:
    p: int
    g: int
    ind: tuple[int, ...]  # ind[x] for x in [0, p); ind[0] unused (0)

    def __call__(self, x: int) -> int:
        return self.ind[x]


@functools.lru_cache(maxsize=16)
def build_index_table(ctx: PrimeContext) -> IndexTable:
    """Dense x -> ind(x) with g^ind(x) = x and ind values in [1, p-1].

    ind(1) = p-1 by convention, not 0.
    """
    p = ctx.p
    if p > DENSE_TABLE_CAP:
        raise TooLarge(f"p={p} above dense index-table cap 2^24")
    ind = [0] * p
    x = 1
    for z in range(1, p):
        x = x * ctx.g % p
        ind[x] = z
    return IndexTable(p=p, g=ctx.g, ind=tuple(ind))


def character_eval(
    ctx: PrimeContext, params: ExponentParams, j: int, x: int
) -> complex:
    """chi_j(x) = exp(2*pi*i * j * ind(x) / d); chi(0) = 0.

    The d characters chi_0..chi_{d-1} are exactly those trivial on G_e.
    """
    if x % ctx.p == 0:
        return 0j
    table = build_index_table(ctx)
    return cmath.exp(2j * math.pi * j * table(x % ctx.p) / params.d)


def least_nonresidue(ctx: PrimeContext, ell: int) -> int:
    """Smallest a >= 2 that is not an ell-th power residue mod p."""
    p = ctx.p
    exp = (p - 1) // ell
    for a in range(2, p):
        if pow(a, exp, p) != 1:
            return a
    raise NotDividing(f"every residue is an {ell}-th power mod {p}")


@functools.lru_cache(maxsize=128)
def power_table(p: int, e: int) -> tuple[int, ...]:
    """Dense x -> x^e mod p for x in [0, p); shared hot-path cache."""
    return tuple(pow(x, e, p) for x in range(p))
