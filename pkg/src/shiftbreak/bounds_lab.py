"""Exact brute-force counters for the finite combinatorial quantities.

Everything here is exhaustively computed, no estimates: coset-run lengths,
modular hyperbola and energy counts, subgroup shift intersections, product
sets, the spaced-set partition, character sums, and smooth-number counts.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from .errors import (
    BadV,
    DegeneratePair,
    DegenerateShift,
    PrincipalCharacter,
    TooLarge,
    TooSmall,
)
from .field_core import (
    ExponentParams,
    PrimeContext,
    build_index_table,
    character_eval,
    power_table,
    subgroup_elements,
)

EXHAUSTIVE_CAP = 10**6
LOOP_CAP = 10**8


@functools.lru_cache(maxsize=4096)
def longest_coset_run(ctx: PrimeContext, params: ExponentParams) -> int:
    """N(e): longest run x+1..x+H of consecutive elements inside one coset
    of G_e.  Runs break at 0, which belongs to no coset."""
    p = ctx.p
    if p > EXHAUSTIVE_CAP:
        raise TooLarge(f"p={p} above exhaustive cap")
    tab = power_table(p, params.e)  # x^e identifies the coset of x
    best = run = 1
    for x in range(2, p):
        run = run + 1 if tab[x] == tab[x - 1] else 1
        if run > best:
            best = run
    return best


def hyperbola_count(p: int, u: int, v: int, H: int) -> int:
    """Solutions of (x+u)(y+u) = v with 1 <= x, y <= H."""
    if v % p == 0:
        raise BadV("v must be invertible")
    count = 0
    for x in range(1, H + 1):
        xu = (x + u) % p
        if xu == 0:
            continue
        y = (v * pow(xu, -1, p) - u) % p
        if 1 <= y <= H:
            count += 1
    return count


def multiplicative_energy_count(p: int, a: int, H: int) -> int:
    """Quadruples in [1,H]^4 with (a+x1)(a+x2) = (a+x3)(a+x4)."""
    counts: dict = {}
    for x1 in range(1, H + 1):
        for x2 in range(1, H + 1):
            v = (a + x1) * (a + x2) % p
            counts[v] = counts.get(v, 0) + 1
    return sum(c * c for c in counts.values())


def subgroup_shift_intersection(
    ctx: PrimeContext, params: ExponentParams, shifts
) -> int:
    """|G_e intersect (lambda_1 G_e + mu_1) ... (lambda_m G_e + mu_m)|."""
    sub = subgroup_elements(ctx, params)
    inter = set(sub)
    p = ctx.p
    for lam, mu in shifts:
        if lam % p == 0 or mu % p == 0:
            raise DegenerateShift("lambda and mu must be nonzero")
        inter &= {(lam * g + mu) % p for g in sub}
    return len(inter)


def product_count_J(
    ctx: PrimeContext, nu: int, lam: int, s: int, h: int
) -> int:
    """Tuples (x_1..x_nu) in [1,h]^nu with prod (x_i + s) = lambda.

    Meet-in-the-middle over a half-split; both halves stay exact.
    """
    p = ctx.p
    if h**nu > LOOP_CAP:
        raise TooLarge(f"h^nu = {h**nu} above loop cap")
    lam %= p
    left = nu // 2
    right = nu - left

    def products(k):
        acc = {1: 1}
        for _ in range(k):
            nxt: dict = {}
            for v, c in acc.items():
                for x in range(1, h + 1):
                    w = v * ((x + s) % p) % p
                    nxt[w] = nxt.get(w, 0) + c
            acc = nxt
        return acc

    if left == 0:
        return products(right).get(lam, 0)
    lhs = products(left)
    rhs = products(right)
    total = 0
    for v, c in rhs.items():
        if v == 0:
            continue
        total += c * lhs.get(lam * pow(v, -1, p) % p, 0)
    if lam == 0:
        # zero products: some factor hit 0 on either side
        total = sum(
            c * rc
            for v, c in lhs.items()
            for w, rc in rhs.items()
            if v * w % p == 0
        )
    return total


def product_set_size(
    ctx: PrimeContext, nu: int, s: int, t: int | None, h: int
) -> int:
    """|A^(nu)| for A = {x+s : 1<=x<=h} or {(x+s)/(x+t) : 1<=x<=h, x != -t}."""
    p = ctx.p
    if h**nu > LOOP_CAP:
        raise TooLarge(f"h^nu = {h**nu} above loop cap")
    if t is None:
        base = {(x + s) % p for x in range(1, h + 1)}
    else:
        if (s - t) % p == 0:
            raise DegeneratePair("s and t must differ")
        base = {
            (x + s) * pow(x + t, -1, p) % p
            for x in range(1, h + 1)
            if (x + t) % p != 0
        }
    prods = {1}
    for _ in range(nu):
        prods = {a * b % p for a in prods for b in base}
    return len(prods)


@dataclass(frozen=True)
class SpacedPartition:
    d_sets: tuple[tuple[int, ...], ...]
    e_sets: tuple[tuple[int, ...], ...]
    leftover: tuple[int, ...]


def _circ_dist(a: int, b: int, p: int) -> int:
    d = (a - b) % p
    return min(d, p - d)


def _greedy_maximal_spaced(elements, U: float, p: int) -> list[int]:
    """Maximal-by-inclusion U-spaced subset, ascending sweep."""
    chosen: list[int] = []
    for x in sorted(elements):
        if all(_circ_dist(x, c, p) >= U for c in chosen):
            chosen.append(x)
    return chosen


def spaced_partition(p: int, S, kappa: float) -> SpacedPartition:
    """Partition of S into sqrt(p)/3-spaced sets D_k, window sets E_l whose
    dilation by floor(sqrt p) is spaced, and a small leftover."""
    if p < 37:
        raise TooSmall("p must be at least 37")
    S = sorted({x % p for x in S})
    size = len(S)
    undersized = size < 16 * p ** (2 * kappa)
    U = math.sqrt(p) / 3
    xi = math.isqrt(p)
    need_d = math.sqrt(size)
    remaining = set(S)
    d_sets = []
    while True:
        cand = _greedy_maximal_spaced(remaining, U, p)
        if len(cand) < need_d:
            centers = cand  # maximal: every leftover is within U of a center
            break
        d_sets.append(tuple(cand))
        remaining -= set(cand)
    # windows x + [-U, U] around the centers
    windows = []
    for x in centers:
        win = sorted(
            y for y in remaining if _circ_dist(y, x, p) <= U
        )
        windows.append(win)
    qual_threshold = p ** (-kappa) * math.sqrt(size)
    qualified = [win for win in windows if len(win) > qual_threshold]
    # disjointify: an element sits in at most two windows; shared runs are
    # split half and half between the two owners
    owners: dict = {}
    for idx, win in enumerate(qualified):
        for y in win:
            owners.setdefault(y, []).append(idx)
    e_sets: list[set] = [set() for _ in qualified]
    shared: dict = {}
    for y, who in owners.items():
        if len(who) == 1:
            e_sets[who[0]].add(y)
        else:
            shared.setdefault((who[0], who[1]), []).append(y)
    for (i, j), ys in shared.items():
        ys.sort()
        half = len(ys) // 2
        e_sets[i].update(ys[:half])
        e_sets[j].update(ys[half:])
    covered = set().union(*e_sets) if e_sets else set()
    leftover = tuple(sorted(remaining - covered))
    part = SpacedPartition(
        d_sets=tuple(tuple(sorted(d)) for d in d_sets),
        e_sets=tuple(tuple(sorted(es)) for es in e_sets),
        leftover=leftover,
    )
    if undersized:
        # Below the guaranteed size range the construction may still succeed;
        # fail loudly only when the properties genuinely do not hold.
        try:
            check_spaced_partition(p, S, kappa, part)
        except AssertionError as exc:
            raise TooSmall(f"|S|={size} below 16*p^(2 kappa): {exc}") from exc
    return part


def check_spaced_partition(p: int, S, kappa: float, part: SpacedPartition) -> None:
    """Mechanical check of the four partition properties; raises on failure."""
    S = sorted({x % p for x in S})
    size = len(S)
    U = math.sqrt(p) / 3
    xi = math.isqrt(p)
    min_size = 0.25 * p ** (-kappa) * math.sqrt(size)
    pieces = list(part.d_sets) + list(part.e_sets)
    all_elems: list[int] = []
    for piece in pieces:
        assert len(piece) >= min_size, "property (i) violated"
        all_elems.extend(piece)
    all_elems.extend(part.leftover)
    assert len(all_elems) == len(set(all_elems)), "pieces overlap"
    assert set(all_elems) == set(S), "partition does not cover S"
    for d in part.d_sets:
        for i, a in enumerate(d):
            for b in d[i + 1 :]:
                assert _circ_dist(a, b, p) >= U, "property (ii) violated"
    for es in part.e_sets:
        dilated = [x * xi % p for x in es]
        for i, a in enumerate(dilated):
            for b in dilated[i + 1 :]:
                assert _circ_dist(a, b, p) >= U, "property (iii) violated"
    assert len(part.leftover) <= 2 * p ** (-kappa) * size, "property (iv) violated"


def char_sum_fraction(
    ctx: PrimeContext,
    params: ExponentParams,
    j: int,
    s: int,
    t: int,
    h: int,
) -> complex:
    """Sum over x = 1..h, x != -t, of chi_j((x+s)/(x+t))."""
    p = ctx.p
    if (s - t) % p == 0:
        raise DegeneratePair("s and t must differ")
    total = 0j
    for x in range(1, h + 1):
        if (x + t) % p == 0:
            continue
        ratio = (x + s) * pow(x + t, -1, p) % p
        total += character_eval(ctx, params, j, ratio)
    return total


def char_sum_fraction_complete(
    ctx: PrimeContext, params: ExponentParams, j: int, s: int, t: int
) -> complex:
    """Complete sum over all x in F_p except x = -t; equals -1 for j != 0."""
    p = ctx.p
    if (s - t) % p == 0:
        raise DegeneratePair("s and t must differ")
    total = 0j
    for x in range(p):
        if (x + t) % p == 0:
            continue
        ratio = (x + s) * pow(x + t, -1, p) % p
        total += character_eval(ctx, params, j, ratio)
    return total


def char_sum_interval(
    ctx: PrimeContext, params: ExponentParams, j: int, h: int
) -> complex:
    """Sum over y = 1..h of chi_j(y)."""
    if j % params.d == 0:
        raise PrincipalCharacter("j must be nonprincipal")
    return sum(
        (character_eval(ctx, params, j, y % ctx.p) for y in range(1, h + 1)), 0j
    )


def char_sum_shifted_power(
    ctx: PrimeContext, params: ExponentParams, j: int, f: int, a: int
) -> complex:
    """Sum over x in F_p of chi_j(x^f + a)."""
    if j % params.d == 0:
        raise PrincipalCharacter("j must be nonprincipal")
    p = ctx.p
    return sum(
        (character_eval(ctx, params, j, (pow(x, f, p) + a) % p) for x in range(p)),
        0j,
    )


def psi_count(x: int, y: int) -> int:
    """Psi(x, y): number of y-smooth integers in [1, x], by sieve."""
    if x > LOOP_CAP:
        raise TooLarge(f"x={x} above loop cap")
    if x < 1:
        return 0
    rest = list(range(x + 1))  # rest[n]: part of n with prime factors > y
    for q in range(2, min(y, x) + 1):
        if rest[q] != q:
            continue  # q composite: some smaller prime already divided it
        for multiple in range(q, x + 1, q):
            while rest[multiple] % q == 0:
                rest[multiple] //= q
    return sum(1 for n in range(1, x + 1) if rest[n] == 1)


def smooth_subgroup_order(ctx: PrimeContext, y: int) -> int:
    """Order of the subgroup of F_p^* generated by 1..y."""
    table = build_index_table(ctx)
    p = ctx.p
    g = p - 1
    for x in range(1, min(y, p - 1) + 1):
        g = math.gcd(g, table(x))
    return (p - 1) // math.gcd(p - 1, g)
