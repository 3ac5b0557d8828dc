"""Hidden-shift recovery algorithms.

Strategies, all honest oracle clients:
 - interpolation baseline (e+1 calls)
 - zero-call initial candidates + probe narrowing
 - smooth pigeonhole initial candidates (n+1 calls)
 - randomized probing (seeded, mean O(1) calls)
 - large-e variant (m consecutive calls, global scan, then narrowing)
"""

from __future__ import annotations

import collections
import functools
import math
import random
from dataclasses import dataclass, field

from .errors import Stalled, TooLargeForScan
from .field_core import (
    ExponentParams,
    PrimeContext,
    mod_inv,
    power_table,
    subgroup_elements,
)
from .oracle import ShiftOracle
from .root_solver import (
    WitnessSet,
    all_eth_roots,
    candidates_from_consecutive_powers,
    full_witness_set,
)

FINAL_SET_THRESHOLD = 4  # resolve by x = -t queries at or below this size
SCAN_CAP = 10**7  # largest p for which a full-field scan is allowed


@dataclass(frozen=True)
class CandidateSet:
    members: tuple[int, ...]  # sorted
    provenance: str  # zero-call roots | smooth pigeonhole | global scan | narrowed

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class ProbePolicy:
    epsilon: float = 0.05
    window_cap: int | None = None  # default p-1 at use sites
    stall_factor: int = 2
    max_rounds: int = 64
    initial_window: int = 4

    def __post_init__(self):
        if not (0 < self.epsilon < 0.5):
            raise ValueError("epsilon must lie in (0, 1/2)")
        if self.stall_factor < 2:
            raise ValueError("stall_factor must be >= 2")


@dataclass
class RecoveryTrace:
    """Per-round bookkeeping for reports."""

    rounds: list = field(default_factory=list)  # (stat, probe_x, size_before, size_after)
    final_queries: int = 0


def _cap(policy: ProbePolicy, p: int) -> int:
    return p - 1 if policy.window_cap is None else min(policy.window_cap, p - 1)


def interpolation_recover(oracle: ShiftOracle) -> int:
    """Query x = 0..e and read s off the X^(e-1) coefficient of (X+s)^e."""
    p = oracle.ctx.p
    e = oracle.params.e
    answers = [oracle.query(x) for x in range(e + 1)]
    weights = _interp_weights(p, e)
    c_top = sum(a * w for a, w in zip(answers, weights)) % p
    return c_top * pow(e, -1, p) % p


@functools.lru_cache(maxsize=64)
def _interp_weights(p: int, e: int) -> tuple[int, ...]:
    """Weights w_i with sum A_i * w_i = coefficient of X^(e-1), nodes x_i = i.

    For e = 1 the coefficient of X^0 is the value at 0, so w = (1, 0).
    """
    if e == 1:
        return (1, 0)
    nodes = list(range(e + 1))
    total = sum(nodes)
    weights = []
    for i in nodes:
        denom = 1
        for j in nodes:
            if j != i:
                denom = denom * (i - j) % p
        num = (-(total - i)) % p  # coefficient of X^(e-1) in prod_{j!=i}(X - j)
        weights.append(num * pow(denom, -1, p) % p)
    return tuple(weights)


def initial_candidates_zero_call(
    oracle: ShiftOracle, witnesses: WitnessSet
) -> CandidateSet:
    """One call at x = 0; S_0 is the full e-th root set of the answer."""
    a0 = oracle.query(0)
    if a0 == 0:
        return CandidateSet((0,), "zero-call roots")
    roots = all_eth_roots(oracle.ctx, oracle.params, a0, witnesses)
    return CandidateSet(roots, "zero-call roots")


def smooth_witnesses(ctx: PrimeContext, params: ExponentParams, epsilon: float) -> WitnessSet:
    """Witnesses from the initial segment [1, y], y = floor(p^epsilon).

    gamma_ell is the smallest gamma_ell(x) over x <= y, where gamma_ell(x) is
    the largest gamma with x^((p-1)/ell^gamma) = 1; the minimizing x is the
    witness.  Small y keeps n = prod ell^gamma_ell small whenever a small
    ell-th nonresidue exists.
    """
    p = ctx.p
    y = max(1, int(p**epsilon))
    full = dict(ctx.group_order_factors)
    entries = []
    for ell, _ in params.e_factors:
        alpha = full[ell]
        best_gamma, best_x = alpha + 1, 1
        for x in range(1, y + 1):
            gamma = 0
            while gamma < alpha and pow(x, (p - 1) // ell ** (gamma + 1), p) == 1:
                gamma += 1
            if gamma < best_gamma:
                best_gamma, best_x = gamma, x
        entries.append((ell, best_x, min(best_gamma, alpha)))
    return WitnessSet(tuple(entries))


def initial_candidates_smooth(
    oracle: ShiftOracle, epsilon: float = 0.05
) -> tuple[CandidateSet, WitnessSet]:
    """n+1 calls at x = 0..n with n from smooth witnesses; exact pigeonhole set."""
    wits = smooth_witnesses(oracle.ctx, oracle.params, epsilon)
    n = wits.n
    answers = [oracle.query(x) for x in range(n + 1)]
    cands = candidates_from_consecutive_powers(
        oracle.ctx, oracle.params, wits, answers
    )
    return CandidateSet(cands, "smooth pigeonhole"), wits


def _zeta(ctx: PrimeContext) -> int:
    return mod_inv(math.isqrt(ctx.p), ctx)


def collision_stat_r(
    ctx: PrimeContext, params: ExponentParams, S, x: int
) -> int:
    """Max multiplicity of the pair ((t+x)^e, (t+zeta*x)^e) over t in S."""
    p = ctx.p
    zeta = _zeta(ctx)
    tab = power_table(p, params.e)
    zx = zeta * x % p
    keys = [tab[(t + x) % p] * p + tab[(t + zx) % p] for t in S]
    return max(collections.Counter(keys).values()) if keys else 0


def collision_stat_R(
    ctx: PrimeContext, params: ExponentParams, S, x: int
) -> int:
    """Ordered pairs s1 != s2 in S with (x+s1)/(x+s2) in G_e.

    Equivalent to sum of c*(c-1) over fibers of t -> (x+t)^e, excluding the
    zero fiber (pairs with x+s2 = 0 are excluded, and x+s1 = 0 gives ratio 0).
    """
    p = ctx.p
    tab = power_table(p, params.e)
    counts = collections.Counter(tab[(t + x) % p] for t in S)
    return sum(c * (c - 1) for v, c in counts.items() if v != 0)


def narrow_candidates(
    oracle: ShiftOracle,
    S: CandidateSet,
    policy: ProbePolicy,
    stat: str,
    trace: RecoveryTrace | None = None,
) -> CandidateSet:
    """One narrowing round: scan a probe window, query, filter.

    The probe is the smallest x minimizing the statistic; the window doubles
    while no probe certifies strict shrinkage.
    """
    ctx, params = oracle.ctx, oracle.params
    p = ctx.p
    cap = _cap(policy, p)
    members = S.members
    size = len(members)
    h = min(max(policy.initial_window, 1), cap)
    stat_fn = collision_stat_r if stat == "r" else collision_stat_R
    certify = size if stat == "r" else size * (size - 1)
    zeta = _zeta(ctx)
    # e = p-1 has only the fibers {0} and F_p^*, so the r statistic reduces
    # to membership counts; same values as the generic path, O(1) per probe
    fast = stat == "r" and params.e == p - 1 and size >= 1
    member_set = set(members) if fast else None

    def fast_r(x: int) -> int:
        if x == 0:
            a = 1 if 0 in member_set else 0
            return max(size - a, a)
        a = 1 if (-x) % p in member_set else 0
        b = 1 if (-zeta * x) % p in member_set else 0
        return max(size - a - b, a, b)

    scanned = 0
    while True:
        best_val, best_x = None, None
        for x in range(scanned, h):
            if x in oracle.forbidden:
                continue
            if stat == "r" and (zeta * x % p) in oracle.forbidden:
                continue
            v = fast_r(x) if fast else stat_fn(ctx, params, members, x)
            if best_val is None or v < best_val:
                best_val, best_x = v, x
                if v == 0 or (stat == "r" and v == 1):
                    break
        if best_val is not None and best_val < certify:
            break
        scanned = h
        if h >= cap:
            raise Stalled(f"window cap {cap} reached without shrinkage")
        h = min(h * policy.stall_factor, cap)
    tab = power_table(p, params.e)
    if stat == "r":
        a1 = oracle.query(best_x)
        a2 = oracle.query(zeta * best_x % p)
        zx = zeta * best_x % p
        kept = tuple(
            t
            for t in members
            if tab[(t + best_x) % p] == a1 and tab[(t + zx) % p] == a2
        )
    else:
        a1 = oracle.query(best_x)
        kept = tuple(t for t in members if tab[(t + best_x) % p] == a1)
    if trace is not None:
        trace.rounds.append((stat, best_x, size, len(kept)))
    return CandidateSet(kept, "narrowed")


def _resolve_small(oracle: ShiftOracle, S, trace: RecoveryTrace | None) -> int:
    """Query x = -t until the oracle returns 0; the last candidate is free."""
    p = oracle.ctx.p
    members = sorted(S)
    for i, t in enumerate(members):
        if i == len(members) - 1:
            return t
        x = (-t) % p
        if x in oracle.forbidden:
            continue
        if trace is not None:
            trace.final_queries += 1
        if oracle.query(x) == 0:
            return t
    raise Stalled("no candidate matched; true shift lost upstream")


def recover_from_candidates(
    oracle: ShiftOracle,
    S0: CandidateSet,
    policy: ProbePolicy = ProbePolicy(),
    trace: RecoveryTrace | None = None,
) -> int:
    """Iterated narrowing, r-statistic while the set is large, then R, then
    final resolution through x = -t queries."""
    p = oracle.ctx.p
    S = S0
    rounds = 0
    threshold = p**0.05
    while len(S) > FINAL_SET_THRESHOLD:
        stat = "r" if len(S) > threshold else "R"
        S = narrow_candidates(oracle, S, policy, stat, trace)
        rounds += 1
        if rounds > policy.max_rounds:
            raise Stalled(f"no resolution within {policy.max_rounds} rounds")
    return _resolve_small(oracle, S.members, trace)


def recover_zero_call_narrow(
    oracle: ShiftOracle,
    policy: ProbePolicy = ProbePolicy(),
    trace: RecoveryTrace | None = None,
) -> int:
    wits = full_witness_set(oracle.ctx, oracle.params)
    S0 = initial_candidates_zero_call(oracle, wits)
    return recover_from_candidates(oracle, S0, policy, trace)


def recover_smooth_narrow(
    oracle: ShiftOracle,
    policy: ProbePolicy = ProbePolicy(),
    trace: RecoveryTrace | None = None,
) -> int:
    S0, _ = initial_candidates_smooth(oracle, policy.epsilon)
    return recover_from_candidates(oracle, S0, policy, trace)


def randomized_probe_count(p: int, e: int) -> int:
    """nu = floor(3 ln p / ln(p/e)) + 1 (natural logs)."""
    return int(3 * math.log(p) / math.log(p / e)) + 1


@functools.lru_cache(maxsize=64)
def _root_buckets(p: int, e: int):
    """value -> all y with y^e = value; the fibers of the power map."""
    buckets: dict = {}
    for y, v in enumerate(power_table(p, e)):
        buckets.setdefault(v, []).append(y)
    return {v: tuple(ys) for v, ys in buckets.items()}


def recover_randomized(
    oracle: ShiftOracle,
    S0: CandidateSet,
    seed: int,
    trace: RecoveryTrace | None = None,
) -> int:
    """Up to nu seeded uniform probes, filter, then x = -t resolution.

    Probing stops early once a single candidate remains; the nu budget is an
    upper bound on information-bearing probes.
    """
    ctx, params = oracle.ctx, oracle.params
    p = ctx.p
    nu = randomized_probe_count(p, params.e)
    rng = random.Random(seed)
    tab = power_table(p, params.e)
    buckets = _root_buckets(p, params.e)
    S = set(S0.members)
    for _ in range(nu):
        if len(S) <= 1:
            break
        x = rng.randrange(p)
        if x in oracle.forbidden:
            continue
        a = oracle.query(x)
        fiber = buckets.get(a, ())
        complement = p - len(fiber)
        if len(fiber) <= len(S):
            S &= {(y - x) % p for y in fiber}
        elif complement < len(S):
            # cheaper to subtract the other fibers than to rescan S
            S -= {
                (y - x) % p
                for v, ys in buckets.items()
                if v != a
                for y in ys
            }
        else:
            S = {t for t in S if tab[(t + x) % p] == a}
        if trace is not None:
            trace.rounds.append(("random", x, None, len(S)))
    return _resolve_small(oracle, sorted(S), trace)


def large_e_call_count(p: int, e: int) -> int:
    """m = floor(ln p * ln e / (2 ln(p-1))) + 1 (natural logs)."""
    return int(math.log(p) * math.log(e) / (2 * math.log(p - 1))) + 1


def shkvyu_admissible_m(p: int, e: int) -> int | None:
    """First m in 3..8 with p >= (2m * floor(e^(1/(2m+1))) + 2m + 2) * e."""
    for m in range(3, 9):
        root = int(round(e ** (1.0 / (2 * m + 1))))
        while root**(2 * m + 1) > e:
            root -= 1
        if p >= (2 * m * root + 2 * m + 2) * e:
            return m
    return None


def _scan_candidates(
    oracle: ShiftOracle, trace: RecoveryTrace | None = None
) -> CandidateSet | int:
    """m consecutive queries then a full-field scan; returns the shift
    directly when some answer is zero."""
    ctx, params = oracle.ctx, oracle.params
    p = ctx.p
    if p > SCAN_CAP:
        raise TooLargeForScan(f"p={p} above scan cap {SCAN_CAP}")
    m = large_e_call_count(p, params.e)
    answers = []
    for j in range(1, m + 1):
        a = oracle.query(j)
        if a == 0:
            return (-j) % p
        answers.append(a)
    tab = power_table(p, params.e)
    members = tuple(
        x
        for x in range(p)
        if all(tab[(x + j) % p] == answers[j - 1] for j in range(1, m + 1))
    )
    if trace is not None:
        trace.rounds.append(("scan", m, p, len(members)))
    return CandidateSet(members, "global scan")


def recover_large_e(
    oracle: ShiftOracle,
    policy: ProbePolicy = ProbePolicy(),
    trace: RecoveryTrace | None = None,
) -> int:
    """Delegates to the small-e pipeline below e = p^0.9; otherwise runs the
    consecutive-query scan phase, then narrows with a wide window."""
    ctx, params = oracle.ctx, oracle.params
    p, e = ctx.p, params.e
    if e <= p**0.9:
        return recover_zero_call_narrow(oracle, policy, trace)
    got = _scan_candidates(oracle, trace)
    if isinstance(got, int):
        return got
    h = int((p / e) * math.sqrt(p) * math.log(p) ** 2)
    window = max(1, min(h, _cap(policy, p)))
    wide = ProbePolicy(
        epsilon=policy.epsilon,
        window_cap=policy.window_cap,
        stall_factor=policy.stall_factor,
        max_rounds=policy.max_rounds,
        initial_window=window,
    )
    return recover_from_candidates(oracle, got, wide, trace)
