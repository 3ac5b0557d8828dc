"""The sealed shift oracle returning (x+s)^e with exact call accounting.

The secret s is name-mangled away from ordinary callers; recovery algorithms
must go through query().  Tests use unsafe_reveal_secret for ground-truth
assertions only.
"""

from __future__ import annotations

import threading

from .errors import ForbiddenInput, OutOfRange
from .field_core import ExponentParams, PrimeContext


class ShiftOracle:
    def __init__(
        self,
        ctx: PrimeContext,
        params: ExponentParams,
        s: int,
        forbidden: frozenset[int] = frozenset(),
    ):
        if not (0 <= s < ctx.p):
            raise OutOfRange(f"s={s} outside [0, {ctx.p})")
        self.ctx = ctx
        self.params = params
        self.forbidden = frozenset(x % ctx.p for x in forbidden)
        self.__s = s
        self._calls = 0
        self._lock = threading.Lock()

    def query(self, x: int) -> int:
        x %= self.ctx.p
        if x in self.forbidden:
            # Rejections carry no information about s and are not counted.
            raise ForbiddenInput(f"x={x} is forbidden")
        with self._lock:
            self._calls += 1
        return pow((x + self.__s) % self.ctx.p, self.params.e, self.ctx.p)

    @property
    def calls(self) -> int:
        return self._calls


def new_oracle(
    ctx: PrimeContext,
    params: ExponentParams,
    s: int,
    forbidden: frozenset[int] = frozenset(),
) -> ShiftOracle:
    return ShiftOracle(ctx, params, s, forbidden)


def call_count(oracle: ShiftOracle) -> int:
    return oracle.calls


def unsafe_reveal_secret(oracle: ShiftOracle) -> int:
    """Test-harness backdoor; never used by recovery algorithms."""
    return oracle._ShiftOracle__s
