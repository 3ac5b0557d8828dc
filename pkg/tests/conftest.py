import time

import pytest

SUITE_BUDGET_SECONDS = 1200.0


@pytest.fixture(autouse=True, scope="session")
def suite_wall_clock():
    """Whole-run wall clock; the budget is asserted at session teardown."""
    started = time.monotonic()
    yield
    elapsed = time.monotonic() - started
    print(f"\n[ACCEPT] suite wall time {elapsed:.1f}s (budget {SUITE_BUDGET_SECONDS:.0f}s)")
    assert elapsed < SUITE_BUDGET_SECONDS
