from pathlib import Path

import numpy as np
import pytest

from lotsizer.model import DlsInstance

GOLDEN = Path(__file__).parent / "golden"

WW_DEMAND = [69, 29, 36, 61, 61, 26, 34, 67, 45, 67, 79, 56]
WW_SETUP = [85, 102, 102, 101, 98, 114, 105, 86, 119, 110, 98, 114]


def random_single_product(rng: np.random.Generator, n: int = 12) -> DlsInstance:
    return DlsInstance(demand=rng.integers(0, 101, (n, 1)).astype(float),
                       holding_cost=[rng.uniform(1, 3)], setup_cost=[rng.uniform(50, 150)])


def random_batch_instance(rng: np.random.Generator) -> DlsInstance:
    """Small single-batch instance with production, product-count and changeover limits."""
    n = int(rng.integers(1, 5))
    m = int(rng.integers(1, 3))
    return DlsInstance(
        demand=rng.integers(0, 30, (n, m)).astype(float),
        holding_cost=rng.uniform(0.5, 2, m),
        setup_cost=rng.uniform(5, 50, m),
        shortage_cost=rng.uniform(2, 10, m) if rng.random() < 0.5 else None,
        batch_size=rng.integers(10, 40, m).astype(float),
        production_limit=float(rng.integers(20, 70)),
        max_products_per_period=int(rng.integers(1, m + 1)),
        changeover_limit=rng.integers(0, m + 1, n).astype(float),
        initial_inventory=rng.integers(0, 20, m).astype(float),
        quantity_mode="single-batch",
    )


@pytest.fixture
def ww_instance() -> DlsInstance:
    return DlsInstance(demand=np.array(WW_DEMAND, dtype=float)[:, None], holding_cost=[1.0],
                       setup_cost=np.array(WW_SETUP, dtype=float)[:, None],
                       name="wagner_whitin")


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
