import random

import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--seed",
        action="store",
        type=int,
        default=20260819,
        help="base seed for randomized tests",
    )


@pytest.fixture
def seed(request) -> int:
    return request.config.getoption("--seed")


@pytest.fixture
def make_rng(seed):
    """Factory for independent, reproducible RNG streams.

    Each call site passes its own salt so adding a test never reshuffles
    the draws of another.
    """

    def factory(salt: int = 0) -> random.Random:
        return random.Random(seed * 2654435761 + salt)

    return factory
