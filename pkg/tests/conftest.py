"""Shared fixtures: the small shifts and ceilings used across the suite."""

import pytest

from flowescape import (
    build_markov_shift,
    build_suspension,
    constant_function,
    cylinder_function,
)


@pytest.fixture(scope="session")
def full2():
    return build_markov_shift([[0.5, 0.5], [0.5, 0.5]])


@pytest.fixture(scope="session")
def golden_mean():
    return build_markov_shift([[0.5, 0.5], [1.0, 0.0]])


@pytest.fixture(scope="session")
def biased2():
    return build_markov_shift([[0.9, 0.1], [0.2, 0.8]])


@pytest.fixture(scope="session")
def cycle2():
    return build_markov_shift([[0.0, 1.0], [1.0, 0.0]])


@pytest.fixture(scope="session")
def full3():
    third = 1.0 / 3.0
    return build_markov_shift([[third] * 3] * 3)


@pytest.fixture(scope="session")
def unit_ceiling(full2):
    return constant_function(full2, 1.0)


@pytest.fixture(scope="session")
def step_ceiling():
    """1 + indicator of [1]: the canonical non-constant ceiling."""
    return cylinder_function(1, {(0,): 1.0, (1,): 2.0}, lattice=1.0)


@pytest.fixture(scope="session")
def unit_system(full2, unit_ceiling):
    return build_suspension(full2, unit_ceiling)


@pytest.fixture(scope="session")
def step_system(full2, step_ceiling):
    return build_suspension(full2, step_ceiling)
