from __future__ import annotations

import random

import pytest

from dgbv_lab.models import bigraded_kahler_model, bv_composite, load_bundled
from dgbv_lab.models.library import BundledModel


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def torus() -> BundledModel:
    return load_bundled("torus-4")


@pytest.fixture
def heisenberg() -> BundledModel:
    return load_bundled("heisenberg")


@pytest.fixture
def kodaira_thurston() -> BundledModel:
    return load_bundled("kodaira-thurston")


@pytest.fixture
def complex_torus_1() -> BundledModel:
    return load_bundled("complex-torus-1")


@pytest.fixture
def complex_torus_2() -> BundledModel:
    return load_bundled("complex-torus-2")


@pytest.fixture
def composite() -> BundledModel:
    return bv_composite()


@pytest.fixture
def perturbed_kahler():
    """Complex curve whose inner product is off by a factor of two on the top form."""

    return bigraded_kahler_model(1, weights=[1, 2, 2, 8], name="perturbed-curve")
