import os

import pytest
from hypothesis import HealthCheck, settings

from cuspforge.inputs import load_input

settings.register_profile(
    "default",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("quick", max_examples=20, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("CUSPFORGE_HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def fig8():
    return load_input("figure8")


@pytest.fixture(scope="session")
def knot52():
    return load_input("5_2")


@pytest.fixture(scope="session")
def knot63():
    return load_input("6_3")


@pytest.fixture(scope="session")
def bundled(fig8, knot52, knot63):
    return {"figure8": fig8, "5_2": knot52, "6_3": knot63}
