import math

import pytest

from nanotalbot import GratingSpec, SphereSpec, TrapSpec


@pytest.fixture
def sphere():
    return SphereSpec(radius=6.5e-9, density=2300.0, dielectric=2.0)


@pytest.fixture
def trap():
    return TrapSpec(omega=2.0 * math.pi * 100.0, temperature=0.0)


@pytest.fixture
def grating():
    return GratingSpec(period=0.25e-6, intensity=55e3, pulse_duration=1e-6)
