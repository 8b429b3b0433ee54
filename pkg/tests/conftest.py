"""Shared solved sweeps; the solves are the expensive part of the suite."""

import math

import numpy as np
import pytest

from etoc import fixedv, form1, form2
from etoc.model import Problem

MU = 0.5
SWEEP_ALPHAS = np.linspace(5.0, 90.0, 12)
APPENDIX_TARGET = (math.cos(math.radians(30)), math.sin(math.radians(30)))


def sweep_problems():
    return [Problem.polar(1.0, a, MU) for a in SWEEP_ALPHAS]


@pytest.fixture(scope="session")
def appendix_problem():
    return Problem.cartesian(*APPENDIX_TARGET, MU)


@pytest.fixture(scope="session")
def appendix_form1(appendix_problem):
    return form1.solve(appendix_problem)[0]


@pytest.fixture(scope="session")
def sweep_form1():
    return [(p, form1.solve(p)[0]) for p in sweep_problems()]


@pytest.fixture(scope="session")
def sweep_form2():
    return [(p, form2.solve(p)[0]) for p in sweep_problems()]


@pytest.fixture(scope="session")
def sweep_fixedv():
    return [(p, fixedv.solve(p)[0]) for p in sweep_problems()]
