import math

import numpy as np
import pytest

import knotfields as kf
from knotfields import knots

FOUR_PI = 4.0 * math.pi
TWO_PI = 2.0 * math.pi


def circ_dist(a, b, period=FOUR_PI):
    d = abs(float(a) - float(b)) % period
    return min(d, period - d)


@pytest.fixture(scope="session")
def circle400():
    return kf.make_curve(knots.circle(400))


@pytest.fixture(scope="session")
def trefoil512():
    return kf.make_curve(knots.trefoil(512))


@pytest.fixture(scope="session")
def figure_eight512():
    return kf.make_curve(knots.figure_eight(512))


@pytest.fixture(scope="session")
def hopf():
    c1, c2 = knots.hopf_link(300)
    return kf.Link((kf.make_curve(c1), kf.make_curve(c2)))


@pytest.fixture(scope="session")
def whitehead():
    u, w = knots.whitehead_link(512)
    return kf.Link((kf.make_curve(u), kf.make_curve(w)))
