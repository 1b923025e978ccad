import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import crbgate as cg

settings.register_profile(
    "ci",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


def make_square_anchors(side=10.0, z=0.0, a=-45.0, b=-2.0):
    """Four anchors at the corners of a side x side square."""
    corners = [(0.0, 0.0), (side, 0.0), (side, side), (0.0, side)]
    return tuple(
        cg.Anchor(f"c{i}", np.array([x, y, z]), a, b)
        for i, (x, y) in enumerate(corners)
    )


def random_layout(rng, n, span=10.0, z_range=(0.0, 3.0)):
    """n anchors uniformly inside a span x span x z_range box."""
    anchors = []
    for i in range(n):
        pos = np.array(
            [
                rng.uniform(0, span),
                rng.uniform(0, span),
                rng.uniform(*z_range),
            ]
        )
        b = rng.uniform(-4.0, -1.0)
        anchors.append(cg.Anchor(f"r{i}", pos, rng.uniform(-60, -30), b))
    return tuple(anchors)


@pytest.fixture
def square_anchors():
    return make_square_anchors()


@pytest.fixture
def study_scene():
    """The stock 32-anchor scene with an overhead camera."""
    return cg.default_scene()


@pytest.fixture
def rng():
    return np.random.default_rng(20240831)
