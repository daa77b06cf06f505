import pytest

from nlogic.acceptance import fixture_text, load_algebra
from nlogic.duality import canonical_frame
from nlogic.frames import parse_frame


@pytest.fixture
def alg():
    return load_algebra


@pytest.fixture
def canon():
    return lambda name, sig=None: canonical_frame(load_algebra(name), sig)


@pytest.fixture
def bad_frame():
    return parse_frame(fixture_text("bad.frame"))
