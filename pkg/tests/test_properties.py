import pytest

from mitsui_lab import properties


@pytest.mark.parametrize("name,fn", properties.SUITE, ids=[n for n, _ in properties.SUITE])
def test_property_suite(name, fn):
    value, threshold, passed = fn()
    assert passed, (name, value, threshold)
