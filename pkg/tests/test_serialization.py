"""Deterministic JSON emission tests."""

import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from dscore import serialization


def test_float_shortest_roundtrip_format():
    assert serialization.dumps(0.1) == "0.1"
    assert serialization.dumps(1.0) == "1"
    assert serialization.dumps(-1.0190493307301363) == "-1.0190493307301363"
    assert serialization.dumps(1e-9) == "1e-09"


def test_object_key_order_preserved():
    assert serialization.dumps({"b": 1, "a": 2}) == '{"b":1,"a":2}'


def test_nested_structures():
    data = {"xs": [1, 2.5, None, True, False], "s": 'a"b'}
    text = serialization.dumps(data)
    assert json.loads(text) == data


def test_non_finite_rejected():
    for bad in (math.inf, -math.inf, math.nan):
        with pytest.raises(ValueError):
            serialization.dumps(bad)


def test_loads_roundtrip():
    data = {"rewards": [-2.0, 0.4661414248259509, 0.0]}
    assert serialization.loads(serialization.dumps(data)) == data


@given(st.floats(allow_nan=False, allow_infinity=False))
@settings(max_examples=300, deadline=None)
def test_floats_roundtrip_exactly(x):
    assert float(json.loads(serialization.dumps(x))) == x


@given(st.recursive(
    st.none() | st.booleans() | st.integers(min_value=-2**53, max_value=2**53)
    | st.floats(allow_nan=False, allow_infinity=False) | st.text(max_size=8),
    lambda inner: st.lists(inner, max_size=4)
    | st.dictionaries(st.text(max_size=4), inner, max_size=4),
    max_leaves=12))
@settings(max_examples=150, deadline=None)
def test_arbitrary_json_roundtrip(data):
    assert serialization.loads(serialization.dumps(data)) == data
