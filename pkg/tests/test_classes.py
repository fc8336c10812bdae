import json
from fractions import Fraction

import pytest
from hypothesis import given

from conftest import binary_tables, real_tables
from dimkit.classes import (FunctionClassTable, ReferenceFunction, gen_exp_class, gen_parities,
                            gen_scale_counterexample, gen_singletons, gen_thresholds,
                            parse_class, serialize_class)
from dimkit.errors import InvalidParameter, ParseError, ResourceLimit


def test_thresholds_layout():
    t = gen_thresholds(3)
    assert t.shape == (3, 4)
    assert t.values == ((1, -1, -1, -1), (1, 1, -1, -1), (1, 1, 1, -1))
    assert t.column(3) == (-1, -1, -1)


def test_singletons_layout():
    t = gen_singletons(3)
    assert t.values == ((1, -1, -1, -1), (-1, 1, -1, -1), (-1, -1, 1, -1))


def test_parities_layout():
    t = gen_parities(2)
    assert t.points == ("++", "+-", "-+", "--")
    assert t.functions == ("{}", "{1}", "{2}", "{1,2}")
    assert t.values[3] == (1, -1, -1, 1)


def test_parities_too_large():
    with pytest.raises(ResourceLimit):
        gen_parities(13)


def test_scale_counterexample_entries():
    t = gen_scale_counterexample(3, Fraction(1, 2))
    assert t.values[0] == (Fraction(101, 200), 0, 0)
    assert t.values[2] == (Fraction(99, 200), Fraction(99, 200), Fraction(101, 200))
    with pytest.raises(InvalidParameter):
        gen_scale_counterexample(3, Fraction(1, 2), diag_margin=1)


def test_exp_class_is_exact_and_increasing():
    t = gen_exp_class(3, 2)
    assert t.kind == "real"
    assert all(isinstance(v, Fraction) for row in t.values for v in row)
    assert abs(float(t.values[2][1]) - 2.718281828459045) < 1e-15
    assert t.values[0][0] < t.values[0][1]


@pytest.mark.parametrize("n", [0, -1, 2.5])
def test_generators_reject_bad_sizes(n):
    with pytest.raises(InvalidParameter):
        gen_thresholds(n)


def test_parse_rejects_ragged_with_location():
    doc = {"kind": "binary", "points": ["a", "b"], "functions": ["f", "g"],
           "values": [[1, -1], [1]]}
    with pytest.raises(ParseError) as err:
        parse_class(json.dumps(doc))
    assert err.value.row == 1


def test_parse_rejects_non_sign_binary_entry():
    doc = {"kind": "binary", "points": ["a"], "functions": ["f"], "values": [[0]]}
    with pytest.raises(ParseError):
        parse_class(json.dumps(doc))


def test_parse_missing_keys_and_bad_json():
    with pytest.raises(ParseError):
        parse_class('{"kind": "binary"}')
    with pytest.raises(ParseError):
        parse_class("{not json")


def test_duplicate_labels_rejected():
    with pytest.raises(InvalidParameter):
        FunctionClassTable(("a", "a"), ("f",), ((1,), (1,)))


def test_real_values_serialise_exactly():
    t = FunctionClassTable.from_matrix([[Fraction(1, 3), Fraction(1, 8), 2]], kind="real")
    doc = json.loads(serialize_class(t))
    assert doc["values"] == [["1/3", "0.125", "2"]]
    assert parse_class(serialize_class(t)) == t


def test_csv_round_trip():
    t = gen_scale_counterexample(3, Fraction(1, 2))
    assert parse_class(serialize_class(t, "csv"), "csv") == t


def test_reference_resolution():
    t = gen_thresholds(2)
    assert ReferenceFunction.col(2).resolve(t) == (-1, -1)
    assert ReferenceFunction.constant(2, 1).resolve(t) == (1, 1)
    with pytest.raises(InvalidParameter):
        ReferenceFunction.col(5).resolve(t)
    with pytest.raises(InvalidParameter):
        ReferenceFunction.constant(3, 1).resolve(t)
    with pytest.raises(InvalidParameter):
        ReferenceFunction.constant(2, 0).resolve(t)


def test_reference_json_round_trip():
    for ref in (ReferenceFunction.col(3), ReferenceFunction.of([Fraction(1, 3), 0, 1])):
        assert ReferenceFunction.from_json(json.loads(json.dumps(ref.to_json()))) == ref


@given(binary_tables())
def test_binary_round_trip_json_and_csv(table):
    assert parse_class(serialize_class(table)) == table
    assert parse_class(serialize_class(table, "csv"), "csv", kind="binary") == table


@given(real_tables())
def test_real_round_trip(table):
    assert parse_class(serialize_class(table)) == table
    assert parse_class(serialize_class(table, "csv"), "csv", kind="real") == table
