from fractions import Fraction

import pytest

from dimkit.classes import ReferenceFunction, gen_scale_counterexample, gen_thresholds
from dimkit.errors import InvalidParameter, InvalidWitness, ParseError
from dimkit.witness import ELUDER, STAR, THRESHOLD, WitnessSequence, verify_witness


def test_valid_and_invalid_eluder():
    t = gen_thresholds(4)
    ref = ReferenceFunction.col(4)
    good = WitnessSequence(ELUDER, ref, ((0, 0), (1, 1), (2, 2), (3, 3)))
    assert verify_witness(t, good)
    # f_0 already disagrees with the reference at x_1, so it cannot follow that point
    bad = WitnessSequence(ELUDER, ref, ((1, 1), (2, 0)))
    v = verify_witness(t, bad)
    assert not v and v.position == 1 and "disagrees" in v.violation


def test_star_needs_agreement_everywhere_else():
    t = gen_thresholds(4)
    ref = ReferenceFunction.col(4)
    assert not verify_witness(t, WitnessSequence(STAR, ref, ((0, 0), (1, 1))))
    assert verify_witness(t, WitnessSequence(STAR, ref, ((3, 3),)))


def test_threshold_needs_deviation_at_later_points():
    t = gen_thresholds(3)
    ref = ReferenceFunction.col(3)
    assert verify_witness(t, WitnessSequence(THRESHOLD, ref, ((0, 0), (1, 1), (2, 2))))
    assert not verify_witness(t, WitnessSequence(THRESHOLD, ref, ((2, 2), (0, 0))))


def test_scale_witness_on_counterexample():
    t = gen_scale_counterexample(3, Fraction(1, 2))
    ref = ReferenceFunction.constant(3, 0)
    w = WitnessSequence(ELUDER, ref, ((0, 0), (1, 1), (2, 2)), Fraction(1, 2))
    assert verify_witness(t, w)
    # at a scale above the diagonal deviation nothing deviates
    assert not verify_witness(t, WitnessSequence(ELUDER, ref, ((0, 0),), Fraction(3, 5)))


def test_out_of_range_entry():
    with pytest.raises(InvalidWitness):
        verify_witness(gen_thresholds(2), WitnessSequence(ELUDER, ReferenceFunction.col(0), ((5, 0),)))


def test_json_round_trip_and_errors():
    w = WitnessSequence(STAR, ReferenceFunction.of([0, Fraction(1, 3)]), ((1, 0),), Fraction(1, 8))
    assert WitnessSequence.from_json(w.to_json()) == w
    assert w.to_json()["scale"] == "0.125"
    with pytest.raises(ParseError):
        WitnessSequence.from_json({"kind": "eluder"})
    with pytest.raises(InvalidParameter):
        WitnessSequence("chain", ReferenceFunction.col(0))
    with pytest.raises(InvalidParameter):
        WitnessSequence(ELUDER, ReferenceFunction.col(0), (), -1)
