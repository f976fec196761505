from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ktriangular.corpus import gen_measuroid
from ktriangular.lattice import Regulator, Vec, d_converges
from ktriangular.records import (
    certificate_record,
    dumps,
    frac_str,
    parse_frac,
    parse_value,
    regulator_from_record,
    regulator_record,
    setfunction_from_record,
    setfunction_record,
    to_jsonable,
)
from ktriangular.setfun import SetFunction


@given(st.fractions(max_denominator=1000))
def test_frac_round_trip(x):
    assert parse_frac(frac_str(x)) == x


def test_frac_format():
    assert frac_str(2) == "2/1"
    assert frac_str(F(-3, 6)) == "-1/2"
    with pytest.raises(ValueError):
        parse_frac(0.5)
    with pytest.raises(ValueError):
        parse_frac(True)
    with pytest.raises(ValueError):
        parse_frac("x/2")
    assert parse_value(["1/2", "3"]) == Vec([F(1, 2), 3])


def test_to_jsonable_keeps_ints():
    assert to_jsonable({"n": 3, "x": F(1, 3), "v": Vec([1, 2])}) == {"n": 3, "x": "1/3", "v": ["1/1", "2/1"]}
    with pytest.raises(TypeError):
        to_jsonable(object())


def test_regulator_round_trip():
    reg = Regulator.harmonic(F(3, 2), 3, 4)
    assert regulator_from_record(regulator_record(reg)) == reg
    vreg = Regulator.from_rule(2, 2, lambda t, l: Vec([F(1, l), F(0)]))
    assert regulator_from_record(regulator_record(vreg)) == vreg


def test_setfunction_round_trip():
    m = gen_measuroid(4)
    assert setfunction_from_record(setfunction_record(m)) == m
    t = SetFunction(2, [F(0), F(1, 2), F(0), F(1)])
    rec = setfunction_record(t)
    assert rec["table"] == {"1": "1/2", "3": "1/1"}
    assert setfunction_from_record(rec) == t
    v = SetFunction(1, [Vec([0, 0]), Vec([1, 2])])
    assert setfunction_from_record(setfunction_record(v)) == v
    with pytest.raises(ValueError):
        setfunction_from_record({"atoms": 1, "table": {"5": "1/1"}})


def test_certificate_record_and_dumps_are_stable():
    cert = d_converges([F(2, 3)] * 3, 0, Regulator.harmonic(1, 2, 2))
    rec = certificate_record(cert)
    assert rec["verdict"] == "VIOLATED"
    assert rec["regulator"]["horizon"] == {"T": 2, "L": 2}
    assert dumps(rec) == dumps(certificate_record(cert))
