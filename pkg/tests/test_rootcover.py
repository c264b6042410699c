import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geolab.errors import DomainError, InconsistencyError
from geolab.logchern import CurveFamily
from geolab.rootcover import (
    BranchSummary,
    SurfaceInvariants,
    chern_of_cover,
    dump_num,
    load_num,
    necessary_condition_report,
    node_type_table,
    strict_transform_selfint,
    surface_group,
)


def test_spin_example_values(spin_example):
    inv = spin_example.invariants
    assert inv.c1sq == 262306368 == 2**6 * 3**2 * 455393
    assert inv.c2 == 89853408 == 2**5 * 3**3 * 103997


@given(st.integers(2, 60), st.integers(-500, 500), st.integers(-500, 500))
def test_empty_census_is_multiplicative(m, c1, c2):
    b = BranchSummary(m, c1, c2, 0, 0, {})
    inv = chern_of_cover(b)
    assert (inv.c1sq, inv.c2) == (m * c1, m * c2)


def nonspin_closed_form(a, b, d, p):
    """c1^2 and c2 of the non-spin cover from the closed-form census polynomials alone."""
    n = 3 * a * p
    t21 = 6 * b**4 * p**4 + 36 * a**2 * b**2 * p**4 + 36 * d * a**2 * p**2 - 13 * d + 12 * d * b**2 * p**2 + d**2
    t22 = 12 * b**4 * p**4 + 72 * a**2 * b**2 * p**4 + 36 * d * a**2 * p**2 - 12 * d + 12 * d * b**2 * p**2 + d**2
    t2 = t21 + t22
    c1bar = Fraction(n) ** 4 + 2 * t2 - 10 * d - 48
    c2bar = Fraction(n) ** 4 / 3 + t2 - 4 * d - 12
    sum_sq = Fraction(-4 * n**4, 3) + 2 * d
    sum_g = -12 - 2 * d
    c_sum = Fraction(2 * p - 2, p) * t21 + Fraction(p * p - 2 * p + 2, p) * t22
    l_sum = (p - 1) * t21 + t22
    c1 = p * c1bar - 2 * (t2 + 2 * sum_g) + sum_sq / p - c_sum
    c2 = p * c2bar - (t2 + 2 * sum_g) + l_sum
    return c1, c2


def test_nonspin_matches_closed_form(nonspin_example):
    inv = nonspin_example.invariants
    assert (inv.c1sq, inv.c2) == nonspin_closed_form(1, 1, 2, 7)
    assert (inv.c1sq + inv.c2) % 12 == 0
    assert 1 < inv.slope < 3


def test_strict_transforms_are_not_minus_one_curves(nonspin_example):
    st_ = nonspin_example.strict_selfint
    for label in ("L_low", "L_high", "N_0", "N_inf"):
        assert st_[label] < -1
    assert strict_transform_selfint(nonspin_example.branch, "N_0") == st_["N_0"]


def test_strict_transform_of_isolated_curve():
    b = BranchSummary(5, 0, 0, 0, -1, {}, (CurveFamily("iso", 1, 0, 0, multiplicity=1),))
    assert strict_transform_selfint(b, "iso") == 0
    with pytest.raises(DomainError):
        strict_transform_selfint(b, "missing")


def test_node_types_in_examples(spin_example, nonspin_example):
    assert {r["q"] for r in node_type_table(spin_example.branch).values()} == {19, 11}
    assert {r["q"] for r in node_type_table(nonspin_example.branch).values()} == {6, 1}


def test_bad_census_multiplicity():
    with pytest.raises(DomainError):
        BranchSummary(20, 0, 0, 0, 0, {(3, 12): 1})
    with pytest.raises(DomainError):
        BranchSummary(1, 0, 0, 0, 0, {})


def test_non_integral_result_is_flagged():
    with pytest.raises(InconsistencyError):
        chern_of_cover(BranchSummary(5, 0, 0, 1, 0, {}))


def test_necessary_conditions():
    rep = necessary_condition_report(SurfaceInvariants(262306368, 89853408, spin=True))
    assert all(rep.values())
    assert SurfaceInvariants(262306368, 89853408).signature == 27533184
    assert 27533184 % 16 == 0
    assert not necessary_condition_report(SurfaceInvariants(1, 1))["Noether integrality: c1^2 + c2 = 0 (mod 12)"]
    assert not necessary_condition_report(SurfaceInvariants(4, 1))["BMY: c1^2 <= 3 c2"]
    assert "Rokhlin: signature = 0 (mod 16)" not in necessary_condition_report(SurfaceInvariants(1, 11))


def test_json_round_trips(nonspin_example):
    d = nonspin_example.branch.to_dict()
    assert BranchSummary.from_dict(json.loads(json.dumps(d))).to_dict() == d
    s = nonspin_example.invariants.to_dict()
    assert SurfaceInvariants.from_dict(json.loads(json.dumps(s))).to_dict() == s
    with pytest.raises(DomainError):
        BranchSummary.from_dict({"degree": 5})


def test_num_encoding():
    assert dump_num(Fraction(4, 2)) == 2 and dump_num(Fraction(-1, 3)) == "-1/3"
    assert load_num("-1/3") == Fraction(-1, 3) and load_num(7) == 7
    for bad in (0.5, True, "x"):
        with pytest.raises(DomainError):
            load_num(bad)
    assert surface_group(2) == "surface-group(genus=2)"
