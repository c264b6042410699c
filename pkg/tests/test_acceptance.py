"""Acceptance suite. Run ``pytest tests/test_acceptance.py`` for one PASS/FAIL line per criterion."""
import time
from fractions import Fraction

import pytest

import test_families
import test_logchern
import test_numtheory
from conftest import census_grid
from geolab import hesse, numtheory
from geolab.families import (
    FOUR,
    arrangement_on_y,
    build_family,
    elliptic_arrangement,
    genus_base_change,
    node_census,
    poly_t2,
    poly_t21,
    poly_t22,
    target_slope,
)
from geolab.logchern import blow_up_class, log_chern_numbers
from geolab.numtheory import c_coeff, hj_length, resolve_cqs
from geolab.params import NONSPIN, SPIN, FamilyParams
from geolab.rootcover import necessary_condition_report

criterion = pytest.mark.criterion


def timed(fn, *args):
    start = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - start


@pytest.fixture(scope="module")
def generated():
    """Every instance the global suite inspects: criteria 1-2, the census grid and base changes."""
    out = [build_family(FamilyParams(SPIN, 1, 0, 1, 5)).invariants]
    out.append(build_family(FamilyParams(SPIN, 1, 0, 1, 100003)).invariants)
    for params in census_grid(SPIN) + census_grid(NONSPIN):
        rep = build_family(params)
        out.append(rep.invariants)
        if not params.spin:
            out.extend(genus_base_change(rep, q) for q in (1, 2, 3))
    return out


@criterion(1, "example reproduction, spin (1,0,1,5)")
def test_criterion_1_example():
    rep, dt = timed(build_family, FamilyParams(SPIN, 1, 0, 1, 5))
    assert rep.invariants.c1sq == 262306368 == 2**6 * 3**2 * 455393
    assert rep.invariants.c2 == 89853408 == 2**5 * 3**3 * 103997
    assert Fraction(29192, 10000) < rep.slope < Fraction(29193, 10000)
    assert dt < 1.0, dt


@criterion(2, "asymptotic example, spin (1,0,1,100003)")
def test_criterion_2_asymptotic(monkeypatch):
    def forbidden(*_):
        raise AssertionError("the O(m) Dedekind sum must not be used")

    monkeypatch.setattr(numtheory, "dedekind_sum_naive", forbidden)
    rep, dt = timed(build_family, FamilyParams(SPIN, 1, 0, 1, 100003))
    assert abs(rep.slope - 3) <= Fraction(2, 10**10)
    assert dt < 5.0, dt


@criterion(3, "closed-form kernel identities")
@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23])
def test_criterion_3_kernel(p):
    m = 4 * p
    assert c_coeff(4 * p - 1, m) == Fraction(4 * p - 1, 2 * p)
    assert c_coeff(2 * p + 1, m) == Fraction(2 * p * p + 1, 2 * p)
    assert hj_length(4 * p - 1, m) == 4 * p - 1
    assert hj_length(2 * p + 1, m) == 3
    assert c_coeff(p - 1, p) == Fraction(2 * p - 2, p)
    assert c_coeff(1, p) == Fraction(p * p - 2 * p + 2, p)
    assert hj_length(p - 1, p) == p - 1
    assert hj_length(1, p) == 1


@criterion(4, "log Chern closed forms")
@pytest.mark.parametrize("n", [6, 15, 60])
def test_criterion_4_log_chern(n):
    n2, n4 = Fraction(n * n), Fraction(n) ** 4
    h = elliptic_arrangement(n)
    z = blow_up_class(h, FOUR, 4)
    assert log_chern_numbers(h) == (Fraction(8, 3) * n4 - 12 * n2 + 9, n4 - 4 * n2 + 18)
    assert log_chern_numbers(z) == (n4 + 8 * n2 - 36, n2 * (n2 + 12) / 3)


@criterion(5, "node census vs polynomials")
@pytest.mark.parametrize("params", census_grid(SPIN) + census_grid(NONSPIN), ids=str)
def test_criterion_5_census(params):
    c = node_census(params)
    p = params.p
    q1, q2 = (4 * p - 1, 2 * p + 1) if params.spin else (p - 1, 1)
    assert (c.total, c.count_of_type(q1), c.count_of_type(q2)) == (poly_t2(params), poly_t21(params), poly_t22(params))
    assert c.count_of_type(q1) + c.count_of_type(q2) == c.total


@criterion(6, "lattice identity suite")
def test_criterion_6_lattice():
    L, M, N, K = (hesse.named_class(x) for x in ("L", "M", "N", "K_H"))
    F = {i: hesse.named_class("F_i", i) for i in hesse.DIRECTIONS}
    assert hesse.check_equivalence(M + 3 * N, 9 * L)
    assert all(F[i].dot(F[i]) == 0 for i in F)
    assert all(F[i].dot(F[j]) == 3 for i in F for j in F if i != j)
    assert K.dot(K) == -3
    for params in census_grid(SPIN) + census_grid(NONSPIN):
        assert hesse.check_root_divisibility(params), params
        if params.spin:
            assert hesse.check_spin_parity(params), params


@criterion(7, "global invariant suite")
def test_criterion_7_global(generated):
    assert len(generated) > 50
    for inv in generated:
        c1, c2 = inv.c1sq, inv.c2
        assert c1 > 0 and c2 > 0
        assert (c1 + c2) % 12 == 0
        assert c1 < 3 * c2
        assert 5 * c1 >= c2 - 36
        assert (c1 - 2 * c2) % 3 == 0
        if inv.spin:
            assert ((c1 - 2 * c2) // 3) % 16 == 0
        assert all(necessary_condition_report(inv).values())


@criterion(8, "convergence toward the limit slope")
@pytest.mark.parametrize("variant,d", [(SPIN, 1), (NONSPIN, 2)])
def test_criterion_8_convergence(variant, d):
    gaps = [build_family(FamilyParams(variant, 1, 1, d, p)).slope_gap for p in (101, 211, 401, 809, 1601)]
    assert all(a > b for a, b in zip(gaps, gaps[1:])), gaps
    assert gaps[-1] < Fraction(1, 100)


@criterion(9, "target solver")
def test_criterion_9_target():
    eps = Fraction(1, 1000)
    targets = [(NONSPIN, Fraction(r)) for r in ("2", "2.5", "71/26", "2.9")]
    targets += [(SPIN, Fraction(r)) for r in ("2.5", "2.9")]
    start = time.perf_counter()
    for variant, r in targets:
        res = target_slope(variant, r, eps)
        assert abs(build_family(res.params).slope - r) < eps
    assert time.perf_counter() - start < 60


@criterion(10, "singularity resolution patterns")
@pytest.mark.parametrize("p", [5, 7, 11])
def test_criterion_10_resolution(p):
    r = resolve_cqs(4 * p, 4 * p - 1)
    assert r.chain_self_intersections == (-2,) * (4 * p - 1)
    assert all(x == 0 for x in r.discrepancies)
    r = resolve_cqs(4 * p, 2 * p + 1)
    assert r.chain_self_intersections == (-2, -(p + 1), -2)
    assert r.discrepancies == (Fraction(-(p - 1), 2 * p), Fraction(-(p - 1), p), Fraction(-(p - 1), 2 * p))


@criterion(11, "property tests with fixed seeds")
@pytest.mark.parametrize(
    "prop",
    [
        test_numtheory.test_reciprocity_seeded,
        test_numtheory.test_antisymmetry,
        test_numtheory.test_inverse_invariance,
        test_numtheory.test_hj_reconstruction,
        test_numtheory.test_naive_matches_fast,
        test_logchern.test_generated_tables_double_count,
        test_logchern.test_blow_up_without_exceptionals,
        test_logchern.test_blow_up_with_exceptionals_keeps_log_invariants,
        test_families.test_limit_slope_matches_oracle_and_is_monotone,
    ],
    ids=lambda f: f.__name__,
)
def test_criterion_11_properties(prop):
    prop()


@criterion(11, "property tests with fixed seeds")
def test_criterion_11_census_double_counting():
    for params in census_grid(SPIN)[:6] + census_grid(NONSPIN)[:6]:
        arrangement_on_y(params).check_double_counting()
