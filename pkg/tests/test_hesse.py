from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geolab import hesse
from geolab.errors import DomainError
from geolab.params import DIRECTIONS, NONSPIN, SPIN, FamilyParams

from conftest import census_grid


def f7_dual_hesse():
    """Lines (x^3 - y^3)(y^3 - z^3)(z^3 - x^3) = 0 over F_7, with 2 a cube root of unity."""
    p, w = 7, 2
    assert w ** 3 % p == 1 and w != 1
    lines = []
    for a in range(3):
        c = w ** a % p
        lines += [(1, -c % p, 0), (0, 1, -c % p), (-c % p, 0, 1)]

    def meet(u, v):
        x = (u[1] * v[2] - u[2] * v[1]) % p
        y = (u[2] * v[0] - u[0] * v[2]) % p
        z = (u[0] * v[1] - u[1] * v[0]) % p
        lead = next(t for t in (x, y, z) if t)
        inv = pow(lead, -1, p)
        return (x * inv % p, y * inv % p, z * inv % p)

    points = sorted({meet(u, v) for u, v in combinations(lines, 2)})
    on = lambda ln, P: sum(a * b for a, b in zip(ln, P)) % p == 0
    return [[int(on(ln, P)) for P in points] for ln in lines]


def profile(incidence):
    rows = sorted(sum(r) for r in incidence)
    cols = sorted(sum(col) for col in zip(*incidence))
    pairs = sorted(sum(a * b for a, b in zip(r, s)) for r, s in combinations(incidence, 2))
    return rows, cols, pairs


def test_incidence_matches_geometric_model():
    ours = [list(r) for r in hesse.build_incidence().incidence]
    model = f7_dual_hesse()
    assert len(model) == 9 and len(model[0]) == 12
    assert profile(ours) == profile(model)
    rows, cols, pairs = profile(ours)
    assert set(rows) == {4} and set(cols) == {3} and set(pairs) == {1}


def test_direction_classes_are_parallel_classes():
    inc = hesse.build_incidence()
    for i, pts in inc.direction_classes.items():
        assert len(pts) == 3
        # every line passes through exactly one point of each class
        for ell in range(9):
            assert sum(inc.incidence[ell][P] for P in pts) == 1
        # the three lines through one point of the class partition the nine lines
        fibres = inc.fiber_partition[i]
        assert sorted(ell for tri in fibres for ell in tri) == list(range(9))
    for P in range(12):
        assert P in inc.direction_classes[inc.direction_of(P)]


def test_intersection_examples():
    F = {i: hesse.named_class("F_i", i) for i in DIRECTIONS}
    for i, j in combinations(DIRECTIONS, 2):
        assert F[i].dot(F[j]) == 3
    for i in DIRECTIONS:
        assert F[i].dot(F[i]) == 0
    K = hesse.named_class("K_H")
    assert K.dot(K) == -3


def test_equivalence_examples():
    L, M, N = (hesse.named_class(x) for x in ("L", "M", "N"))
    assert hesse.check_equivalence(M + 3 * N, 9 * L)
    assert not hesse.check_equivalence(L, M)
    for n in (6, 15, 60):
        for i in DIRECTIONS:
            lhs = 3 * hesse.named_class("Eps_i", i, n=n) + hesse.named_class("M", n=n) + 3 * hesse.named_class("N_i", i, n=n)
            assert hesse.check_equivalence(lhs, (n * n) * hesse.named_class("F_i", i, n=n))


def test_line_transform_is_rational_minus_one_curve():
    K = hesse.named_class("K_H")
    for ell in range(9):
        c = hesse.named_class("line", ell)
        assert c.dot(c) == -3  # 1 - 4
        assert c.dot(c) + c.dot(K) == -2  # genus 0


def test_all_hesse_identities():
    report = hesse.hesse_identities()
    assert report and all(report.values()), report


def test_context_rules():
    E = hesse.named_class("E")
    with pytest.raises(DomainError):
        E.dot(E)
    assert E.with_context(6).dot(E) == -(33 * 27 // 3)
    with pytest.raises(DomainError):
        hesse.named_class("E", n=6) + hesse.named_class("E", n=9)
    with pytest.raises(DomainError):
        hesse.named_class("Eps_i", "0")
    with pytest.raises(DomainError):
        hesse.named_class("F_i", "north")
    with pytest.raises(DomainError):
        hesse.named_class("Q")
    assert hesse.zero_class().describe() == "0"


@st.composite
def classes(draw):
    return hesse.DivClass(tuple(draw(st.integers(-20, 20)) for _ in range(hesse.RANK)), 6)


@given(classes(), classes(), classes(), st.integers(-9, 9))
def test_pairing_is_symmetric_bilinear(a, b, c, k):
    assert a.dot(b) == b.dot(a)
    assert (a + b).dot(c) == a.dot(c) + b.dot(c)
    assert (k * a).dot(b) == k * a.dot(b)
    assert (a - a).is_even()


# -- root divisibility and spin parity ------------------------------------


def test_divisibility_examples():
    assert hesse.check_root_divisibility(FamilyParams(SPIN, 1, 0, 1, 5))
    assert hesse.check_root_divisibility(FamilyParams(NONSPIN, 1, 1, 2, 7))


def test_perturbed_coefficient_breaks_divisibility():
    params = FamilyParams(SPIN, 1, 0, 1, 5)
    a = dict(params.a)
    a["inf"] = 2 * params.p
    assert not hesse.check_root_divisibility(params, a=a)
    with pytest.raises(DomainError):
        hesse.check_root_divisibility(params, b=[1])


@pytest.mark.parametrize("params", census_grid(SPIN) + census_grid(NONSPIN), ids=str)
def test_divisibility_on_grid(params):
    report = hesse.root_divisibility_report(params)
    assert all(report.values()), report


def test_spin_parity_examples():
    assert hesse.check_spin_parity(FamilyParams(SPIN, 1, 0, 1, 5))
    assert hesse.check_spin_parity(FamilyParams(SPIN, 2, 3, 4, 7))
    with pytest.raises(DomainError):
        hesse.check_spin_parity(FamilyParams(NONSPIN, 1, 1, 2, 7))


def test_substituting_m_is_essential():
    raw, raw_even = hesse.symbolic_parity(substitute_m=False)
    sub, sub_even = hesse.symbolic_parity(substitute_m=True)
    assert raw == (-3, 1, 1, 1) and not raw_even
    assert sub == (6, -2, -2, 0) and sub_even
    # the raw class itself, with M the nine line transforms, has odd entries
    M = hesse.named_class("M")
    assert not M.is_even()


@pytest.mark.parametrize("params", census_grid(SPIN), ids=str)
def test_spin_parity_on_grid(params):
    assert hesse.check_spin_parity(params)


def test_lattice_report_all_pass(spin_example):
    report = hesse.lattice_report(spin_example.params)
    assert all(report.values())
