import pytest

from fermatflats.arrangement import (FermatConfig, Flat, enumerate_flats, fermat_polynomial,
                                     hyperplanes_through, ideal_generators)
from fermatflats.containment import (ContainmentQuery, check_noncontainment,
                                     cone_intersection_report, els_hh_bound, proof_trace,
                                     symbolic_membership, uniqueness_scan, vanishing_order,
                                     verify_cone_intersection)
from fermatflats.fields import CyclotomicField, PrimeField
from fermatflats.ideals import Budget, Ideal, ideal_equality
from fermatflats.arrangement import cone_ideal_generators
from fermatflats.poly import PolyRing


def test_order_of_variable_on_coordinate_flat():
    R = PolyRing(3)
    assert vanishing_order(R.gen(0), Flat.coordinate(0, 1), 3) == 1
    assert vanishing_order(R.zero(), Flat.coordinate(0, 1), 3) == float("inf")


@pytest.mark.parametrize("completion", ["triangular", "alternate"])
def test_fermat_orders_23(completion):
    cfg = FermatConfig(2, 3)
    F = fermat_polynomial(cfg)
    assert vanishing_order(F, Flat.coordinate(1, 2), 3, completion=completion) == 3
    for fl in enumerate_flats(cfg):
        assert vanishing_order(F, fl, 3, completion=completion) == 3


def test_order_of_power_of_form():
    # (x0 - z x1)^4 (x1 - x2) vanishes to order 4 on the flat through both forms
    K = CyclotomicField(3)
    R = PolyRing(3, K)
    z = K.root_of_unity(1)
    x = R.gens()
    fl = Flat.triple(0, 1, 2, 1, 0, 3)
    f = (x[0] - x[1] * z) ** 4 * (x[1] - x[2])
    assert vanishing_order(f, fl, 3) == 5
    assert vanishing_order(f, fl, 3, completion="alternate") == 5
    assert vanishing_order(f, Flat.triple(0, 1, 2, 1, 1, 3), 3) == 4


@pytest.mark.parametrize("N, n", [(2, 3), (2, 4), (3, 3)])
def test_completions_agree(N, n):
    cfg = FermatConfig(N, n)
    F = fermat_polynomial(cfg)
    g = ideal_generators(cfg)[0] * ideal_generators(cfg)[-1]
    for fl in enumerate_flats(cfg):
        for f in (F, g):
            assert vanishing_order(f, fl, n) == vanishing_order(f, fl, n, completion="alternate")


@pytest.mark.parametrize("N, n", [(2, 3), (2, 5), (3, 3)])
def test_order_at_least_hyperplane_count(N, n):
    cfg = FermatConfig(N, n)
    F = fermat_polynomial(cfg)
    for fl in enumerate_flats(cfg):
        h = hyperplanes_through(fl, cfg)
        assert vanishing_order(F, fl, n) >= h >= 3


def test_symbolic_membership_examples():
    cfg = FermatConfig(2, 3)
    F = fermat_polynomial(cfg)
    res = symbolic_membership(F, cfg, 3)
    assert res.member
    assert {o for _, o in res.orders} == {3}
    assert not symbolic_membership(F, cfg, 4).member
    for g in ideal_generators(cfg):
        assert symbolic_membership(g, cfg, 1).member
        assert not symbolic_membership(g, cfg, 2).member


def test_symbolic_membership_monotone():
    cfg = FermatConfig(3, 3)
    F = fermat_polynomial(cfg)
    verdicts = [symbolic_membership(F, cfg, m).member for m in range(1, 6)]
    assert verdicts == sorted(verdicts, reverse=True)


def test_symbolic_membership_parallel():
    cfg = FermatConfig(2, 4)
    F = fermat_polynomial(cfg)
    a = symbolic_membership(F, cfg, 3)
    b = symbolic_membership(F, cfg, 3, jobs=2)
    assert a.orders == b.orders


def test_symbolic_membership_needs_homogeneous():
    cfg = FermatConfig(2, 3)
    R = cfg.ring()
    with pytest.raises(ValueError):
        symbolic_membership(R.gen(0) + 1, cfg, 1)


@pytest.mark.parametrize("m, r, expected", [(4, 2, True), (3, 2, False), (2, 1, True)])
def test_els_hh(m, r, expected):
    assert els_hh_bound(ContainmentQuery(FermatConfig(2, 3), m, r)) is expected


def test_query_validation():
    with pytest.raises(ValueError):
        ContainmentQuery(FermatConfig(2, 3), 0, 1)


def test_guaranteed_region_never_reports_noncontainment():
    for m, r in [(4, 2), (2, 1), (6, 3)]:
        rep = check_noncontainment(FermatConfig(2, 3), m=m, r=r)
        assert rep["overall"] == "CONTAINMENT_GUARANTEED"


@pytest.mark.parametrize("N, n", [(2, 3), (2, 4), (3, 3)])
def test_noncontainment_confirmed_with_cross_check(N, n):
    rep = check_noncontainment(FermatConfig(N, n), groebner_check=True)
    assert rep["overall"] == "CONFIRMED"
    assert rep["symbolic"]["verdict"] == "MEMBER"
    assert rep["ordinary"]["verdict"] == "ABSENT"
    assert rep["ordinary"]["cross_check"]["agrees"]
    assert set(rep) >= {"config", "symbolic", "ordinary", "overall", "timings"}


def test_noncontainment_prime_is_evidence():
    rep = check_noncontainment(FermatConfig(2, 3), field="prime:7,13")
    assert rep["overall"] == "EVIDENCE"
    assert "evidence" in rep["ordinary"]["status"]


def test_rational_over_budget_falls_back_to_primes():
    rep = check_noncontainment(FermatConfig(2, 3), budget=Budget(max_rational_cells=10))
    assert rep["overall"] == "EVIDENCE"
    assert len(rep["ordinary"]["per_prime"]) == 2
    assert all((int(pp["field"].split(":")[1]) - 1) % 3 == 0 for pp in rep["ordinary"]["per_prime"])


def test_budget_exhaustion_is_undecided():
    rep = check_noncontainment(FermatConfig(2, 3), budget=Budget(max_rational_cells=10, max_cells=10))
    assert rep["overall"] == "UNDECIDED"
    assert rep["symbolic"]["verdict"] == "MEMBER"


def test_report_deterministic_without_timings():
    a = check_noncontainment(FermatConfig(2, 3), timings=False)
    b = check_noncontainment(FermatConfig(2, 3), timings=False)
    assert a == b and "timings" not in a


@pytest.mark.parametrize("p", [7, 13])
def test_cone_intersection(p):
    assert verify_cone_intersection(FermatConfig(3, 3), PrimeField(p))


def test_single_cone_is_not_enough():
    cfg = FermatConfig(3, 3)
    ring = cfg.ring(PrimeField(7))
    cone = Ideal(ring, cone_ideal_generators(cfg, 0, ring))
    assert not ideal_equality(Ideal(ring, ideal_generators(cfg, ring)), cone)


def test_cone_report_shape():
    rep = cone_intersection_report(FermatConfig(3, 3))
    assert rep["field"] == "prime:7" and rep["equal"]
    assert rep["cone_generators"] == [3, 3, 3, 3]


# -- proof trace ----------------------------------------------------------------

def test_trace_even_23():
    tr = proof_trace(FermatConfig(2, 3))
    first, second = tr.steps
    assert first.monomial == [0, 6, 3] and first.coefficient == 1
    assert first.generator_A == [2]
    assert first.p_monomial == [0, 0, 1]
    assert second.coefficient == -1
    assert tr.contradiction and tr.passed


def test_trace_odd_33():
    tr = proof_trace(FermatConfig(3, 3))
    first, second = tr.steps
    assert first.monomial == [0, 9, 6, 3] and first.coefficient == -1
    assert second.coefficient == 1
    assert first.generator_A == [1, 3]
    assert first.p_monomial == [0, 1, 0, 1]
    assert tr.passed


def test_trace_even_43_monomial():
    tr = proof_trace(FermatConfig(4, 3))
    assert tr.steps[0].monomial == [0, 12, 9, 6, 3]
    assert tr.steps[0].coefficient == 1
    assert tr.literal_m_prime["representable"] is False


@pytest.mark.parametrize("N, n", [(2, 3), (2, 4), (2, 5), (3, 3), (3, 4), (4, 3), (5, 3)])
def test_trace_all_configs(N, n):
    tr = proof_trace(FermatConfig(N, n))
    assert tr.passed
    expected = (1, -1) if N % 2 == 0 else (-1, 1)
    assert tuple(s.coefficient for s in tr.steps) == expected
    assert tuple(s.h_coefficient for s in tr.steps) == expected
    assert all(s.square_coefficient == 1 for s in tr.steps)


@pytest.mark.parametrize("N", [2, 3])
def test_trace_uniqueness_scan(N):
    tr = proof_trace(FermatConfig(N, 3), scan=True)
    for s in tr.steps:
        assert s.uniqueness["unique"]
        assert len(s.uniqueness["contributions"]) == 1


def test_uniqueness_scan_detects_collisions():
    R = PolyRing(2)
    x, y = R.gens()
    scan = uniqueness_scan([x, y, x + y], (1, 1))
    assert not scan["unique"]


def test_trace_json():
    obj = proof_trace(FermatConfig(2, 3)).to_json()
    assert obj["passed"] and obj["contradiction"]
    assert obj["steps"][1]["coefficient"] == "-1"


def test_noncontainment_43_proved_over_q_with_raised_budget():
    rep = check_noncontainment(FermatConfig(4, 3), budget=Budget(max_rational_cells=40_000_000),
                               timings=False)
    assert rep["overall"] == "CONFIRMED"
    assert (rep["ordinary"]["rows"], rep["ordinary"]["columns"]) == (46376, 825)
