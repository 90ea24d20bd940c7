from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from criteria import (
    BoundaryCondition,
    DomainMeta,
    System,
    VerdictLevel,
    constant_lambda_verdict,
    curl_criterion_verdict,
    curl_to_gradient,
    euler_gradient_verdict,
    nse_gradient_verdict,
    regularity_class,
    required_time_exponent_euler,
    required_time_exponent_nse,
)
from exceptions import ExponentOutOfRange, TopologyObstruction
from exponents import INF, BochnerSpec, Q, embeds

space = st.fractions(min_value=Fraction(151, 100), max_value=40, max_denominator=100).map(Q)


def test_levels_are_ordered():
    assert (VerdictLevel.INCONCLUSIVE < VerdictLevel.ENERGY_EQUALITY
            < VerdictLevel.STRONG_SOLUTION < VerdictLevel.CLASSICAL_SOLUTION)
    assert VerdictLevel.STRONG_SOLUTION.label == "StrongSolution"


@pytest.mark.parametrize("p, q, level", [
    (3, Q(9, 5), VerdictLevel.ENERGY_EQUALITY),
    (Q(5, 2), 2, VerdictLevel.ENERGY_EQUALITY),
    (2, Q(9, 5), VerdictLevel.INCONCLUSIVE),
    (100, Q(17, 10), VerdictLevel.INCONCLUSIVE),
    (1, INF, VerdictLevel.ENERGY_EQUALITY),
])
def test_euler_gradient(p, q, level):
    verdict = euler_gradient_verdict(BochnerSpec.of(p, q))
    assert verdict.level == level
    assert verdict.citation == "Thm1.1"


def test_euler_gradient_out_of_range():
    with pytest.raises(ExponentOutOfRange):
        euler_gradient_verdict(BochnerSpec.of(10, Q(6, 5)))


@pytest.mark.parametrize("p, q, level, citation", [
    (8, Q(8, 5), VerdictLevel.ENERGY_EQUALITY, "Thm1.5(i)"),
    (2, 2, VerdictLevel.INCONCLUSIVE, "Thm1.5(i)"),
    (2, 6, VerdictLevel.STRONG_SOLUTION, "scaling-nabla"),
    (3, Q(9, 5), VerdictLevel.ENERGY_EQUALITY, "Thm1.5(ii)"),
])
def test_nse_gradient(p, q, level, citation):
    verdict = nse_gradient_verdict(BochnerSpec.of(p, q))
    assert verdict.level == level
    assert verdict.citation == citation


def test_nse_gradient_out_of_range():
    with pytest.raises(ExponentOutOfRange):
        nse_gradient_verdict(BochnerSpec.of(1, 1))
    with pytest.raises(ExponentOutOfRange):
        nse_gradient_verdict(BochnerSpec.of(50, Q(3, 2)))


def test_nse_branches_meet_at_nine_fifths():
    q = Q(9, 5)
    assert required_time_exponent_nse(q) == 3
    assert required_time_exponent_nse(q - Q(1, 10 ** 9)) > 3
    assert required_time_exponent_euler(q) == 3


def test_required_exponent_at_infinity():
    assert required_time_exponent_euler(INF) == 1
    assert required_time_exponent_nse(INF) == 1


@given(space, st.integers(min_value=1, max_value=12))
def test_nse_verdict_monotone_in_time_exponent(q, p):
    lower = nse_gradient_verdict(BochnerSpec.of(p, q)).level
    higher = nse_gradient_verdict(BochnerSpec.of(p + 1, q)).level
    assert higher >= lower


@given(space)
def test_nse_required_exponent_nonincreasing(q):
    assert required_time_exponent_nse(q + Q(1, 7)) <= required_time_exponent_nse(q)


time = st.one_of(st.integers(min_value=1, max_value=40).map(Q), st.just(INF))
space_or_inf = st.one_of(space, st.just(INF))


@pytest.mark.parametrize("classify", [euler_gradient_verdict, nse_gradient_verdict])
@given(p1=time, p2=time, q1=space_or_inf, q2=space_or_inf)
def test_verdict_level_monotone_under_embedding(classify, p1, p2, q1, q2):
    stronger = BochnerSpec(max(p1, p2), max(q1, q2))
    weaker = BochnerSpec(min(p1, p2), min(q1, q2))
    assert embeds(stronger, weaker)
    assert classify(stronger).level >= classify(weaker).level


@pytest.mark.parametrize("p, q, regular", [
    (2, 3, True),
    (1, INF, True),
    (2, 6, True),
    (2, 2, False),
    (INF, Q(3, 2), False),
])
def test_regularity_class(p, q, regular):
    assert regularity_class(BochnerSpec.of(p, q)) == regular


def test_curl_to_gradient_returns_class_unchanged():
    s = BochnerSpec.of(3, Q(9, 5))
    assert curl_to_gradient(s, DomainMeta(True)) is s
    assert curl_to_gradient(s, DomainMeta(False, BoundaryCondition.NO_SLIP)) is s
    with pytest.raises(TopologyObstruction):
        curl_to_gradient(s, DomainMeta(False))


def test_curl_transfer_on_simply_connected_domain():
    meta = DomainMeta(betti_zero=True, boundary_condition=BoundaryCondition.SLIP)
    verdict = curl_criterion_verdict(BochnerSpec.of(3, Q(9, 5)), meta, System.EULER)
    assert verdict.level == VerdictLevel.ENERGY_EQUALITY
    assert verdict.citation == "Cor1.2"
    assert verdict.detail("gradient_citation") == "Thm1.1"


def test_curl_transfer_nse():
    meta = DomainMeta(betti_zero=True)
    verdict = curl_criterion_verdict(BochnerSpec.of(8, Q(8, 5)), meta, System.NSE)
    assert verdict.level == VerdictLevel.ENERGY_EQUALITY
    assert verdict.citation == "Rem-Thm1.5"


def test_curl_transfer_blocked_by_topology():
    meta = DomainMeta(betti_zero=False, boundary_condition=BoundaryCondition.SLIP)
    with pytest.raises(TopologyObstruction):
        curl_criterion_verdict(BochnerSpec.of(3, Q(9, 5)), meta, System.EULER)


def test_no_slip_ignores_topology():
    meta = DomainMeta(betti_zero=False, boundary_condition=BoundaryCondition.NO_SLIP)
    verdict = curl_criterion_verdict(BochnerSpec.of(3, Q(9, 5)), meta, System.EULER)
    assert verdict.level == VerdictLevel.ENERGY_EQUALITY


def test_constant_lambda():
    assert constant_lambda_verdict(System.EULER).level == VerdictLevel.CLASSICAL_SOLUTION
    assert constant_lambda_verdict(System.NSE).level == VerdictLevel.STRONG_SOLUTION
    assert constant_lambda_verdict(System.NSE).citation == "const-lambda"
