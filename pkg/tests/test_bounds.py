import math
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest

from balancing_proof.bounds import (
    ROUNDED_CAPS,
    BDInstance,
    MatveevParams,
    ReductionFailure,
    balancing_instance,
    baker_davenport_reduce,
    bound_chain,
    lambda1_coefficient,
    lambda2_coefficient,
    m_range,
    matveev_constant,
    reduction_epsilon,
    solve_two_a_log_a,
    t_range,
)
from balancing_proof.numerics import exact

getcontext().prec = 60
D_ALPHA = 3 + 2 * Decimal(2).sqrt()


def decimal_matveev(s, D, A, B):
    c = Decimal("1.4") * Decimal(30) ** (s + 3) * Decimal(s) ** Decimal("4.5") * D**2
    c *= (1 + Decimal(D).ln()) * (1 + Decimal(B).ln())
    for a in A:
        c *= a
    return c


def close(x, ref, rel=Decimal("1e-40")):
    mid = (x.lower_fraction() + x.upper_fraction()) / 2
    return abs(Decimal(mid.numerator) / Decimal(mid.denominator) - ref) <= rel * abs(ref)


def test_matveev_trivial():
    assert matveev_constant(MatveevParams(1, 1, [1], 1)).contains(1134000)


def test_matveev_coefficients_match_decimal():
    la, l32 = D_ALPHA.ln(), Decimal(32).ln()
    k1 = decimal_matveev(3, 2, [la, l32, 2 * la], 1)
    k2 = decimal_matveev(2, 2, [la, l32], 1)
    assert close(lambda1_coefficient(), k1)
    assert close(lambda2_coefficient(), k2)
    assert str(lambda1_coefficient()).startswith("20886296002836.79")
    assert str(lambda2_coefficient()).startswith("31850003569.09")
    assert lambda1_coefficient().upper_fraction() < ROUNDED_CAPS["lambda1_coefficient"]


def test_matveev_monotone():
    base = matveev_constant(MatveevParams(2, 2, [1, 2], 10))
    assert matveev_constant(MatveevParams(2, 2, [1, 2], 11)).lower_fraction() > base.upper_fraction()
    assert matveev_constant(MatveevParams(2, 2, [1, 3], 10)).lower_fraction() > base.upper_fraction()
    assert matveev_constant(MatveevParams(2, 3, [1, 2], 10)).lower_fraction() > base.upper_fraction()


@pytest.mark.parametrize(
    "kwargs",
    [dict(s=0, D=1, A=[], Bcap=1), dict(s=2, D=1, A=[1], Bcap=1),
     dict(s=1, D=1, A=[Fraction(1, 10)], Bcap=1), dict(s=1, D=1, A=[1], Bcap=0)],
)
def test_matveev_params_validated(kwargs):
    with pytest.raises(ValueError):
        MatveevParams(**kwargs)


def test_ranges():
    assert m_range(2, 3) == (1, 8)
    assert m_range(5, 2) == (7, 12)
    assert t_range(3) == (1, 3)
    assert t_range(60) == (52, 60)
    with pytest.raises(ValueError):
        t_range(2)
    with pytest.raises(ValueError):
        m_range(1, 3)


def test_two_a_log_a():
    assert str(solve_two_a_log_a(3)).startswith("6.5916737320")
    assert str(solve_two_a_log_a(100)).startswith("921.03403719")
    with pytest.raises(ValueError):
        solve_two_a_log_a(Fraction(29, 10))
    # the lemma: x / log x < A forces x < 2 A log A
    for a in (3, 10, 1000):
        cap = solve_two_a_log_a(a).upper_fraction()
        x = math.ceil(cap)
        assert x / math.log(x) >= a


def test_bound_chain_certifies():
    report = bound_chain()
    assert report.holds
    names = [link.name for link in report.links]
    assert names[0] == "lambda1_coefficient" and "case_l_equals_n" in names
    assert report.x_absolute.upper_fraction() < ROUNDED_CAPS["x_absolute"]
    assert report.l_vs_x.upper_fraction() < ROUNDED_CAPS["l_vs_x"]
    with pytest.raises(ValueError):
        bound_chain(n_min=20)


def test_reduction_n2():
    out = baker_davenport_reduce(balancing_instance(2), cf_budget=64)
    assert out.q_used == 302517854025929183
    assert out.k_bound == 25 and out.x_cap == 24
    assert out.epsilon.positive()
    assert out.q_used > 6 * 4 * 10**16


@pytest.mark.parametrize("n", [2, 10, 23, 37])
def test_epsilon_decreases_with_M(n):
    q = baker_davenport_reduce(balancing_instance(n), cf_budget=64).q_used
    small = reduction_epsilon(balancing_instance(n, 10**6), q, 200)
    big = reduction_epsilon(balancing_instance(n), q, 200)
    assert small.lower_fraction() > big.upper_fraction()


def test_mu_zero_cannot_reduce():
    # with mu = 0, ||mu q|| = 0 and eps is never positive
    inst = BDInstance(lambda d: exact(2, d).sqrt(), 0, 1, 2, 50)
    with pytest.raises(ReductionFailure):
        baker_davenport_reduce(inst, cf_budget=5)


def test_toy_reduction_is_sound():
    inst = BDInstance(lambda d: exact(2, d).sqrt(), Fraction(3, 10), 1, 2, 50)
    out = baker_davenport_reduce(inst)
    assert out.q_used == 408 and out.k_bound == 11
    getcontext().prec = 50
    r2 = Decimal(2).sqrt()
    largest = 0
    for m in range(1, 51):
        v = m * r2 + Decimal("0.3")
        v -= int(v)
        if v > 0:
            largest = max(largest, int(-v.ln() / Decimal(2).ln()))
    # every solution with k >= 1 has k < k_bound
    assert largest < out.k_bound


def test_instance_validation():
    with pytest.raises(ValueError):
        BDInstance(1, 0, 1, 2, 0)
    with pytest.raises(ValueError):
        BDInstance(lambda d: exact(2, d).sqrt(), 0, 1, 1, 5).at(60)
    with pytest.raises(ValueError):
        balancing_instance(0)
