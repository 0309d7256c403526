import math

import pytest
from hypothesis import given, settings, strategies as st

from balancing_proof.sequences import (
    OracleError,
    balancing,
    balancing_values,
    factorization_identity_check,
    is_balancing,
    is_balancing_scan,
    lucas_balancing,
    power_difference,
    square_difference_oracle,
)

B_FIRST = [0, 1, 6, 35, 204, 1189, 6930, 40391, 235416, 1372105, 7997214]
C_FIRST = [2, 6, 34, 198, 1154, 6726, 39202]


def brute_balancing(N):
    """N balances 1..N-1 against N+1..N+r: 1 + .. + (N-1) = (N+1) + .. + (N+r)."""
    left = N * (N - 1) // 2
    # r*N + r(r+1)/2 = left  <=>  r^2 + (2N+1) r - 2*left = 0
    disc = (2 * N + 1) ** 2 + 8 * left
    root = math.isqrt(disc)
    return root * root == disc and (root - 2 * N - 1) % 2 == 0


def test_first_terms():
    assert [balancing(n).value for n in range(11)] == B_FIRST
    assert [lucas_balancing(n).value for n in range(7)] == C_FIRST
    assert balancing_values(10) == B_FIRST
    assert balancing(10).value == 7997214
    assert int(balancing(3)) == 35


def test_negative_index():
    with pytest.raises(ValueError):
        balancing(-1)
    with pytest.raises(ValueError):
        lucas_balancing(-2)


def test_definition_by_brute_force():
    found = [N for N in range(2, 50000) if brute_balancing(N)]
    assert found == B_FIRST[2:8]


@pytest.mark.parametrize("n", [1, 5, 40, 300, 1000])
def test_pell_identity(n):
    b, c = balancing(n).value, lucas_balancing(n).value
    assert c * c - 32 * b * b == 4
    assert math.isqrt(8 * b * b + 1) == c // 2


def test_doubling_and_growth():
    for n in range(1, 200):
        b, c = balancing(n).value, lucas_balancing(n).value
        assert balancing(2 * n).value == b * c
        nxt = balancing(n + 1).value
        assert 5 * nxt > 29 * b
        assert nxt < 6 * b or n == 1


def test_membership_examples():
    assert is_balancing(7997214) == is_balancing_scan(7997214)
    assert is_balancing(7997214).index == 10
    assert not is_balancing(42659)
    assert not is_balancing(-6)
    assert is_balancing(0).index == 0 and is_balancing(1).index == 1
    big = balancing(777).value
    assert is_balancing(big).index == 777
    assert not is_balancing(big + 1)


def test_membership_agrees_with_scan():
    for N in range(0, 3000):
        assert is_balancing(N) == is_balancing_scan(N)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=2, max_value=2000), st.integers(min_value=-3, max_value=3))
def test_membership_near_sequence(k, delta):
    N = balancing(k).value + delta
    got = is_balancing(N)
    assert got.is_member == (delta == 0)
    if delta == 0:
        assert got.index == k


def test_power_difference():
    assert power_difference(2, 3) == 42659
    assert power_difference(1, 2) == 35
    assert power_difference(0, 5) == 1
    with pytest.raises(ValueError):
        power_difference(-1, 2)


@pytest.mark.parametrize("m", [1, 3, 5, 7, 99, 199])
def test_odd_factorization(m):
    assert factorization_identity_check(m)


@pytest.mark.parametrize("m", [0, 2, 10])
def test_odd_factorization_rejects_even(m):
    with pytest.raises(ValueError):
        factorization_identity_check(m)


def test_square_difference_offset():
    # B_{n+1}^2 - B_n^2 lands on index 2n+1
    assert square_difference_oracle(40) == 1
    for n in range(30):
        assert power_difference(n, 2) == balancing(2 * n + 1).value
    with pytest.raises(ValueError):
        square_difference_oracle(1)


def test_oracle_error_is_runtime_error():
    assert issubclass(OracleError, RuntimeError)
