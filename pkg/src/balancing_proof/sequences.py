"""Exact balancing numbers B_n and Lucas-balancing numbers C_n.

Both satisfy ``u_n = 6 u_{n-1} - u_{n-2}``; B starts ``0, 1`` and C starts
``2, 6``.  Values are plain Python integers, cached in growable lists.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import List, Optional

import gmpy2

__all__ = [
    "SequenceTerm",
    "MembershipResult",
    "OracleError",
    "balancing",
    "lucas_balancing",
    "balancing_values",
    "is_balancing",
    "is_balancing_scan",
    "power_difference",
    "factorization_identity_check",
    "square_difference_oracle",
]


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class SequenceTerm:
    index: int
    value: int

    def __int__(self):
        return self.value


class _Cache:
    """Append-only list of sequence values; extension is serialized."""

    def __init__(self, u0, u1):
        self._values = [u0, u1]
        self._lock = threading.Lock()

    def get(self, n: int) -> int:
        values = self._values
        if n < len(values):
            return values[n]
        with self._lock:
            values = self._values
            while len(values) <= n:
                values.append(6 * values[-1] - values[-2])
            return values[n]

    def prefix(self, n: int) -> List[int]:
        self.get(n)
        return self._values[: n + 1]


_B = _Cache(0, 1)
_C = _Cache(2, 6)


def _check_index(n):
    if n < 0:
        raise ValueError("index must be nonnegative, got %d" % n)


def balancing(n: int) -> SequenceTerm:
    _check_index(n)
    return SequenceTerm(n, _B.get(n))


def lucas_balancing(n: int) -> SequenceTerm:
    _check_index(n)
    return SequenceTerm(n, _C.get(n))


def balancing_values(n: int) -> List[int]:
    """``[B_0, ..., B_n]``."""
    _check_index(n)
    return list(_B.prefix(n))


@dataclass(frozen=True)
class MembershipResult:
    is_member: bool
    index: Optional[int] = None

    def __bool__(self):
        return self.is_member


# log(alpha)/log(2), used only to guess the index before an exact check
_LOG2_ALPHA = 2.543106606327572


def _locate(N: int) -> int:
    # B_k ~ alpha^k / (4 sqrt 2), and 4 sqrt 2 = 2^2.5
    guess = max(1, int((N.bit_length() + 2.5) / _LOG2_ALPHA) - 1)
    k = guess
    while k > 1 and _B.get(k) > N:
        k -= 1
    while _B.get(k) < N:
        k += 1
    return k


def is_balancing(N: int) -> MembershipResult:
    """Test ``N = B_k`` for some k, via ``8N^2 + 1`` being a perfect square.

    The index is recovered from the cached sequence and cross-checked, so a
    square-test false positive would raise rather than be returned.
    """
    if N < 0:
        return MembershipResult(False)
    if N <= 1:
        return MembershipResult(True, N)
    if not gmpy2.is_square(8 * N * N + 1):
        return MembershipResult(False)
    k = _locate(N)
    if _B.get(k) != N:
        raise OracleError("square test accepted %d but no B_k matches" % N)
    return MembershipResult(True, k)


def is_balancing_scan(N: int) -> MembershipResult:
    """Reference membership test by walking the recurrence."""
    a, b, k = 0, 1, 0
    while a < N:
        a, b, k = b, 6 * b - a, k + 1
    return MembershipResult(a == N, k if a == N else None)


def power_difference(n: int, x: int) -> int:
    """``B_{n+1}^x - B_n^x`` exactly."""
    if n < 0 or x < 0:
        raise ValueError("n and x must be nonnegative")
    return _B.get(n + 1) ** x - _B.get(n) ** x


def factorization_identity_check(m: int) -> bool:
    """Check ``B_m + 1 = B_{(m+1)/2} * C_{(m-1)/2}`` for odd m."""
    if m < 1 or m % 2 == 0:
        raise ValueError("m must be an odd positive integer, got %d" % m)
    return _B.get(m) + 1 == _B.get((m + 1) // 2) * _C.get((m - 1) // 2)


def square_difference_oracle(n_max: int) -> int:
    """The offset c with ``B_{n+1}^2 - B_n^2 = B_{2n+c}`` for all n <= n_max.

    Each difference is located independently by membership; an error is
    raised unless every n yields the same c.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    offsets = set()
    for n in range(n_max + 1):
        d = power_difference(n, 2)
        hit = is_balancing_scan(d)
        if not hit.is_member:
            raise OracleError("B_%d^2 - B_%d^2 is not a balancing number" % (n + 1, n))
        offsets.add(hit.index - 2 * n)
    if len(offsets) != 1:
        raise OracleError("inconsistent offsets %s" % sorted(offsets))
    return offsets.pop()
