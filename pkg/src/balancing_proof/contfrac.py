"""Certified continued fractions of interval-enclosed reals.

A partial quotient is emitted only when every real in the enclosure has it.
The two endpoints of an :class:`HPReal` are exact dyadic rationals, so we run
the Euclidean algorithm on both and keep the common prefix: the reals sharing
a given prefix form an interval, so anything between the endpoints shares it
too.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, List, Sequence, Tuple, Union

from .numerics import DEFAULT_POLICY, HPReal, PrecisionPolicy

__all__ = [
    "CFExpansion",
    "Convergent",
    "InsufficientExpansionError",
    "euclid_quotients",
    "certified_quotients",
    "expand",
    "convergents",
    "first_convergent_above",
    "legendre_audit",
    "LegendreAudit",
]

RealSource = Union[HPReal, Callable[[int], HPReal]]


class InsufficientExpansionError(LookupError):
    pass


@dataclass(frozen=True)
class CFExpansion:
    quotients: Tuple[int, ...]
    certified: bool = True
    digits: int = 0
    requested: int = 0
    terminated: bool = False

    @property
    def shortfall(self) -> int:
        """How many requested quotients could not be certified."""
        if self.terminated:
            return 0
        return max(0, self.requested - len(self.quotients))

    def __len__(self):
        return len(self.quotients)

    def __getitem__(self, k):
        return self.quotients[k]


@dataclass(frozen=True)
class Convergent:
    k: int
    p: int
    q: int

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


def euclid_quotients(r: Fraction) -> Iterator[int]:
    """Partial quotients of a rational, by the Euclidean algorithm."""
    p, q = r.numerator, r.denominator
    while q:
        a, rem = divmod(p, q)
        yield a
        p, q = q, rem


def certified_quotients(x: HPReal) -> Tuple[List[int], bool]:
    """Quotients shared by every real in ``x``, and whether ``x`` is an exact
    rational whose expansion terminated."""
    if x.rational is not None:
        return list(euclid_quotients(x.rational)), True
    lo, hi = x.lower_fraction(), x.upper_fraction()
    out = []
    for a, b in zip(euclid_quotients(lo), euclid_quotients(hi)):
        if a != b:
            break
        out.append(a)
    return out, False


def expand(
    x: RealSource, count: int, policy: PrecisionPolicy = DEFAULT_POLICY
) -> CFExpansion:
    """At least ``count`` certified partial quotients of ``x`` when possible.

    ``x`` is an :class:`HPReal` or a function ``digits -> HPReal``; only the
    latter can be re-evaluated at higher precision.  The full certified
    prefix at the final precision is returned.  If precision runs out first,
    the shorter certified prefix comes back with a nonzero ``shortfall`` and
    a warning is issued.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if isinstance(x, HPReal):
        ladder = [x.digits]
        build = lambda _d, _x=x: _x  # noqa: E731
    else:
        ladder = list(policy.ladder())
        build = x
    quotients, terminated, digits = [], False, ladder[0]
    for digits in ladder:
        quotients, terminated = certified_quotients(build(digits))
        if terminated or len(quotients) >= count:
            break
    cf = CFExpansion(tuple(quotients), True, digits, count, terminated)
    if cf.shortfall:
        warnings.warn(
            "only %d of %d partial quotients certified at %d digits"
            % (len(quotients), count, digits),
            RuntimeWarning,
            stacklevel=2,
        )
    return cf


def convergents(cf: Union[CFExpansion, Sequence[int]]) -> List[Convergent]:
    quotients = cf.quotients if isinstance(cf, CFExpansion) else cf
    out = []
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    for k, a in enumerate(quotients):
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        out.append(Convergent(k, p, q))
    return out


def first_convergent_above(cf: CFExpansion, threshold: int) -> Convergent:
    for c in convergents(cf):
        if c.q > threshold:
            return c
    raise InsufficientExpansionError(
        "no certified convergent with q > %d among %d quotients" % (threshold, len(cf))
    )


@dataclass(frozen=True)
class LegendreAudit:
    """Where the convergent denominators pass a bound, and how big the
    partial quotients get before that point.

    ``a_max`` is the maximum of ``a_0 .. a_{k_star-1}``.  The gap estimate
    ``|x - p_k/q_k| > 1/((a_{k+1} + 2) q_k^2)`` for ``k < k_star`` actually
    involves ``a_1 .. a_{k_star}``; that maximum is ``a_max_next``.
    """

    k_star: int
    a_max: int
    a_max_next: int
    q_kstar: int
    x_bound: int


def legendre_audit(cf: CFExpansion, x_bound: int) -> LegendreAudit:
    c = first_convergent_above(cf, x_bound)
    k = c.k
    a_max = max(cf.quotients[:k]) if k else cf.quotients[0]
    a_max_next = max(cf.quotients[1 : k + 1]) if k else cf.quotients[0]
    return LegendreAudit(k, a_max, a_max_next, c.q, x_bound)
