"""Error-tracked real arithmetic at configurable decimal precision.

An :class:`HPReal` is a closed interval ``[lo, hi]`` with outward-rounded
binary endpoints, built on mpmath's low-level interval kernels.  Every
operation takes an explicit working precision, so there is no global context
and values can be shared freely between threads.

The public view of a value is ``approx`` (the interval midpoint) and ``err``
(the half-width), so the true value always lies in ``[approx - err,
approx + err]``.
"""

from __future__ import annotations

import enum
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Tuple, Union

import mpmath
from mpmath.libmp import (
    fnan,
    from_int,
    from_rational,
    mpf_add,
    mpf_ge,
    mpf_gt,
    mpf_le,
    mpf_lt,
    mpf_shift,
    mpf_sub,
    round_ceiling,
    round_floor,
    to_rational,
)
from mpmath.libmp import libmpi

__all__ = [
    "HPReal",
    "Ordering3",
    "PrecisionPolicy",
    "PrecisionError",
    "EscalationError",
    "DomainError",
    "CONSTANTS",
    "constant",
    "exact",
    "arith",
    "compare",
    "decide_with_escalation",
    "nearest_int_distance",
]

LOG2_10 = 3.3219280948873626
GUARD_BITS = 16

Number = Union[int, Fraction, str]


class PrecisionError(ArithmeticError):
    """A decision could not be made at the current working precision."""


class EscalationError(PrecisionError):
    """A decision stayed inconclusive up to the policy's maximum precision."""


class DomainError(ValueError):
    """Operand interval lies (partly) outside the domain of an operation."""


def _bits(digits: int) -> int:
    return int(math.ceil(digits * LOG2_10)) + GUARD_BITS


def _mpf(raw) -> mpmath.mpf:
    # make_mpf keeps every bit; mpmath.mpf(raw) would round to the global context
    return mpmath.mp.make_mpf(raw)


def _raw_to_fraction(raw) -> Fraction:
    p, q = to_rational(raw)
    return Fraction(int(p), int(q))


@dataclass(frozen=True, eq=False)
class HPReal:
    """Closed real interval ``[lo, hi]`` tagged with a working precision.

    ``lo`` and ``hi`` are raw mpmath tuples; use :func:`exact`,
    :func:`constant` or arithmetic to build values rather than constructing
    them by hand.  ``rational`` is set when the value is known exactly as a
    fraction; field operations between exact values keep it.
    """

    lo: tuple
    hi: tuple
    digits: int
    rational: Optional[Fraction] = None

    def __post_init__(self):
        if self.lo == fnan or self.hi == fnan or mpf_gt(self.lo, self.hi):
            raise DomainError("invalid interval endpoints")

    # -- views ---------------------------------------------------------
    @property
    def prec(self) -> int:
        return _bits(self.digits)

    @property
    def approx(self) -> mpmath.mpf:
        return _mpf(mpf_shift(mpf_add(self.lo, self.hi), -1))

    @property
    def err(self) -> mpmath.mpf:
        return _mpf(mpf_shift(mpf_sub(self.hi, self.lo), -1))

    @property
    def lower(self) -> mpmath.mpf:
        return _mpf(self.lo)

    @property
    def upper(self) -> mpmath.mpf:
        return _mpf(self.hi)

    def lower_fraction(self) -> Fraction:
        return _raw_to_fraction(self.lo)

    def upper_fraction(self) -> Fraction:
        return _raw_to_fraction(self.hi)

    def is_exact(self) -> bool:
        return self.rational is not None

    def contains(self, value: Number) -> bool:
        v = Fraction(value)
        return self.lower_fraction() <= v <= self.upper_fraction()

    def contains_interval(self, other: "HPReal") -> bool:
        return mpf_le(self.lo, other.lo) and mpf_ge(self.hi, other.hi)

    def positive(self) -> bool:
        """True when the whole interval is strictly above zero."""
        return mpf_gt(self.lo, from_int(0))

    def negative(self) -> bool:
        return mpf_lt(self.hi, from_int(0))

    def contains_zero(self) -> bool:
        return not (self.positive() or self.negative())

    def __repr__(self):
        return "HPReal(%s ± %s, digits=%d)" % (
            mpmath.nstr(self.approx, 20),
            mpmath.nstr(self.err, 3),
            self.digits,
        )

    def __str__(self):
        return mpmath.nstr(self.approx, min(self.digits, 30))

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "HPReal":
        if isinstance(other, HPReal):
            return other
        return exact(other, self.digits)

    def _binary(self, other, kernel, exact_op) -> "HPReal":
        other = self._coerce(other)
        digits = min(self.digits, other.digits)
        lo, hi = kernel((self.lo, self.hi), (other.lo, other.hi), _bits(digits))
        r = None
        if self.rational is not None and other.rational is not None:
            r = exact_op(self.rational, other.rational)
        return HPReal(lo, hi, digits, r)

    def __add__(self, other):
        return self._binary(other, libmpi.mpi_add, operator.add)

    def __radd__(self, other):
        return self._coerce(other) + self

    def __sub__(self, other):
        return self._binary(other, libmpi.mpi_sub, operator.sub)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        return self._binary(other, libmpi.mpi_mul, operator.mul)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.contains_zero():
            raise DomainError("division by an interval containing 0")
        return self._binary(other, libmpi.mpi_div, operator.truediv)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        r = None if self.rational is None else -self.rational
        return HPReal(*libmpi.mpi_neg((self.lo, self.hi)), self.digits, r)

    def __abs__(self):
        r = None if self.rational is None else abs(self.rational)
        return HPReal(*libmpi.mpi_abs((self.lo, self.hi)), self.digits, r)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported; use exp/log")
        if n < 0:
            return 1 / (self ** (-n))
        lo, hi = libmpi.mpi_pow_int((self.lo, self.hi), n, self.prec)
        r = None if self.rational is None else self.rational**n
        return HPReal(lo, hi, self.digits, r)

    def log(self) -> "HPReal":
        if not self.positive():
            raise DomainError("log of an interval touching 0 or below")
        return HPReal(*libmpi.mpi_log((self.lo, self.hi), self.prec), self.digits)

    def exp(self) -> "HPReal":
        return HPReal(*libmpi.mpi_exp((self.lo, self.hi), self.prec), self.digits)

    def sqrt(self) -> "HPReal":
        if self.negative() or mpf_lt(self.lo, from_int(0)):
            raise DomainError("sqrt of an interval reaching below 0")
        return HPReal(*libmpi.mpi_sqrt((self.lo, self.hi), self.prec), self.digits)

    def floor(self) -> int:
        """Common floor of every point, or :class:`PrecisionError`."""
        if self.rational is not None:
            return math.floor(self.rational)
        a = math.floor(self.lower_fraction())
        b = math.floor(self.upper_fraction())
        if a != b:
            raise PrecisionError("interval straddles the integer %d" % b)
        return a

    def ceil_upper(self) -> int:
        """Smallest integer >= every point of the interval."""
        return math.ceil(self.upper_fraction())


def exact(value: Number, digits: int = 200) -> HPReal:
    """Enclose an integer, Fraction or decimal string.

    The result remembers the exact fraction.  Integers (and dyadic
    rationals) also have a zero-width enclosure; other rationals get a
    one-ulp outward enclosure.
    """
    if isinstance(value, HPReal):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, int):
        raw = from_int(value)
        return HPReal(raw, raw, digits, Fraction(value))
    if isinstance(value, float):
        value = Fraction(value)
    f = Fraction(value)
    prec = _bits(digits)
    lo = from_rational(f.numerator, f.denominator, prec, round_floor)
    hi = from_rational(f.numerator, f.denominator, prec, round_ceiling)
    return HPReal(lo, hi, digits, f)


def _sqrt2(digits):
    return exact(2, digits).sqrt()


CONSTANTS: dict = {
    "alpha": lambda d: 3 + 2 * _sqrt2(d),
    "beta": lambda d: 3 - 2 * _sqrt2(d),
    "log_alpha": lambda d: (3 + 2 * _sqrt2(d)).log(),
    "log_4sqrt2": lambda d: exact(32, d).log() / 2,
    "log32": lambda d: exact(32, d).log(),
    "log2": lambda d: exact(2, d).log(),
}


def constant(name: str, digits: int = 200) -> HPReal:
    """One of the fixed constants of the balancing problem.

    ``alpha`` and ``beta`` are the roots ``3 ± 2*sqrt(2)`` of ``x^2 - 6x + 1``;
    the log constants are the natural logarithms of ``alpha``, ``4*sqrt(2)``,
    ``32`` and ``2``.
    """
    if digits < 50:
        raise ValueError("constants need at least 50 digits, got %d" % digits)
    try:
        build = CONSTANTS[name]
    except KeyError:
        raise ValueError(
            "unknown constant %r; expected one of %s" % (name, ", ".join(CONSTANTS))
        ) from None
    return build(digits)


_UNARY = {
    "log": HPReal.log,
    "exp": HPReal.exp,
    "abs": HPReal.__abs__,
    "sqrt": HPReal.sqrt,
    "neg": HPReal.__neg__,
}
_BINARY = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


def arith(op: str, *args) -> HPReal:
    """Dispatch an operation by name; ``pow_int`` takes ``(base, n)``."""
    if op in _UNARY:
        (a,) = args
        return _UNARY[op](a)
    if op in _BINARY:
        a, b = args
        if not isinstance(a, HPReal):
            a = exact(a, b.digits)
        return _BINARY[op](a, b)
    if op == "pow_int":
        a, n = args
        return a ** int(n)
    raise ValueError("unknown operation %r" % op)


class Ordering3(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    INCONCLUSIVE = "inconclusive"


def compare(a, b) -> Ordering3:
    """Order two values only when their enclosures are disjoint."""
    if not isinstance(a, HPReal):
        a = exact(a, b.digits if isinstance(b, HPReal) else 200)
    if not isinstance(b, HPReal):
        b = exact(b, a.digits)
    if mpf_lt(a.hi, b.lo):
        return Ordering3.LESS
    if mpf_gt(a.lo, b.hi):
        return Ordering3.GREATER
    return Ordering3.INCONCLUSIVE


@dataclass(frozen=True)
class PrecisionPolicy:
    initial_digits: int = 200
    max_digits: int = 3200
    escalation_factor: int = 2

    def __post_init__(self):
        if self.initial_digits < 50:
            raise ValueError("initial_digits must be >= 50")
        if self.max_digits < self.initial_digits:
            raise ValueError("max_digits must be >= initial_digits")
        if self.escalation_factor < 2:
            raise ValueError("escalation_factor must be >= 2")

    def ladder(self):
        """Working precisions to try, in order, ending at ``max_digits``."""
        d = self.initial_digits
        while d < self.max_digits:
            yield d
            d *= self.escalation_factor
        yield self.max_digits


DEFAULT_POLICY = PrecisionPolicy()

Comparison = Callable[[int], Tuple[HPReal, HPReal]]


def decide_with_escalation(
    build: Comparison, relation: str = "<", policy: PrecisionPolicy = DEFAULT_POLICY
) -> bool:
    """Decide ``lhs <relation> rhs`` where ``build(digits)`` gives ``(lhs, rhs)``.

    Precision is raised along the policy's ladder until the two enclosures
    separate.  Exactly equal operands never separate, which surfaces as an
    :class:`EscalationError` instead of a guessed answer.
    """
    if relation not in ("<", ">"):
        raise ValueError("relation must be '<' or '>'")
    for digits in policy.ladder():
        try:
            lhs, rhs = build(digits)
        except PrecisionError:
            continue
        order = compare(lhs, rhs)
        if order is Ordering3.LESS:
            return relation == "<"
        if order is Ordering3.GREATER:
            return relation == ">"
    raise EscalationError(
        "comparison still inconclusive at %d digits" % policy.max_digits
    )


def nearest_int_distance(x: HPReal) -> HPReal:
    """Enclosure of ``||x||``, the distance from ``x`` to the nearest integer."""
    k = x.floor()
    below = x - k
    above = (k + 1) - x
    # min of two enclosures, endpoint-wise
    lo = below.lo if mpf_le(below.lo, above.lo) else above.lo
    hi = below.hi if mpf_le(below.hi, above.hi) else above.hi
    return HPReal(lo, hi, x.digits)
