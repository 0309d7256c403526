"""Matveev lower bounds, the bound chain on x, and Baker-Davenport reduction.

Everything that ends up in a proof step is decided with interval
comparisons; a computed constant is "within" a rounded cap only if its
upper endpoint is below the cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, Union

from . import contfrac
from .numerics import (
    DEFAULT_POLICY,
    HPReal,
    PrecisionError,
    PrecisionPolicy,
    EscalationError,
    constant,
    decide_with_escalation,
    exact,
    nearest_int_distance,
)
from .sequences import balancing

__all__ = [
    "MatveevParams",
    "matveev_constant",
    "lambda1_params",
    "lambda2_params",
    "lambda1_coefficient",
    "lambda2_coefficient",
    "m_range",
    "solve_two_a_log_a",
    "t_range",
    "ChainLink",
    "BoundChainReport",
    "ChainFailure",
    "bound_chain",
    "BDInstance",
    "ReductionOutcome",
    "ReductionFailure",
    "reduction_epsilon",
    "baker_davenport_reduce",
    "balancing_instance",
    "SMALL_N_M",
    "ROUNDED_CAPS",
]

Real = Union[HPReal, int, Fraction, str]
RealSource = Union[HPReal, Callable[[int], HPReal]]

# rounded constants as stated alongside the proof
ROUNDED_CAPS = {
    "lambda1_coefficient": Fraction(21 * 10**12),
    "x_vs_m_pre": Fraction(12 * 10**12),
    "x_vs_mn": Fraction(21 * 10**12),
    "x_vs_n": Fraction(84 * 10**13),
    "l_vs_x": Fraction(4 * 10**10),
    "x_absolute": Fraction(7 * 10**28),
    "small_n_coefficient": Fraction(78 * 10**13),
    "small_n_cap": Fraction(4 * 10**16),
}
SMALL_N_M = 4 * 10**16


def _hp(v: Real, digits: int) -> HPReal:
    return v if isinstance(v, HPReal) else exact(v, digits)


# -- Matveev -----------------------------------------------------------------


@dataclass(frozen=True)
class MatveevParams:
    s: int
    D: int
    A: Sequence[Real]
    Bcap: Real
    digits: int = 200

    def __post_init__(self):
        if self.s < 1 or self.D < 1:
            raise ValueError("need s >= 1 and D >= 1")
        if len(self.A) != self.s:
            raise ValueError("expected %d A_j values, got %d" % (self.s, len(self.A)))
        for a in self.A:
            if _hp(a, self.digits).lower_fraction() < Fraction(16, 100):
                raise ValueError("every A_j must be >= 0.16")
        if _hp(self.Bcap, self.digits).lower_fraction() < 1:
            raise ValueError("Bcap must be >= 1")


def matveev_constant(p: MatveevParams) -> HPReal:
    """``C`` with ``log|Lambda| >= -C`` for a nonzero linear form in s logs.

    C = 1.4 * 30^(s+3) * s^4.5 * D^2 * (1 + log D) * (1 + log B) * A_1...A_s
    """
    d = p.digits
    s4_5 = exact(p.s**4, d) * exact(p.s, d).sqrt()
    c = exact(Fraction(7, 5), d) * 30 ** (p.s + 3) * s4_5 * p.D**2
    c = c * (1 + exact(p.D, d).log()) * (1 + _hp(p.Bcap, d).log())
    for a in p.A:
        c = c * _hp(a, d)
    return c


def lambda1_params(n: int, m: Real, digits: int = 200) -> MatveevParams:
    """Three logarithms ``alpha, 4*sqrt(2), B_{n+1}`` in Q(sqrt 2)."""
    la = constant("log_alpha", digits)
    return MatveevParams(3, 2, [la, constant("log32", digits), 2 * n * la], m, digits)


def lambda2_params(x: Real, digits: int = 200) -> MatveevParams:
    """Two logarithms ``alpha, 4*sqrt(2)`` in Q(sqrt 2)."""
    return MatveevParams(
        2, 2, [constant("log_alpha", digits), constant("log32", digits)], x, digits
    )


def lambda1_coefficient(digits: int = 200) -> HPReal:
    """The factor K in ``C(Lambda_1) = K * n * (1 + log m)``."""
    # Bcap = 1 makes the (1 + log B) factor exactly 1
    return matveev_constant(lambda1_params(1, 1, digits))


def lambda2_coefficient(digits: int = 200) -> HPReal:
    """The factor K in ``C(Lambda_2) = K * (1 + log x)``."""
    return matveev_constant(lambda2_params(1, digits))


# -- elementary ranges -------------------------------------------------------


def m_range(n: int, x: int) -> Tuple[int, int]:
    """Open bounds ``(n-2)x + 1 < m < nx + 2`` from the growth of B_n."""
    if n < 2 or x < 1:
        raise ValueError("need n >= 2 and x >= 1")
    return (n - 2) * x + 1, n * x + 2


def t_range(x: int) -> Tuple[int, int]:
    """Inclusive grid ``[floor(0.9x - 1.4), x]`` for ``t = (n+1)x - m``, floored at 1."""
    if x < 3:
        raise ValueError("x must be >= 3")
    lo = math.floor(Fraction(9, 10) * x - Fraction(7, 5))
    return max(1, lo), x


def solve_two_a_log_a(coef: Real, digits: int = 200) -> HPReal:
    """Upper bound ``2A log A`` for every x with ``x / log x < A``; A >= 3."""
    a = _hp(coef, digits)
    if a.lower_fraction() < 3:
        raise ValueError("the x/log x lemma needs A >= 3")
    return 2 * a * a.log()


# -- the bound chain ---------------------------------------------------------


class ChainFailure(ArithmeticError):
    def __init__(self, link):
        super().__init__("bound chain link %r did not certify" % link)
        self.link = link


@dataclass
class ChainLink:
    name: str
    statement: str
    holds: bool
    lhs: Optional[HPReal] = None
    rhs: Optional[HPReal] = None
    relation: str = "<"


@dataclass
class BoundChainReport:
    """Certified coefficients of the chain of upper bounds on x (n >= n_min).

    Each coefficient is paired with a rounded cap; ``caps`` maps the same
    names to those values.
    """

    n_min: int
    x_vs_mn: HPReal
    x_vs_n: HPReal
    l_vs_x: HPReal
    x_absolute: HPReal
    lambda1_coefficient: HPReal
    lambda2_coefficient: HPReal
    links: List[ChainLink] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    caps: dict = field(default_factory=lambda: dict(ROUNDED_CAPS))

    @property
    def holds(self) -> bool:
        return all(link.holds for link in self.links)


class _Chain:
    def __init__(self, policy):
        self.policy = policy
        self.digits = policy.initial_digits
        self.links = []

    def check(self, name, statement, build, relation="<"):
        """Certify ``lhs <relation> rhs`` with ``build(digits) -> (lhs, rhs)``."""
        try:
            ok = decide_with_escalation(build, relation, self.policy)
        except EscalationError:
            ok = False
        lhs, rhs = build(self.digits)
        self.links.append(ChainLink(name, statement, ok, lhs, rhs, relation))
        if not ok:
            raise ChainFailure(name)
        return lhs


def bound_chain(n_min: int = 38, policy: PrecisionPolicy = DEFAULT_POLICY) -> BoundChainReport:
    """Re-derive the explicit caps on x for ``n >= n_min``.

    Links, in order:

    * Matveev for Lambda_1 and ``|Lambda_1| < 2/5.8^x`` give
      ``x < c * n * (1 + log m)``; with ``1 + log m < 1.7 log m`` (m >= 5)
      and ``m < (n+2)x`` this becomes ``x < 2.1e13 n log((n+2)x)``.
    * For n <= 37 that caps x below ``4e16``, the M of the reduction step.
    * If ``x > n + 2`` then ``x / log x < 4.2e13 n``; the ``2A log A`` lemma
      and ``log(4.2e13 n) < 10 log n`` give ``x < 8.4e14 n log n``.
    * Matveev for Lambda_2 and ``|Lambda_2| < 4/alpha^l`` give
      ``l < 4e10 log x`` with ``l = min(n, x)``, and both branches of the
      minimum end below ``7e28``.
    """
    if n_min < 38:
        raise ValueError("the chain is stated for n >= 38")
    ch = _Chain(policy)
    n = n_min

    def K1(d):
        return lambda1_coefficient(d)

    def K2(d):
        return lambda2_coefficient(d)

    def L(name, d):
        return constant(name, d)

    def E(v, d):
        return exact(v, d)

    k1 = ch.check(
        "lambda1_coefficient",
        "C(Lambda_1) / (n (1 + log m)) <= 2.1e13",
        lambda d: (K1(d), E(ROUNDED_CAPS["lambda1_coefficient"], d)),
    )
    ch.check(
        "one_plus_log_m",
        "1 + log m < 1.7 log m at m = 5 (the gap 0.7 log m - 1 increases with m)",
        lambda d: (1 + E(5, d).log(), E(Fraction(17, 10), d) * E(5, d).log()),
    )

    def pre(d):
        # x log 5.8 - log 2 < K1 n (1 + log m), divided through by n(1 + log m) >= 1 + log 5
        return (K1(d) + L("log2", d) / (1 + E(5, d).log())) / E(Fraction(29, 5), d).log()

    ch.check(
        "x_vs_m_pre",
        "x < 1.2e13 n (1 + log m)",
        lambda d: (pre(d), E(ROUNDED_CAPS["x_vs_m_pre"], d)),
    )
    x_vs_mn = ch.check(
        "x_vs_mn",
        "x < 2.1e13 n log((n+2)x)",
        lambda d: (E(Fraction(17, 10), d) * pre(d), E(ROUNDED_CAPS["x_vs_mn"], d)),
    )

    # A_3 = 2 log B_{n+1} is slightly above 2n log(alpha); redo the step with
    # B_{n+1} < alpha^(n + 0.02), which costs a factor 1 + 0.01 at n >= 2
    ch.check(
        "height_gamma3_corrected",
        "log(4 sqrt 2) / log(alpha) > 0.98, so log B_{n+1} < (n + 0.02) log(alpha)",
        lambda d: (L("log_4sqrt2", d) / L("log_alpha", d), E(Fraction(49, 50), d)),
        ">",
    )
    ch.check(
        "x_vs_mn_corrected_height",
        "x < 2.1e13 n log((n+2)x) still holds with A_3 = 2 (n + 0.02) log(alpha), n >= 2",
        lambda d: (
            E(Fraction(17, 10), d)
            * (K1(d) * E(Fraction(101, 100), d) + L("log2", d) / (1 + E(5, d).log()))
            / E(Fraction(29, 5), d).log(),
            E(ROUNDED_CAPS["x_vs_mn"], d),
        ),
    )
    try:
        stated_height = decide_with_escalation(
            lambda d: (E(balancing(n + 1).value, d).log(), n * L("log_alpha", d)),
            "<",
            policy,
        )
    except EscalationError:
        stated_height = False

    c_small = ROUNDED_CAPS["x_vs_mn"] * 37
    ch.check(
        "small_n_coefficient",
        "2.1e13 * 37 <= 7.8e14 (n <= 37, and n + 2 <= 46)",
        lambda d: (E(c_small, d), E(ROUNDED_CAPS["small_n_coefficient"] + 1, d)),
    )
    ch.check(
        "small_n_cap",
        "x = 4e16 violates x < 7.8e14 log(46x); x - c log(46x) increases past x = c",
        lambda d: (
            E(ROUNDED_CAPS["small_n_coefficient"], d) * E(46 * SMALL_N_M, d).log(),
            E(SMALL_N_M, d),
        ),
    )

    a_coef = Fraction(42 * 10**12) * n
    ch.check(
        "two_a_log_a",
        "x0 = 2A log A satisfies x0 / log x0 >= A at A = 4.2e13 n (so x < x0)",
        lambda d: (
            solve_two_a_log_a(a_coef, d) / solve_two_a_log_a(a_coef, d).log(),
            E(a_coef, d),
        ),
        ">",
    )
    ch.check(
        "log_coefficient_vs_log_n",
        "log(4.2e13 n) < 10 log n at n = %d (10 log n - log n grows)" % n,
        lambda d: (E(a_coef, d).log(), 10 * E(n, d).log()),
    )
    x_vs_n = ch.check(
        "x_vs_n",
        "x < 2 * 4.2e13 * 10 n log n = 8.4e14 n log n",
        lambda d: (E(2 * Fraction(42 * 10**12) * 10, d), E(ROUNDED_CAPS["x_vs_n"] + 1, d)),
    )
    ch.check(
        "x_le_n_plus_2_branch",
        "n + 2 < 8.4e14 n log n, so the branch x <= n + 2 is covered",
        lambda d: (E(n + 2, d), E(ROUNDED_CAPS["x_vs_n"] * n, d) * E(n, d).log()),
    )

    def y_bound(d):
        a = L("alpha", d)
        return E(ROUNDED_CAPS["x_vs_n"] * n, d) * E(n, d).log() / a ** (2 * n)

    ch.check(
        "y_vs_alpha_n",
        "y = x / alpha^(2n) < 1 / alpha^n",
        lambda d: (y_bound(d), 1 / L("alpha", d) ** n),
    )
    ch.check(
        "y_small",
        "y < 1e-31",
        lambda d: (y_bound(d), E(Fraction(1, 10**31), d)),
    )
    try:
        alpha_38_small = decide_with_escalation(
            lambda d: (1 / L("alpha", d) ** 38, E(Fraction(1, 10**31), d)), "<", policy
        )
    except EscalationError:
        alpha_38_small = False
    notes = []
    if not stated_height:
        notes.append(
            "log B_{n+1} < n log(alpha) is false (the excess is log(alpha) - "
            "log(4 sqrt 2) ~ 0.0299); the corrected-height links cover it"
        )
    if not alpha_38_small:
        notes.append(
            "alpha^-38 < 1e-31 is false (alpha^-38 ~ 8.3e-30); y < 1e-31 is certified "
            "directly from x < 8.4e14 n log n instead"
        )
    ch.check(
        "alpha_cubed",
        "alpha^3 > 197",
        lambda d: (L("alpha", d) ** 3, E(197, d)),
        ">",
    )

    k2 = ch.check(
        "lambda2_coefficient",
        "C(Lambda_2) / (1 + log x) <= 4e10",
        lambda d: (K2(d), E(ROUNDED_CAPS["l_vs_x"], d)),
    )

    def c_l(d):
        # l log(alpha) < log 4 + K2 (1 + log x); worst ratio to log x is at x = 3
        log3 = E(3, d).log()
        return ((E(4, d).log() + K2(d)) / log3 + K2(d)) / L("log_alpha", d)

    l_vs_x = ch.check(
        "l_vs_x",
        "l < 4e10 log x for x >= 3",
        lambda d: (c_l(d), E(ROUNDED_CAPS["l_vs_x"], d)),
    )

    cl = ROUNDED_CAPS["l_vs_x"]
    ch.check(
        "case_l_equals_x",
        "l = x: x / log x < 4e10 gives x < 2A log A < 7e28",
        lambda d: (solve_two_a_log_a(cl, d), E(ROUNDED_CAPS["x_absolute"], d)),
    )

    def composed(d):
        x = E(ROUNDED_CAPS["x_absolute"], d)
        nb = E(cl, d) * x.log()
        return E(ROUNDED_CAPS["x_vs_n"], d) * nb * nb.log()

    x_abs = ch.check(
        "case_l_equals_n",
        "l = n: n < 4e10 log x, so x < 8.4e14 (4e10 log x) log(4e10 log x); "
        "at x = 7e28 the right side is smaller",
        lambda d: (composed(d), E(ROUNDED_CAPS["x_absolute"], d)),
    )

    def slope(d):
        x = E(ROUNDED_CAPS["x_absolute"], d)
        nb = E(cl, d) * x.log()
        return 1 + 1 / nb.log(), x.log()

    ch.check(
        "case_l_equals_n_monotone",
        "d/dx log(rhs) < 1/x for x >= 7e28, i.e. 1 + 1/log(4e10 log x) < log x",
        slope,
    )

    return BoundChainReport(
        n_min=n_min,
        x_vs_mn=x_vs_mn,
        x_vs_n=x_vs_n,
        l_vs_x=l_vs_x,
        x_absolute=x_abs,
        lambda1_coefficient=k1,
        lambda2_coefficient=k2,
        links=ch.links,
        notes=notes,
    )


# -- Baker-Davenport reduction -----------------------------------------------


class ReductionFailure(ArithmeticError):
    pass


def _as_builder(v) -> Callable[[int], HPReal]:
    if callable(v) and not isinstance(v, HPReal):
        return v
    if isinstance(v, HPReal):
        return lambda _d: v
    return lambda d: exact(v, d)


@dataclass(frozen=True)
class BDInstance:
    """``0 < m*gamma - n + mu < A * B^(-k)`` with ``m <= M``.

    The reals may be :class:`HPReal` values or functions ``digits -> HPReal``;
    only the latter allow precision escalation.
    """

    gamma: object
    mu: object
    A_coef: object
    B_base: object
    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("M must be >= 1")

    def at(self, digits):
        g, mu, a, b = (
            _as_builder(v)(digits) for v in (self.gamma, self.mu, self.A_coef, self.B_base)
        )
        if not a.positive():
            raise ValueError("A must be > 0")
        if (b - 1).lower_fraction() <= 0:
            raise ValueError("B must be > 1")
        return g, mu, a, b


@dataclass(frozen=True)
class ReductionOutcome:
    q_used: int
    epsilon: HPReal
    k_bound: int
    convergent_index: int
    attempts: int
    digits: int

    @property
    def x_cap(self) -> int:
        """Largest k a solution can still have."""
        return self.k_bound - 1


def reduction_epsilon(inst: BDInstance, q: int, digits: int) -> HPReal:
    """``||mu q|| - M ||gamma q||`` as an enclosure."""
    g, mu, _, _ = inst.at(digits)
    return nearest_int_distance(mu * q) - inst.M * nearest_int_distance(g * q)


def _k_bound(a, q, eps, b):
    return ((a * q / eps).log() / b.log()).ceil_upper()


def baker_davenport_reduce(
    inst: BDInstance, cf_budget: int = 20, policy: PrecisionPolicy = DEFAULT_POLICY
) -> ReductionOutcome:
    """Apply the Dujella-Petho form of the Baker-Davenport lemma.

    Walks the convergents of gamma whose denominators exceed 6M, at most
    ``cf_budget`` of them, until ``eps = ||mu q|| - M ||gamma q||`` is
    certified positive.  Then no solution has ``k >= log(A q / eps) / log B``
    and ``k_bound`` is the ceiling of that quantity.  Inconclusive signs
    restart the walk at higher precision.
    """
    threshold = 6 * inst.M
    last_digits = None
    for digits in policy.ladder():
        last_digits = digits
        g, mu, a, b = inst.at(digits)
        cf = contfrac.CFExpansion(tuple(contfrac.certified_quotients(g)[0]), digits=digits)
        attempts = 0
        inconclusive = False
        for c in contfrac.convergents(cf):
            if c.q <= threshold:
                continue
            if attempts == cf_budget:
                raise ReductionFailure(
                    "no convergent with eps > 0 among the first %d with q > 6M" % cf_budget
                )
            attempts += 1
            try:
                eps = nearest_int_distance(mu * c.q) - inst.M * nearest_int_distance(g * c.q)
            except PrecisionError:
                inconclusive = True
                break
            if eps.positive():
                return ReductionOutcome(
                    c.q, eps, _k_bound(a, c.q, eps, b), c.k, attempts, digits
                )
            if eps.upper_fraction() > 0:
                inconclusive = True
                break
        if not inconclusive and attempts == cf_budget:
            raise ReductionFailure(
                "no convergent with eps > 0 among the first %d with q > 6M" % cf_budget
            )
    raise EscalationError(
        "reduction still undecided at %s digits" % last_digits
    )


def balancing_instance(n: int, M: int = SMALL_N_M, B_base: Real = Fraction(29, 5)) -> BDInstance:
    """The reduction for ``0 < x gamma - m + mu < (2/log alpha) 5.8^-x``.

    ``gamma = log B_{n+1} / log alpha`` and ``mu = log(4 sqrt 2) / log alpha``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    b_next = balancing(n + 1).value

    def gamma(d):
        return exact(b_next, d).log() / constant("log_alpha", d)

    def mu(d):
        return constant("log_4sqrt2", d) / constant("log_alpha", d)

    def a_coef(d):
        return 2 / constant("log_alpha", d)

    return BDInstance(gamma, mu, a_coef, B_base, M)
