"""Closed-form security-bound calculators.

Two protocol families are covered: the GHZ verification bound
eps = (4n + 1) / 2^(S/2) (exact rational whenever S is even) and the
generic graph-verification bound built from

    p0   = [1 - sum_{x=0..lam} (1 - 1/n)^x ((1/n) J^(-2cm/3))^(lam - x)]^J
    eta0 = (1/lam - 1/lam^2) + (1 + 1/lam)(sqrt(c) + 1/2) / J
    eps  = 1 - p0 + 2 eta0 - eta0^2

plus the translation helpers p(1 - F) and delta + eta^2 and the
realization bound 2 sqrt(2 eps - eps^2) attached to every result.
Out-of-range eps values (> 1) are reported with a flag rather than
clamped, since the formulas are only meaningful up to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import InvalidParameters, OutOfRange


def realization_bound(epsilon: float) -> float:
    """2 sqrt(2 eps - eps^2): the realization distance for an eps-protocol."""
    if not 0.0 <= epsilon <= 1.0:
        raise OutOfRange(f"epsilon {epsilon} outside [0, 1]")
    return 2.0 * math.sqrt(epsilon * (2.0 - epsilon))


@dataclass(frozen=True)
class BoundResult:
    epsilon: float
    realization_epsilon: float | None
    in_range: bool
    components: dict = field(default_factory=dict)
    exact: Fraction | None = None

    def as_dict(self) -> dict:
        out = {
            "epsilon": self.epsilon,
            "realization_epsilon": self.realization_epsilon,
            "in_range": self.in_range,
            "components": dict(self.components),
        }
        if self.exact is not None:
            out["exact"] = f"{self.exact.numerator}/{self.exact.denominator}"
        return out


def _attach_realization(epsilon: float, components: dict, exact=None) -> BoundResult:
    in_range = 0.0 <= epsilon <= 1.0
    return BoundResult(
        epsilon=epsilon,
        realization_epsilon=realization_bound(epsilon) if in_range else None,
        in_range=in_range,
        components=components,
        exact=exact,
    )


@dataclass(frozen=True)
class GhzBoundInput:
    n: int
    s: int

    def __post_init__(self):
        if self.n < 1 or self.s < 0:
            raise InvalidParameters("need n >= 1 and S >= 0")


def ghz_epsilon(inp: GhzBoundInput) -> BoundResult:
    """eps = (4n + 1) / 2^(S/2); exact rational when S is even."""
    n, s = inp.n, inp.s
    epsilon = (4 * n + 1) / 2 ** (s / 2)
    exact = Fraction(4 * n + 1, 2 ** (s // 2)) if s % 2 == 0 else None
    components = {"numerator": 4 * n + 1, "denominator": 2 ** (s / 2)}
    return _attach_realization(epsilon, components, exact)


@dataclass(frozen=True)
class GraphBoundInput:
    j: float       # 2^n or n depending on the verified graph family
    lam: float     # security parameter (number of test groups)
    c: float
    m: float
    n: int         # party count entering the (1 - 1/n)^x terms

    def __post_init__(self):
        if self.j <= 0 or self.lam <= 0 or self.c <= 0 or self.m <= 0 or self.n < 1:
            raise InvalidParameters("all graph-bound parameters must be positive")


def _graph_sum_float(inp: GraphBoundInput) -> float:
    """Compensated float evaluation of sum_{x=0..lam} (1-1/n)^x q^(lam-x)."""
    q = (1.0 / inp.n) * inp.j ** (-2.0 * inp.c * inp.m / 3.0)
    a = 1.0 - 1.0 / inp.n
    lam = int(inp.lam)
    terms = [a**x * q ** (lam - x) for x in range(lam + 1)]
    return math.fsum(terms)


def graph_epsilon(inp: GraphBoundInput, precise: bool = False, dps: int = 60) -> BoundResult:
    """eps = 1 - p0 + 2 eta0 - eta0^2 for the generic graph-verification bound.

    ``precise`` recomputes every quantity with mpmath at ``dps`` decimal
    digits (the cross-check oracle for the float path).  Raises
    InvalidParameters when p0 leaves [0, 1] or eta0 < 0.
    """
    lam = int(inp.lam)
    if precise:
        with mpmath.workdps(dps):
            j = mpmath.mpf(inp.j)
            nn = mpmath.mpf(inp.n)
            q = (1 / nn) * j ** (mpmath.mpf(-2) * inp.c * inp.m / 3)
            a = 1 - 1 / nn
            total = mpmath.fsum(a**x * q ** (lam - x) for x in range(lam + 1))
            p0 = (1 - total) ** j
            eta0 = (mpmath.mpf(1) / lam - mpmath.mpf(1) / lam**2) + (1 + mpmath.mpf(1) / lam) * (
                mpmath.sqrt(inp.c) + mpmath.mpf("0.5")
            ) / j
            eps = 1 - p0 + 2 * eta0 - eta0**2
            p0_f, eta0_f, eps_f = float(p0), float(eta0), float(eps)
    else:
        total = _graph_sum_float(inp)
        p0_f = (1.0 - total) ** inp.j
        eta0_f = (1.0 / lam - 1.0 / lam**2) + (1.0 + 1.0 / lam) * (
            math.sqrt(inp.c) + 0.5
        ) / inp.j
        eps_f = 1.0 - p0_f + 2.0 * eta0_f - eta0_f**2

    if not 0.0 <= p0_f <= 1.0:
        raise InvalidParameters(f"p0 = {p0_f} outside [0, 1]")
    if eta0_f < 0.0:
        raise InvalidParameters(f"eta0 = {eta0_f} negative")
    components = {"p0": p0_f, "eta0": eta0_f}
    return _attach_realization(eps_f, components)


def translate_fidelity(p: float, fidelity: float) -> float:
    """p (1 - F): accept-and-far probability as a single closeness parameter."""
    if not (0.0 <= p <= 1.0 and 0.0 <= fidelity <= 1.0):
        raise OutOfRange("p and fidelity must lie in [0, 1]")
    return p * (1.0 - fidelity)


def translate_eta_delta(eta: float, delta: float) -> float:
    """delta + eta^2: two-parameter closeness collapsed to one."""
    if not (0.0 <= eta <= 1.0 and 0.0 <= delta <= 1.0):
        raise OutOfRange("eta and delta must lie in [0, 1]")
    return delta + eta * eta
