"""Exact derivatives of f**alpha, local-stability constants, and bound checks.

The k-th derivative of f**alpha expands over integer-partition tuples
(m_1, ..., m_k) with sum(j * m_j) == k; each term couples a falling-power
coefficient of t -> t**alpha with a product of derivatives of f.  This is
the stable route to seminorms of roots: finite differences of f**alpha
degrade badly near zeros of f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import RangeError, SingularPoint
from .function_model import evaluate_array, max_exact_derivative, strict_floor

MAX_TUPLE_ORDER = 20
_F_ZERO = 1e-300

# p(k) for k = 1..12, used as an enumeration self-check
PARTITION_COUNTS = (1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77)


@dataclass(frozen=True)
class PartitionTuple:
    """One term of the higher-order chain rule at order k.

    ``m`` holds the multiplicities (m_1, ..., m_k) with sum(j*m_j) == k,
    ``M`` their total, and ``weight`` the integer k! / (m_1! ... m_k!).
    """

    m: tuple
    k: int
    M: int
    weight: int


def _partitions(n: int, max_part: int):
    if n == 0:
        yield ()
        return
    for p in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - p, p):
            yield (p,) + rest


@lru_cache(maxsize=None)
def faa_tuples(k: int) -> tuple:
    """All multiplicity tuples of the order-k chain-rule expansion.

    Complete and duplicate-free; the count equals the integer partition
    number p(k).  Ordered reverse-lexicographically, so the all-ones
    tuple (k, 0, ..., 0) comes first and (0, ..., 0, 1) last.
    """
    if not 1 <= k <= MAX_TUPLE_ORDER:
        raise RangeError(f"order {k} outside [1, {MAX_TUPLE_ORDER}]")
    tuples = []
    for parts in _partitions(k, k):
        m = [0] * k
        for p in parts:
            m[p - 1] += 1
        tuples.append(tuple(m))
    tuples.sort(reverse=True)
    out = []
    for m in tuples:
        M = sum(m)
        weight = math.factorial(k)
        for mj in m:
            weight //= math.factorial(mj)
        out.append(PartitionTuple(m=m, k=k, M=M, weight=weight))
    return tuple(out)


def _power_coeffs(alpha: float, max_order: int) -> list:
    # alpha * (alpha-1) * ... * (alpha-M+1) as a running product, no gamma calls
    coeffs = [1.0]
    for r in range(max_order):
        coeffs.append(coeffs[-1] * (alpha - r))
    return coeffs


def power_derivative_array(f, alpha: float, k: int, xs: np.ndarray) -> np.ndarray:
    """d^k/dx^k of f(x)**alpha at the points xs, via the chain-rule expansion.

    At points where f vanishes together with its first k derivatives the
    value is 0 by convention; a zero of f with a non-vanishing derivative
    raises SingularPoint.
    """
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    xs = np.asarray(xs, dtype=float)
    if k == 0:
        return evaluate_array(f, xs, 0) ** alpha
    if alpha == 1.0:
        return evaluate_array(f, xs, k)

    f0 = evaluate_array(f, xs, 0)
    derivs = [evaluate_array(f, xs, j) for j in range(1, k + 1)]
    zero = f0 <= _F_ZERO
    if zero.any():
        for j, fj in enumerate(derivs, start=1):
            bad = zero & (np.abs(fj) > _F_ZERO)
            if bad.any():
                x = xs[int(np.argmax(bad))]
                raise SingularPoint(
                    f"f({x}) = 0 with nonzero derivative of order {j}"
                )

    out = np.zeros_like(f0)
    pos = ~zero
    if pos.any():
        fp = f0[pos]
        coeffs = _power_coeffs(alpha, k)
        acc = np.zeros_like(fp)
        for pt in faa_tuples(k):
            term = pt.weight * coeffs[pt.M] * fp ** (alpha - pt.M)
            for j, mj in enumerate(pt.m, start=1):
                if mj:
                    term = term * (derivs[j - 1][pos] / math.factorial(j)) ** mj
            acc = acc + term
        out[pos] = acc
    return out


def power_derivative(f, alpha: float, k: int, x: float) -> float:
    return float(power_derivative_array(f, alpha, k, np.array([x]))[0])


@dataclass(frozen=True)
class RootPower:
    """f**alpha as a derivative provider, pluggable into the seminorm machinery."""

    base: object
    alpha: float

    def evaluate_array(self, xs: np.ndarray, order: int = 0) -> np.ndarray:
        return power_derivative_array(self.base, self.alpha, order, xs)

    @property
    def max_exact_derivative(self) -> float:
        return max_exact_derivative(self.base)


@dataclass(frozen=True)
class FlatnessConstant:
    """Largest a with (e^a - 1) + a**beta / strict_floor(beta)! <= 1/2."""

    beta: float
    a: float
    residual: float

    def to_json(self) -> dict:
        return {"beta": self.beta, "a": self.a, "residual": self.residual}


def _residual(a: float, beta: float, fact: float) -> float:
    return math.expm1(a) + a**beta / fact - 0.5


@lru_cache(maxsize=None)
def flatness_constant(beta: float) -> FlatnessConstant:
    """Bisection for the local-stability radius scale a(beta), tol 1e-12.

    The residual is strictly increasing in a, negative at a -> 0+ and
    above 1/2 at a = 2, so the bracket always contains the root.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    fact = float(math.factorial(max(strict_floor(beta), 0)))
    lo, hi = 1e-15, 2.0
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if _residual(mid, beta, fact) <= 0:
            lo = mid
        else:
            hi = mid
    return FlatnessConstant(beta=beta, a=lo, residual=_residual(lo, beta, fact))


def stability_radius(f, beta: float, x: float, norm: float) -> float:
    """Neighbourhood radius a(beta) * (f(x)/norm)**(1/beta); 0 at zeros of f."""
    fx = float(evaluate_array(f, np.array([x]), 0)[0])
    return stability_radius_from_value(fx, beta, norm)


def stability_radius_from_value(fx: float, beta: float, norm: float) -> float:
    if norm <= 0:
        raise ValueError("norm must be positive")
    if fx <= 0:
        return 0.0
    return flatness_constant(beta).a * (fx / norm) ** (1.0 / beta)


@dataclass
class BoundCheck:
    lhs: float
    rhs: float
    ratio: float
    ok: bool


def derivative_bound_check(
    f, alpha: float, beta: float, k: int, x: float, norm: float, budget: float = 1e4
) -> BoundCheck:
    """Compare |d^k (f**alpha)| against norm**(k/beta) * f(x)**(alpha - k/beta).

    ``ok`` flags lhs <= budget * rhs; the measured ratio is always
    reported so budgets stay auditable.
    """
    if not 0 <= k < beta:
        raise ValueError(f"need 0 <= k < beta, got k={k}, beta={beta}")
    fx = float(evaluate_array(f, np.array([x]), 0)[0])
    if k > 0 and fx <= 0:
        raise SingularPoint(f"f({x}) = 0")
    lhs = abs(power_derivative(f, alpha, k, x))
    rhs = norm ** (k / beta) * fx ** (alpha - k / beta)
    ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf)
    return BoundCheck(lhs=lhs, rhs=rhs, ratio=ratio, ok=lhs <= budget * rhs)


@dataclass
class RootIncrement:
    lhs: float
    rhs_scale: float


def local_root_holder(
    f,
    alpha: float,
    beta: float,
    x: float,
    y: float,
    holder_semi: float | None = None,
    flat_semi: float | None = None,
    J: int = 12,
) -> RootIncrement:
    """Increment of the strict_floor(beta)-th derivative of f**alpha at (x, y).

    ``rhs_scale`` is the locally weighted Hoelder scale
    (holder_semi + flat_semi) * |x-y|**(beta-k) / min(f(x), f(y))**(1-alpha);
    callers sweep pairs and assert the ratio lhs/rhs_scale stays bounded.
    Seminorms are computed at level J when not supplied.
    """
    from . import holder_analysis  # local import, no cycle at module load

    fx = float(evaluate_array(f, np.array([x]), 0)[0])
    fy = float(evaluate_array(f, np.array([y]), 0)[0])
    if fx <= 0 or fy <= 0:
        raise SingularPoint("both endpoints must have f > 0")
    k = strict_floor(beta)
    lhs = abs(power_derivative(f, alpha, k, x) - power_derivative(f, alpha, k, y))
    if holder_semi is None:
        holder_semi = holder_analysis.holder_seminorm(f, beta, J).value
    if flat_semi is None:
        flat_semi = holder_analysis.flatness_seminorm(f, beta, J).value
    rhs_scale = (
        (holder_semi + flat_semi)
        * abs(x - y) ** (beta - k)
        / min(fx, fy) ** (1.0 - alpha)
    )
    return RootIncrement(lhs=lhs, rhs_scale=rhs_scale)


def critical_level(f, beta: float, x0: float, support_length: float, norm: float):
    """Smallest level j with 2**j >= support_length / a(beta) * (norm/f(x0))**(1/beta).

    Coarser wavelets at x0 are too wide for the local-value coefficient
    bound.  Returns math.inf (unbounded) when f(x0) == 0.
    """
    fx0 = float(evaluate_array(f, np.array([x0]), 0)[0])
    if fx0 <= 0:
        return math.inf
    a = flatness_constant(beta).a
    target = support_length / a * (norm / fx0) ** (1.0 / beta)
    return max(0, math.ceil(math.log2(target)))
