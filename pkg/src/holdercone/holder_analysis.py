"""Grid approximations of Hoelder seminorms and the flatness seminorm.

All sups are taken over dyadic grids, so every reported value is a lower
bound for the continuum quantity; results carry their grid level and are
monotone under refinement J -> J+2 by construction of the pair sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NegativityError
from .function_model import evaluate_array, strict_floor

# values of f below this are treated as exact zeros (underflow guard)
F_ZERO = 1e-300
# grid values of f may dip this far below zero before we refuse
NEGATIVITY_TOL = -1e-12
# full pair sweep up to this many nodes; beyond, small lags plus a stride-4
# global lag set (keeps nested-grid monotonicity and covers max separation)
_FULL_PAIR_NODES = 2**12 + 1
_SMALL_LAG = 1024
_GLOBAL_LAG_STRIDE = 4


@dataclass
class SeminormResult:
    """A computed seminorm value with its per-order breakdown and witnesses.

    ``value`` is the max over ``per_order`` (flatness) or the pair sup
    (Hoelder); ``witness`` holds (order, x) or (x, y) locations attaining it.
    """

    value: float
    per_order: dict
    witness: list
    grid_level: int

    def to_json(self) -> dict:
        def enc(v):
            return "inf" if math.isinf(v) else v

        return {
            "value": enc(self.value),
            "per_order": {str(j): enc(v) for j, v in self.per_order.items()},
            "witness": [list(w) for w in self.witness],
            "grid_level": self.grid_level,
        }


@dataclass
class MembershipReport:
    member: bool
    violating_points: list
    seminorm: SeminormResult
    holder_finite: bool
    kappa_budget: float

    def to_json(self) -> dict:
        return {
            "member": self.member,
            "violating_points": [list(p) for p in self.violating_points],
            "seminorm": self.seminorm.to_json(),
            "holder_finite": self.holder_finite,
            "kappa_budget": "inf" if math.isinf(self.kappa_budget) else self.kappa_budget,
        }


def dyadic_points(J: int) -> np.ndarray:
    return np.arange(2**J + 1) * 2.0**-J


def _lag_set(n_nodes: int) -> range | list:
    max_lag = n_nodes - 1
    if n_nodes <= _FULL_PAIR_NODES:
        return range(1, max_lag + 1)
    lags = list(range(1, _SMALL_LAG + 1))
    # smallest stride multiple strictly above the dense range
    start = _SMALL_LAG + _GLOBAL_LAG_STRIDE - _SMALL_LAG % _GLOBAL_LAG_STRIDE
    lags.extend(range(start, max_lag + 1, _GLOBAL_LAG_STRIDE))
    if lags[-1] != max_lag:
        lags.append(max_lag)
    return lags


def pair_sup(values: np.ndarray, step: float, holder_exp: float):
    """sup over node pairs of |v_i - v_j| / |x_i - x_j|**holder_exp.

    Returns (sup, (i, j)) with the first maximizer in left-to-right order
    (smallest i, then smallest separation).
    """
    best = 0.0
    best_pair = (0, 0)
    for lag in _lag_set(len(values)):
        diffs = np.abs(values[lag:] - values[:-lag])
        # inf - inf pairs carry no information
        if np.isnan(diffs).any():
            diffs = np.nan_to_num(diffs, nan=0.0, posinf=np.inf)
        i = int(np.argmax(diffs))
        m = float(diffs[i]) / (lag * step) ** holder_exp
        if m > best or (m == best and m > 0 and i < best_pair[0]):
            best = m
            best_pair = (i, i + lag)
    return best, best_pair


def holder_seminorm(f, beta: float, J: int) -> SeminormResult:
    """Grid sup of the increment quotient of the strict_floor(beta)-th derivative."""
    k = strict_floor(beta)
    h = beta - k
    xs = dyadic_points(J)
    dk = evaluate_array(f, xs, k)
    value, (i, j) = pair_sup(dk, 2.0**-J, h)
    return SeminormResult(
        value=value,
        per_order={k: value},
        witness=[(float(xs[i]), float(xs[j]))] if value > 0 else [],
        grid_level=J,
    )


def holder_norm(f, beta: float, J: int) -> float:
    """sup|f| + sup|f^(k)| + increment seminorm, each a grid sup (k = strict_floor)."""
    k = strict_floor(beta)
    xs = dyadic_points(J)
    sup0 = float(np.max(np.abs(evaluate_array(f, xs, 0))))
    supk = float(np.max(np.abs(evaluate_array(f, xs, k))))
    return sup0 + supk + holder_seminorm(f, beta, J).value


def _order_sup(f0, fj, beta, j):
    """(I_j, argmax index, infinite?) for one derivative order, in log space."""
    zero = f0 <= F_ZERO
    nonzero_deriv_at_zero = zero & (np.abs(fj) > F_ZERO)
    if nonzero_deriv_at_zero.any():
        return math.inf, int(np.argmax(nonzero_deriv_at_zero)), True
    pos = ~zero
    if not pos.any():
        return 0.0, 0, False
    with np.errstate(divide="ignore"):
        log_ratio = np.where(
            pos & (np.abs(fj) > F_ZERO),
            (beta * np.log(np.abs(np.where(pos, fj, 1.0)))
             - (beta - j) * np.log(np.where(pos, f0, 1.0))) / j,
            -np.inf,
        )
    i = int(np.argmax(log_ratio))
    lr = log_ratio[i]
    if lr == -np.inf:
        return 0.0, 0, False
    return float(np.exp(lr)), i, False


def flatness_seminorm(f, beta: float, J: int) -> SeminormResult:
    """Smallest kappa in the derivative-flatness condition, as a grid max.

    For each order 1 <= j < beta the contribution is
    I_j = sup_x (|f^(j)(x)|**beta / f(x)**(beta-j)) ** (1/j), with the
    conventions 0/0 := 0 and positive/0 := +inf at zeros of f.  The result
    is 0 for beta <= 1.
    """
    xs = dyadic_points(J)
    f0 = evaluate_array(f, xs, 0)
    if float(np.min(f0)) < NEGATIVITY_TOL:
        i = int(np.argmin(f0))
        raise NegativityError(f"f({xs[i]}) = {f0[i]} < 0")
    f0 = np.maximum(f0, 0.0)

    if beta <= 1:
        return SeminormResult(value=0.0, per_order={}, witness=[], grid_level=J)

    per_order = {}
    best_j, best_i, best_val = None, 0, -math.inf
    for j in range(1, strict_floor(beta) + 1):
        fj = evaluate_array(f, xs, j)
        val, i, _ = _order_sup(f0, fj, beta, j)
        per_order[j] = val
        if val > best_val:
            best_j, best_i, best_val = j, i, val
    value = max(per_order.values())
    witness = [(best_j, float(xs[best_i]))] if value > 0 else []
    return SeminormResult(value=value, per_order=per_order, witness=witness, grid_level=J)


def flat_norm(f, beta: float, J: int) -> float:
    """Hoelder norm plus flatness seminorm; +inf propagates."""
    return holder_norm(f, beta, J) + flatness_seminorm(f, beta, J).value


def membership(f, beta: float, kappa_budget: float, J: int) -> MembershipReport:
    """Check the flatness condition with budget kappa on the grid.

    Member iff the flatness seminorm is <= kappa_budget and all Hoelder
    terms are finite; violating nodes list (order, x) pairs where the
    budgeted inequality fails.
    """
    semi = flatness_seminorm(f, beta, J)
    hol = holder_norm(f, beta, J)
    holder_finite = math.isfinite(hol)

    xs = dyadic_points(J)
    f0 = np.maximum(evaluate_array(f, xs, 0), 0.0)
    violating = []
    if beta > 1:
        with np.errstate(divide="ignore"):
            log_budget = np.log(kappa_budget) if kappa_budget > 0 else -np.inf
            logf0 = np.where(f0 > F_ZERO, np.log(np.where(f0 > F_ZERO, f0, 1.0)), -np.inf)
        for j in range(1, strict_floor(beta) + 1):
            fj = np.abs(evaluate_array(f, xs, j))
            if math.isinf(kappa_budget):
                # any finite budget fails only where f vanishes but f^(j) does not
                bad = (f0 <= F_ZERO) & (fj > F_ZERO)
            else:
                with np.errstate(divide="ignore"):
                    lhs = beta * np.where(
                        fj > F_ZERO, np.log(np.where(fj > F_ZERO, fj, 1.0)), -np.inf
                    )
                bad = lhs > j * log_budget + (beta - j) * logf0 + 1e-12
            for i in np.nonzero(bad)[0]:
                violating.append((j, float(xs[i])))
    # an infinite seminorm never certifies, whatever the budget
    member = semi.value <= kappa_budget and holder_finite and math.isfinite(semi.value)
    return MembershipReport(
        member=member,
        violating_points=violating,
        seminorm=semi,
        holder_finite=holder_finite,
        kappa_budget=kappa_budget,
    )
