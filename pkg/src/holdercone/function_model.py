"""Function families on [0,1] with exact derivatives and dyadic sampling.

Every family evaluates to a finite non-negative value at order 0 (derivative
orders may take any sign).  Composite families (``ScaledSum``, ``Product``)
inherit that guarantee only when their constituents provide it; sums produced
by :func:`antiderivative` always do.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import (
    DomainError,
    OrderUnavailable,
    ResolutionError,
    UnsupportedFamily,
)

MAX_GRID_LEVEL = 24
_DOMAIN_SLACK = 1e-12


def strict_floor(beta: float) -> int:
    """Largest integer strictly smaller than ``beta``.

    Differs from ``math.floor`` at integers: ``strict_floor(2.0) == 1``.
    Every smoothness index in this package uses this convention; inlining
    ``floor`` silently corrupts the integer-index formulas.
    """
    if beta <= 0:
        raise ValueError(f"smoothness index must be positive, got {beta}")
    return math.ceil(beta) - 1


def _falling_coeff(gamma: float, order: int) -> float:
    # gamma * (gamma-1) * ... * (gamma-order+1), running product
    c = 1.0
    for r in range(order):
        c *= gamma - r
    return c


def _power_term(xs: np.ndarray, coeff: float, exponent: float) -> np.ndarray:
    """coeff * xs**exponent with explicit handling of x == 0."""
    if coeff == 0.0:
        return np.zeros_like(xs)
    out = np.empty_like(xs)
    zero = xs == 0.0
    nz = ~zero
    out[nz] = coeff * np.power(xs[nz], exponent)
    if exponent > 0:
        out[zero] = 0.0
    elif exponent == 0:
        out[zero] = coeff
    else:
        out[zero] = math.copysign(math.inf, coeff)
    return out


@dataclass(frozen=True)
class GridFunction:
    """Samples of a function at the 2**level + 1 dyadic nodes i * 2**-level."""

    level: int
    values: tuple

    def __post_init__(self):
        if not (0 <= self.level <= MAX_GRID_LEVEL):
            raise ResolutionError(f"grid level {self.level} outside [0, {MAX_GRID_LEVEL}]")
        vals = tuple(float(v) for v in self.values)
        if len(vals) != 2**self.level + 1:
            raise ValueError(
                f"expected {2**self.level + 1} values at level {self.level}, got {len(vals)}"
            )
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("grid values must be finite")
        object.__setattr__(self, "values", vals)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    @property
    def xs(self) -> np.ndarray:
        return np.arange(2**self.level + 1) * 2.0**-self.level

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("x,value\n")
            for x, v in zip(self.xs, self.values):
                fh.write(f"{format(x, '.17g')},{format(v, '.17g')}\n")

    @classmethod
    def from_csv(cls, path) -> "GridFunction":
        with open(path) as fh:
            header = fh.readline().strip()
            if header != "x,value":
                raise ValueError(f"expected header 'x,value', got {header!r}")
            vals = [float(line.split(",")[1]) for line in fh if line.strip()]
        level = int(round(math.log2(len(vals) - 1))) if len(vals) > 1 else 0
        return cls(level=level, values=tuple(vals))


@dataclass(frozen=True)
class Power:
    """x**gamma for gamma > 0."""

    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")


@dataclass(frozen=True)
class AffinePlus:
    """x + q for q > 0."""

    q: float

    def __post_init__(self):
        if not self.q > 0:
            raise ValueError("q must be positive")


@dataclass(frozen=True)
class Constant:
    """Constant c >= 0."""

    c: float

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("c must be non-negative")


@dataclass(frozen=True)
class ShiftedSquare:
    """(x - x0)**2 with x0 in [0,1]."""

    x0: float

    def __post_init__(self):
        if not 0.0 <= self.x0 <= 1.0:
            raise ValueError("x0 must lie in [0,1]")


@dataclass(frozen=True)
class FlatFamily:
    """x**beta + delta**(beta-2)*x**2 + delta**beta.

    Requires beta >= 2 so the quadratic coefficient is monotone in delta;
    delta == 0 degenerates to the pure power x**beta.
    """

    beta: float
    delta: float

    def __post_init__(self):
        if not self.beta >= 2:
            raise ValueError("beta must be >= 2")
        if self.delta < 0:
            raise ValueError("delta must be non-negative")


@dataclass(frozen=True)
class ScaledSum:
    """Linear combination sum(coeff_i * spec_i).

    Coefficients may be negative (antiderivatives of shifted squares need
    them); keeping the represented function non-negative on [0,1] is then
    the constructor's responsibility.
    """

    terms: tuple

    def __post_init__(self):
        terms = tuple((float(c), s) for c, s in self.terms)
        if not terms:
            raise ValueError("ScaledSum needs at least one term")
        object.__setattr__(self, "terms", terms)


@dataclass(frozen=True)
class Product:
    """Pointwise product of two families, derivatives via the Leibniz rule."""

    left: "FunctionSpec"
    right: "FunctionSpec"


@dataclass(frozen=True)
class TabulatedGrid:
    """Function known only through dyadic samples.

    Order 0 interpolates linearly between nodes (exact at nodes); orders
    1..4 use repeated second-order central differences with one-sided
    stencils at the endpoints.
    """

    grid: GridFunction


FunctionSpec = Union[
    Power, AffinePlus, Constant, ShiftedSquare, FlatFamily, ScaledSum, Product, TabulatedGrid
]

_CLOSED_FORM = (Power, AffinePlus, Constant, ShiftedSquare, FlatFamily, ScaledSum, Product)


def max_exact_derivative(spec) -> float:
    """Highest derivative order available for ``spec`` (may be inf)."""
    if isinstance(spec, Power):
        g = spec.gamma
        return math.inf if g == int(g) else math.ceil(g)
    if isinstance(spec, (AffinePlus, Constant, ShiftedSquare)):
        return math.inf
    if isinstance(spec, FlatFamily):
        b = spec.beta
        return math.inf if b == int(b) else math.ceil(b)
    if isinstance(spec, ScaledSum):
        return min(max_exact_derivative(s) for _, s in spec.terms)
    if isinstance(spec, Product):
        return min(max_exact_derivative(spec.left), max_exact_derivative(spec.right))
    if isinstance(spec, TabulatedGrid):
        return 4
    if hasattr(spec, "max_exact_derivative"):
        return spec.max_exact_derivative
    raise UnsupportedFamily(f"unknown family {type(spec).__name__}")


def _tabulated_derivative(grid: GridFunction, order: int) -> np.ndarray:
    vals = grid.array
    step = 2.0**-grid.level
    for _ in range(order):
        vals = np.gradient(vals, step)
    return vals


def evaluate_array(spec, xs: np.ndarray, order: int = 0, domain=(0.0, 1.0)) -> np.ndarray:
    """Evaluate the order-th derivative of ``spec`` at the points ``xs``.

    ``domain`` widens the admissible evaluation window for the families
    whose formulas extend naturally (used by the flatness-of-extensions
    check); the default enforces [0,1].
    """
    xs = np.asarray(xs, dtype=float)
    if order < 0:
        raise ValueError("order must be >= 0")
    lo, hi = domain
    if xs.size and (xs.min() < lo - _DOMAIN_SLACK or xs.max() > hi + _DOMAIN_SLACK):
        bad = xs[(xs < lo - _DOMAIN_SLACK) | (xs > hi + _DOMAIN_SLACK)][0]
        raise DomainError(f"evaluation point {bad} outside [{lo}, {hi}]")
    xs = np.clip(xs, lo, hi)

    if isinstance(spec, _CLOSED_FORM) and order > max_exact_derivative(spec):
        raise OrderUnavailable(
            f"order {order} unavailable for {type(spec).__name__} "
            f"(max {max_exact_derivative(spec)})"
        )

    if isinstance(spec, Power):
        return _power_term(xs, _falling_coeff(spec.gamma, order), spec.gamma - order)
    if isinstance(spec, AffinePlus):
        if order == 0:
            return xs + spec.q
        if order == 1:
            return np.ones_like(xs)
        return np.zeros_like(xs)
    if isinstance(spec, Constant):
        return np.full_like(xs, spec.c) if order == 0 else np.zeros_like(xs)
    if isinstance(spec, ShiftedSquare):
        u = xs - spec.x0
        if order == 0:
            return u * u
        if order == 1:
            return 2.0 * u
        if order == 2:
            return np.full_like(xs, 2.0)
        return np.zeros_like(xs)
    if isinstance(spec, FlatFamily):
        b, d = spec.beta, spec.delta
        out = _power_term(xs, _falling_coeff(b, order), b - order)
        if d > 0:
            quad = d ** (b - 2)
            if order == 0:
                out = out + quad * xs * xs + d**b
            elif order == 1:
                out = out + 2.0 * quad * xs
            elif order == 2:
                out = out + 2.0 * quad
        return out
    if isinstance(spec, ScaledSum):
        out = np.zeros_like(xs)
        for c, s in spec.terms:
            out = out + c * evaluate_array(s, xs, order, domain)
        return out
    if isinstance(spec, Product):
        out = np.zeros_like(xs)
        for r in range(order + 1):
            out = out + math.comb(order, r) * evaluate_array(
                spec.left, xs, r, domain
            ) * evaluate_array(spec.right, xs, order - r, domain)
        return out
    if isinstance(spec, TabulatedGrid):
        if order > 4:
            raise OrderUnavailable("tabulated grids support derivatives up to order 4")
        nodes = spec.grid.xs
        vals = spec.grid.array if order == 0 else _tabulated_derivative(spec.grid, order)
        return np.interp(xs, nodes, vals)
    if hasattr(spec, "evaluate_array"):
        return spec.evaluate_array(xs, order)
    raise UnsupportedFamily(f"unknown family {type(spec).__name__}")


def evaluate(spec, x: float, order: int = 0) -> float:
    """Scalar wrapper around :func:`evaluate_array`."""
    return float(evaluate_array(spec, np.array([x]), order)[0])


def sample(spec, J: int) -> GridFunction:
    """Evaluate ``spec`` at the 2**J + 1 dyadic nodes of level J."""
    if not (0 <= J <= MAX_GRID_LEVEL):
        raise ResolutionError(f"grid level {J} outside [0, {MAX_GRID_LEVEL}]")
    xs = np.arange(2**J + 1) * 2.0**-J
    return GridFunction(level=J, values=tuple(evaluate_array(spec, xs, 0)))


def antiderivative(spec) -> FunctionSpec:
    """Exact antiderivative G with G(0) = 0 and G' = spec.

    Only defined for the closed-form families; tabulated grids should use
    :func:`grid_antiderivative` (cumulative trapezoid, O(2**-2J) error).
    """
    if isinstance(spec, Power):
        g = spec.gamma
        return ScaledSum(terms=((1.0 / (g + 1.0), Power(gamma=g + 1.0)),))
    if isinstance(spec, AffinePlus):
        return ScaledSum(terms=((0.5, Power(gamma=2.0)), (spec.q, Power(gamma=1.0))))
    if isinstance(spec, Constant):
        if spec.c == 0:
            return Constant(c=0.0)
        if spec.c == 1:
            return Power(gamma=1.0)
        return ScaledSum(terms=((spec.c, Power(gamma=1.0)),))
    if isinstance(spec, ShiftedSquare):
        # integral of (u - x0)^2 from 0 to x: x^3/3 - x0 x^2 + x0^2 x
        x0 = spec.x0
        terms = [(1.0 / 3.0, Power(gamma=3.0))]
        if x0 != 0:
            terms.append((-x0, Power(gamma=2.0)))
            terms.append((x0 * x0, Power(gamma=1.0)))
        return ScaledSum(terms=tuple(terms))
    if isinstance(spec, FlatFamily):
        b, d = spec.beta, spec.delta
        terms = [(1.0 / (b + 1.0), Power(gamma=b + 1.0))]
        if d > 0:
            terms.append((d ** (b - 2) / 3.0, Power(gamma=3.0)))
            terms.append((d**b, Power(gamma=1.0)))
        return ScaledSum(terms=tuple(terms))
    if isinstance(spec, ScaledSum):
        return ScaledSum(terms=tuple((c, antiderivative(s)) for c, s in spec.terms))
    raise UnsupportedFamily(
        f"no closed-form antiderivative for {type(spec).__name__}; "
        "use grid_antiderivative for tabulated data"
    )


def grid_antiderivative(grid: GridFunction) -> GridFunction:
    """Cumulative-trapezoid antiderivative on the same grid.

    Carries the quadrature error of the trapezoid rule, O(2**-2J) for
    twice-differentiable integrands.
    """
    vals = grid.array
    step = 2.0**-grid.level
    cum = np.concatenate(([0.0], np.cumsum(0.5 * (vals[1:] + vals[:-1]) * step)))
    return GridFunction(level=grid.level, values=tuple(cum))


_FAMILY_TAGS = {
    Power: "power",
    AffinePlus: "affine_plus",
    Constant: "constant",
    ShiftedSquare: "shifted_square",
    FlatFamily: "flat_family",
    ScaledSum: "scaled_sum",
    Product: "product",
    TabulatedGrid: "tabulated_grid",
}


def spec_to_json(spec) -> dict:
    """JSON-ready dict for a FunctionSpec, e.g. {"family": "power", "gamma": 2.0}."""
    if isinstance(spec, Power):
        return {"family": "power", "gamma": spec.gamma}
    if isinstance(spec, AffinePlus):
        return {"family": "affine_plus", "q": spec.q}
    if isinstance(spec, Constant):
        return {"family": "constant", "c": spec.c}
    if isinstance(spec, ShiftedSquare):
        return {"family": "shifted_square", "x0": spec.x0}
    if isinstance(spec, FlatFamily):
        return {"family": "flat_family", "beta": spec.beta, "delta": spec.delta}
    if isinstance(spec, ScaledSum):
        return {
            "family": "scaled_sum",
            "terms": [{"coeff": c, "spec": spec_to_json(s)} for c, s in spec.terms],
        }
    if isinstance(spec, Product):
        return {
            "family": "product",
            "left": spec_to_json(spec.left),
            "right": spec_to_json(spec.right),
        }
    if isinstance(spec, TabulatedGrid):
        return {
            "family": "tabulated_grid",
            "level": spec.grid.level,
            "values": list(spec.grid.values),
        }
    raise UnsupportedFamily(f"cannot serialize {type(spec).__name__}")


def spec_from_json(obj) -> FunctionSpec:
    """Inverse of :func:`spec_to_json`; accepts a dict or a JSON string."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "family" not in obj:
        raise ValueError("function spec must be an object with a 'family' key")
    fam = obj["family"]
    try:
        if fam == "power":
            return Power(gamma=float(obj["gamma"]))
        if fam == "affine_plus":
            return AffinePlus(q=float(obj["q"]))
        if fam == "constant":
            return Constant(c=float(obj["c"]))
        if fam == "shifted_square":
            return ShiftedSquare(x0=float(obj["x0"]))
        if fam == "flat_family":
            return FlatFamily(beta=float(obj["beta"]), delta=float(obj["delta"]))
        if fam == "scaled_sum":
            return ScaledSum(
                terms=tuple(
                    (float(t["coeff"]), spec_from_json(t["spec"])) for t in obj["terms"]
                )
            )
        if fam == "product":
            return Product(left=spec_from_json(obj["left"]), right=spec_from_json(obj["right"]))
        if fam == "tabulated_grid":
            return TabulatedGrid(
                grid=GridFunction(level=int(obj["level"]), values=tuple(obj["values"]))
            )
    except KeyError as exc:
        raise ValueError(f"missing field {exc} for family {fam!r}") from exc
    raise ValueError(f"unknown family {fam!r}")
