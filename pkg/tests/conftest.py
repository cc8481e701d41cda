"""Shared oracles and strategies for the test suite.

The finite-difference oracle evaluates function formulas in high-precision
arithmetic: float64 central differences at the working step cannot resolve
fourth derivatives (roundoff eps/h**4 swamps the signal), so the oracle
must not share the package's evaluation path anyway.
"""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import strategies as st

from holdercone.function_model import (
    AffinePlus,
    Constant,
    FlatFamily,
    Power,
    Product,
    ScaledSum,
    ShiftedSquare,
)

FD_STEP = 2.0**-14


def mp_value(spec, x):
    """Evaluate a function spec at x in mpmath arithmetic (order 0 only)."""
    if isinstance(spec, Power):
        return mp.power(x, spec.gamma) if x != 0 else mp.mpf(0) ** mp.mpf(spec.gamma)
    if isinstance(spec, AffinePlus):
        return mp.mpf(x) + mp.mpf(spec.q)
    if isinstance(spec, Constant):
        return mp.mpf(spec.c)
    if isinstance(spec, ShiftedSquare):
        return (mp.mpf(x) - mp.mpf(spec.x0)) ** 2
    if isinstance(spec, FlatFamily):
        b, d = mp.mpf(spec.beta), mp.mpf(spec.delta)
        out = mp.power(x, b) if x != 0 else mp.mpf(0)
        if spec.delta > 0:
            out += mp.power(d, b - 2) * mp.mpf(x) ** 2 + mp.power(d, b)
        return out
    if isinstance(spec, ScaledSum):
        return mp.fsum(mp.mpf(c) * mp_value(s, x) for c, s in spec.terms)
    if isinstance(spec, Product):
        return mp_value(spec.left, x) * mp_value(spec.right, x)
    raise TypeError(f"no mp evaluator for {type(spec).__name__}")


def fd_root_derivative(spec, alpha, k, x, step=FD_STEP, dps=60):
    """k-th central difference of f(x)**alpha in mpmath arithmetic."""
    with mp.workdps(dps):
        h = mp.mpf(step)
        acc = mp.mpf(0)
        for i in range(k + 1):
            node = mp.mpf(x) + (mp.mpf(k) / 2 - i) * h
            acc += (-1) ** i * mp.binomial(k, i) * mp_value(spec, node) ** mp.mpf(alpha)
        return float(acc / h**k)


def fd_derivative_float64(values_fn, x, step):
    """Plain first-order symmetric difference in float64."""
    return (values_fn(x + step) - values_fn(x - step)) / (2.0 * step)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


# families with finite flatness seminorm at the paired smoothness index
def cone_member_and_beta(rng):
    beta = float(rng.choice([1.5, 2.0, 2.5, 3.0]))
    kind = rng.integers(0, 5)
    if kind == 0:
        return Constant(c=float(rng.uniform(0.0, 3.0))), beta
    if kind == 1:
        return AffinePlus(q=float(rng.uniform(0.1, 2.0))), beta
    if kind == 2:
        gamma = float(rng.integers(math.ceil(beta), 6))
        return Power(gamma=gamma), beta
    if kind == 3:
        b0 = float(rng.uniform(max(2.0, beta), 6.0))
        return FlatFamily(beta=b0, delta=float(rng.uniform(0.0, 0.4))), beta
    return (
        ScaledSum(
            terms=(
                (float(rng.uniform(0.1, 2.0)), ShiftedSquare(x0=float(rng.uniform(0, 1)))),
                (1.0, Constant(c=float(rng.uniform(0.05, 1.0)))),
            )
        ),
        beta,
    )


positive_scalars = st.floats(min_value=0.01, max_value=100.0, allow_nan=False)
interior_points = st.floats(min_value=0.05, max_value=0.95)
