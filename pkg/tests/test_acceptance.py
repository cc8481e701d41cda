"""Acceptance criteria, one test per criterion, with stated tolerances.

Each test prints a single pass line with its runtime; tolerance and
runtime bounds are asserted, not just reported.
"""

import json
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from conftest import cone_member_and_beta, fd_root_derivative
from holdercone.cli import main
from holdercone.function_model import (
    AffinePlus,
    Constant,
    FlatFamily,
    GridFunction,
    Power,
    Product,
    ScaledSum,
    ShiftedSquare,
    evaluate_array,
    sample,
)
from holdercone.holder_analysis import (
    dyadic_points,
    flat_norm,
    flatness_seminorm,
    pair_sup,
)
from holdercone.root_calculus import flatness_constant, power_derivative
from holdercone.wavelet_engine import (
    besov_norm_estimate,
    build_basis,
    decay_fit,
    decompose,
    prop_decay_check,
    reconstruct,
    synthesize_unit,
)


@contextmanager
def budgeted(name, seconds):
    t0 = time.perf_counter()
    yield
    elapsed = time.perf_counter() - t0
    print(f"[acceptance] {name}: PASS ({elapsed:.2f}s < {seconds}s)")
    assert elapsed < seconds, f"{name} exceeded its runtime budget: {elapsed:.2f}s"


def test_01_closed_form_seminorm():
    with budgeted("01 closed-form seminorm", 1.0):
        value = flatness_seminorm(AffinePlus(q=0.5), 2.0, 14).value
        assert value == pytest.approx(2.0, abs=1e-4)


def test_02_membership_iff():
    with budgeted("02 membership iff", 5.0):
        for gamma in (1.0, 2.0, 3.0):
            for beta in (1.5, 2.0, 2.5, 3.0):
                value = flatness_seminorm(Power(gamma=gamma), beta, 12).value
                if beta <= gamma:
                    assert math.isfinite(value), (gamma, beta)
                else:
                    assert math.isinf(value), (gamma, beta)


def test_03_cone_algebra_fuzz():
    with budgeted("03 cone algebra fuzz", 60.0):
        rng = np.random.default_rng(3)
        J = 8
        for _ in range(1000):
            f, beta = cone_member_and_beta(rng)
            g, _ = cone_member_and_beta(rng)
            sf = flatness_seminorm(f, beta, J).value
            sg = flatness_seminorm(g, beta, J).value
            ssum = flatness_seminorm(ScaledSum(terms=((1.0, f), (1.0, g))), beta, J).value
            assert ssum <= sf + sg + 1e-9

            lam = float(rng.uniform(0.1, 10.0))
            scaled = flatness_seminorm(ScaledSum(terms=((lam, f),)), beta, J).value
            assert abs(scaled - lam * sf) <= 1e-9 * max(1.0, lam * sf)

            nf, ng = flat_norm(f, beta, J), flat_norm(g, beta, J)
            nfg = flat_norm(Product(left=f, right=g), beta, J)
            assert nfg <= 2.0 ** (beta + 2) * nf * ng + 1e-9


def test_04_auto_flatness_constant():
    with budgeted("04 auto-flatness constant", 30.0):
        rng = np.random.default_rng(4)
        J = 10
        step = 2.0**-J
        xs_ext = -1.0 + np.arange(3 * 2**J + 1) * step
        for _ in range(50):
            terms = [
                (
                    float(rng.uniform(0.1, 3.0)),
                    ShiftedSquare(x0=float(rng.uniform(0.0, 1.0))),
                )
                for _ in range(int(rng.integers(1, 3)))
            ]
            terms.append((1.0, Constant(c=float(rng.uniform(0.0, 1.0)))))
            f = ScaledSum(terms=tuple(terms))
            beta = float(rng.uniform(1.05, 2.0))
            vals = evaluate_array(f, xs_ext, 0, domain=(-1.0, 2.0))
            assert float(np.min(vals)) >= 0.0
            d1 = evaluate_array(f, xs_ext, 1, domain=(-1.0, 2.0))
            holder_ext, _ = pair_sup(d1, step, beta - 1.0)
            semi = flatness_seminorm(f, beta, J).value
            if holder_ext == 0.0:
                assert semi == 0.0
            else:
                assert semi / holder_ext <= 2.0**beta + 1e-9


def test_05_chain_rule_oracle_equivalence():
    with budgeted("05 chain-rule oracle equivalence", 10.0):
        rng = np.random.default_rng(5)
        pool = [
            AffinePlus(q=0.8),
            AffinePlus(q=0.3),
            FlatFamily(beta=4.0, delta=0.3),
            FlatFamily(beta=5.0, delta=0.2),
            Power(gamma=4.0),
            Power(gamma=5.0),
        ]
        for _ in range(500):
            spec = pool[rng.integers(0, len(pool))]
            alpha = float(rng.uniform(0.1, 1.0))
            k = int(rng.integers(1, 5))
            x = float(rng.uniform(0.45, 0.9))
            got = power_derivative(spec, alpha, k, x)
            want = fd_root_derivative(spec, alpha, k, x)
            assert abs(got - want) <= 1e-5 * max(abs(want), 1e-4), (spec, alpha, k, x)


def test_06_local_stability_exhaustive():
    with budgeted("06 local stability exhaustive", 10.0):
        J = 14
        xs = dyadic_points(J)
        for delta in (0.05, 0.1, 0.2):
            f = FlatFamily(beta=4.0, delta=delta)
            norm = flat_norm(f, 4.0, J)
            f0 = evaluate_array(f, xs, 0)
            a = flatness_constant(4.0).a
            radii = a * (f0 / norm) ** 0.25
            violations = 0
            for sign in (1.0, -1.0):
                ys = np.clip(xs + sign * radii, 0.0, 1.0)
                fy = evaluate_array(f, ys, 0)
                violations += int(np.sum(np.abs(fy - f0) > 0.5 * f0 + 1e-12))
            assert violations == 0, delta


def test_07_main_theorem_decay():
    with budgeted("07 main-theorem decay", 30.0):
        basis = build_basis(4)
        ratios = []
        for delta in (0.02, 0.05, 0.1, 0.2):
            f = FlatFamily(beta=4.0, delta=delta)
            grid = sample(f, 14)
            root = GridFunction(level=14, values=tuple(np.sqrt(np.asarray(grid.values))))
            dec = decompose(root, basis, 4)
            fit = decay_fit(dec, 4, 11, interior_only=True)
            assert fit.regularity_estimate >= 1.8, delta
            norm = flat_norm(f, 4.0, 14)
            ratios.append(besov_norm_estimate(dec, 2.0) / math.sqrt(norm))
        mean = sum(ratios) / len(ratios)
        assert all(0.75 * mean <= r <= 1.25 * mean for r in ratios), ratios


def test_08_necessity_counterexample():
    with budgeted("08 necessity counterexample", 10.0):
        grid = sample(ShiftedSquare(x0=0.5), 14)
        root = GridFunction(level=14, values=tuple(np.sqrt(np.asarray(grid.values))))
        dec = decompose(root, build_basis(4), 4)
        fit = decay_fit(dec, 4, 11, interior_only=True)
        assert 0.85 <= fit.regularity_estimate <= 1.2


def test_09_wavelet_infrastructure():
    with budgeted("09 wavelet infrastructure", 10.0):
        rng = np.random.default_rng(9)
        # perfect reconstruction
        vals = rng.uniform(0, 1, size=2**12 + 1)
        vals[-1] = vals[0]
        g = GridFunction(level=12, values=tuple(vals))
        for S in (1, 2, 4, 8):
            dec = decompose(g, build_basis(S), 4)
            rec = reconstruct(dec)
            assert np.max(np.abs(rec - np.asarray(vals)[:-1])) < 1e-10
        # vanishing moments on degree S-1 polynomials
        xs = dyadic_points(12)
        for S in (2, 3, 4):
            poly = sum(rng.uniform(-1, 1) * xs**p for p in range(S))
            dec = decompose(GridFunction(level=12, values=tuple(poly)), build_basis(S), 4)
            scale = max(float(np.max(np.abs(poly))), 1.0)
            for j in dec.levels:
                interior = np.abs(dec.detail_coeffs[j][dec.interior_mask[j]])
                if interior.size:
                    assert float(np.max(interior)) < 1e-9 * scale
        # orthonormality of synthesized vectors at a small level
        template = decompose(sample(Constant(c=1), 10), build_basis(3), 4)
        vecs = np.stack([synthesize_unit(template, 6, k) for k in range(64)])
        gram = vecs @ vecs.T * 2.0**-10
        assert np.max(np.abs(gram - np.eye(64))) < 1e-8


def test_10_proposition_bounds():
    with budgeted("10 proposition bounds", 30.0):
        basis = build_basis(4)
        rep = prop_decay_check(FlatFamily(beta=4.0, delta=0.2), 0.5, 4.0, basis, 14, x0=0.9)
        glob = rep.ratios
        assert all(math.isfinite(r) for r in glob)
        assert max(glob) <= 2.0 * glob[0], "global ratios grow beyond 2x the first level"
        loc = rep.details["local_ratios"]
        assert all(math.isfinite(r) for r in loc)
        assert max(loc) <= 2.0 * loc[0], "local ratios grow beyond 2x the first level"
        jc = rep.details["critical_level"]
        assert rep.details["local_levels"][0] == max(4, jc)
        # maxima stay finite across the canonical delta sweep
        for delta in (0.05, 0.1):
            r = prop_decay_check(FlatFamily(beta=4.0, delta=delta), 0.5, 4.0, basis, 14, x0=0.9)
            assert math.isfinite(r.max_ratio)
            assert math.isfinite(r.details["local_max_ratio"])


def test_11_suite_determinism(tmp_path):
    with budgeted("11 suite determinism", 180.0):
        d1, d2 = tmp_path / "run1", tmp_path / "run2"
        assert main(["suite", "--out", str(d1)]) == 0
        assert main(["suite", "--out", str(d2)]) == 0
        b1 = (d1 / "suite_report.json").read_bytes()
        b2 = (d2 / "suite_report.json").read_bytes()
        assert b1 == b2
        reports = json.loads(b1)
        fx = [
            r
            for r in reports
            if r["claim_id"] == "FxFxRel" and r["family"] == "constant_1"
        ]
        assert fx and fx[0]["verdict"] == "fail" and fx[0]["allow_listed"] is True
