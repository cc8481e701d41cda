import json
import math

import pytest

from holdercone import jsonio
from holdercone.errors import ConfigError, ExtensionNotNonnegative
from holdercone.function_model import (
    AffinePlus,
    Constant,
    FlatFamily,
    Power,
    ScaledSum,
    ShiftedSquare,
    spec_to_json,
)
from holdercone.theorem_suite import (
    CLAIM_ORDER,
    SuiteConfig,
    default_config,
    run_suite,
    verify_auto_flatness,
    verify_cone,
    verify_counterexample_cap,
    verify_deriv_bounds,
    verify_integration,
    verify_local_stability,
    verify_main,
    verify_nesting,
    verify_prop_decay,
    verify_root_holder,
    write_suite_outputs,
)
from holdercone.wavelet_engine import build_basis


def by_claim(reports):
    return {r.claim_id: r for r in reports}


def test_verify_main_constant_is_tight():
    reps = by_claim(verify_main(Constant(c=1.0), 0.5, 2.0, build_basis(4), 12, 50.0))
    assert reps["MainTheorem"].verdict == "pass"
    assert reps["MainTheorem"].measured_constant <= 1.0 + 1e-6
    assert reps["EmbeddingSeminorm"].measured_constant == 0.0


def test_verify_main_flat_family_within_budget():
    reps = by_claim(
        verify_main(FlatFamily(beta=4.0, delta=0.1), 0.5, 4.0, build_basis(4), 13, 50.0)
    )
    assert reps["MainTheorem"].verdict == "pass"
    assert reps["EmbeddingSeminorm"].verdict == "pass"


def test_verify_main_infinite_norm_not_applicable():
    reps = verify_main(Power(gamma=1.0), 0.5, 2.0, build_basis(4), 12, 50.0)
    assert all(r.verdict == "not_applicable" for r in reps)


def test_verify_main_constant_stable_across_delta():
    vals = []
    for delta in (0.02, 0.05, 0.1, 0.2):
        reps = by_claim(
            verify_main(FlatFamily(beta=4.0, delta=delta), 0.5, 4.0, build_basis(4), 13, 50.0)
        )
        vals.append(reps["MainTheorem"].measured_constant)
    mean = sum(vals) / len(vals)
    assert all(0.75 * mean <= v <= 1.25 * mean for v in vals)


def test_verify_cone():
    reps = by_claim(verify_cone(Power(gamma=2.0), Power(gamma=3.0), 2.0, 10))
    assert reps["ConeTriangle"].verdict == "pass"
    assert reps["ConeHomogeneity"].verdict == "pass"
    assert reps["ConeHomogeneity"].measured_constant <= 1e-12
    assert reps["ProductBound"].verdict == "pass"
    assert reps["ProductBound"].budget == pytest.approx(16.0)


def test_verify_cone_trivial_pair():
    reps = by_claim(verify_cone(Constant(c=1.0), Constant(c=1.0), 2.0, 8))
    # norms are 1 each, product norm 1
    assert reps["ProductBound"].measured_constant == pytest.approx(1.0, rel=1e-9)


def test_verify_nesting_cases():
    reps = by_claim(verify_nesting(Power(gamma=3.0), 3.0, 2.0, 12))
    assert reps["Nesting_i"].verdict == "pass"
    assert reps["Nesting_ii"].verdict == "pass"  # x^3 vanishes at 0
    assert reps["Nesting_iii"].verdict == "not_applicable"

    reps = by_claim(verify_nesting(Power(gamma=2.0), 2.0, 1.5, 12))
    # seminorm 4 dominates the sup 1
    assert reps["Nesting_ii"].verdict == "pass"
    assert reps["Nesting_ii"].details == {}

    reps = by_claim(verify_nesting(AffinePlus(q=0.5), 2.0, 1.5, 12))
    assert reps["Nesting_ii"].verdict == "not_applicable"
    assert reps["Nesting_iii"].verdict == "pass"
    assert math.isfinite(reps["Nesting_iii"].measured_constant)

    with pytest.raises(ValueError):
        verify_nesting(Power(gamma=2.0), 2.0, 2.5, 10)


def test_verify_auto_flatness():
    bumped = ScaledSum(terms=((1.0, ShiftedSquare(x0=0.5)), (1.0, Constant(c=0.1))))
    (rep,) = verify_auto_flatness(bumped, 2.0, 10)
    assert rep.verdict == "pass"
    assert rep.measured_constant <= 4.0

    (rep,) = verify_auto_flatness(Constant(c=1.0), 2.0, 8)
    assert rep.verdict == "pass" and rep.measured_constant == 0.0

    with pytest.raises(ExtensionNotNonnegative):
        verify_auto_flatness(Power(gamma=1.0), 2.0, 8)
    with pytest.raises(ValueError):
        verify_auto_flatness(Constant(c=1.0), 2.5, 8)


def test_verify_integration():
    reps = by_claim(verify_integration(Power(gamma=2.0), 2.0, 12))
    assert reps["Integration"].verdict == "pass"
    assert math.isfinite(reps["Integration"].measured_constant)
    assert reps["FxFxRel"].verdict == "pass"
    # the value-vs-integral ratio for x^2 is 3a/2 at every positive node
    from holdercone.root_calculus import flatness_constant

    assert reps["FxFxRel"].measured_constant == pytest.approx(
        1.5 * flatness_constant(2.0).a, rel=1e-6
    )


def test_verify_integration_constant_violates_at_origin():
    reps = by_claim(verify_integration(Constant(c=1.0), 2.0, 12))
    assert reps["FxFxRel"].verdict == "fail"
    assert math.isinf(reps["FxFxRel"].measured_constant)
    assert reps["FxFxRel"].witnesses[0][0] == 0.0
    # the antiderivative x leaves the cone one index up
    assert reps["Integration"].verdict == "fail"
    assert math.isinf(reps["Integration"].measured_constant)


def test_verify_integration_zero_function():
    reps = by_claim(verify_integration(Constant(c=0.0), 2.0, 8))
    assert all(r.verdict == "pass" for r in reps.values())
    assert reps["Integration"].measured_constant == 0.0


def test_verify_local_stability():
    (rep,) = verify_local_stability(Constant(c=3.0), 2.0, 10)
    assert rep.verdict == "pass"
    (rep,) = verify_local_stability(FlatFamily(beta=4.0, delta=0.1), 4.0, 12)
    assert rep.verdict == "pass"
    (rep,) = verify_local_stability(AffinePlus(q=0.5), 2.0, 12)
    assert rep.verdict == "pass"


def test_verify_root_holder():
    (rep,) = verify_root_holder(AffinePlus(q=1.0), 0.5, 2.0, 10, epsilon=1.0)
    assert rep.verdict == "pass"
    assert math.isfinite(rep.measured_constant)
    assert rep.details["increment_ratio_max"] >= 0

    (rep,) = verify_root_holder(Power(gamma=2.0), 0.5, 2.0, 10)
    assert rep.verdict == "not_applicable"
    assert "increment_ratio_max" in rep.details

    with pytest.raises(ValueError):
        verify_root_holder(Power(gamma=2.0), 0.5, 2.0, 10, epsilon=0.5)


def test_verify_root_holder_constant_scaling():
    (rep,) = verify_root_holder(Constant(c=4.0), 0.5, 2.0, 8, epsilon=4.0)
    # norm of 2 times sqrt(4) over norm of 4
    assert rep.measured_constant == pytest.approx(1.0, rel=1e-12)


def test_verify_deriv_bounds():
    (rep,) = verify_deriv_bounds(FlatFamily(beta=4.0, delta=0.1), 0.5, 4.0, 12)
    assert rep.verdict == "pass"
    (rep,) = verify_deriv_bounds(Constant(c=1.0), 0.5, 2.0, 8)
    assert rep.measured_constant == 0.0


def test_verify_prop_decay():
    reps = by_claim(
        verify_prop_decay(FlatFamily(beta=4.0, delta=0.2), 0.5, 4.0, 4, 14, 0.9)
    )
    assert reps["PropDecayGlobal"].verdict == "pass"
    assert reps["PropDecayLocal"].verdict == "pass"
    assert reps["PropDecayLocal"].details["critical_level"] == 7
    reps = by_claim(verify_prop_decay(Power(gamma=1.0), 0.5, 2.0, 4, 12, 0.5))
    assert all(r.verdict == "not_applicable" for r in reps.values())


def test_verify_counterexample_cap():
    (rep,) = verify_counterexample_cap(J=14, S=4)
    assert rep.verdict == "pass"
    assert 0.85 <= rep.measured_constant <= 1.2
    assert math.isfinite(rep.details["flatness_at_2"])
    assert math.isinf(rep.details["flatness_at_3"])


def test_default_suite_passes_with_all_claims():
    result = run_suite(default_config())
    assert result.passed
    assert len(result.reports) >= 18
    assert {r.claim_id for r in result.reports} == set(CLAIM_ORDER)
    fx = [r for r in result.reports if r.claim_id == "FxFxRel" and r.family == "constant_1"]
    assert fx and fx[0].verdict == "fail" and fx[0].allow_listed
    na = [r for r in result.reports if r.verdict == "not_applicable"]
    assert any(r.family == "power_1" for r in na)


def test_suite_reports_deterministic():
    r1 = run_suite(default_config())
    r2 = run_suite(default_config())
    blob1 = jsonio.dumps([r.to_json() for r in r1.reports])
    blob2 = jsonio.dumps([r.to_json() for r in r2.reports])
    assert blob1 == blob2


def test_suite_threaded_matches_serial(monkeypatch):
    cfg = default_config()
    serial = run_suite(cfg)
    cfg2 = default_config()
    cfg2.threads = 4
    threaded = run_suite(cfg2)
    assert jsonio.dumps([r.to_json() for r in serial.reports]) == jsonio.dumps(
        [r.to_json() for r in threaded.reports]
    )
    # the environment variable caps the pool
    monkeypatch.setenv("HOLDERCONE_THREADS", "1")
    capped = run_suite(cfg2)
    assert jsonio.dumps([r.to_json() for r in capped.reports]) == jsonio.dumps(
        [r.to_json() for r in serial.reports]
    )


def test_budget_audit_under_refinement():
    base = default_config()
    fine = default_config()
    fine.grid_level = base.grid_level + 2
    fine.wavelet_level = base.wavelet_level + 1
    r_base = {
        (r.claim_id, r.family): r.measured_constant
        for r in run_suite(base).reports
        if r.verdict == "pass" and math.isfinite(r.measured_constant)
    }
    r_fine = {
        (r.claim_id, r.family): r.measured_constant
        for r in run_suite(fine).reports
        if r.verdict == "pass" and math.isfinite(r.measured_constant)
    }
    for key in (
        ("EmbeddingSeminorm", "flat_4_01"),
        ("ProductBound", "power_2+power_3"),
        ("Integration", "power_2"),
        ("FxFxRel", "power_2"),
        ("RootHolder", "affine_one"),
    ):
        a, b = r_base[key], r_fine[key]
        if a > 0:
            assert abs(b - a) / a < 0.2, key


def test_config_validation():
    with pytest.raises(ConfigError):
        SuiteConfig(families={})
    with pytest.raises(ConfigError):
        SuiteConfig(
            families={"f": Constant(c=1.0)},
            main=[{"family": "ghost", "alpha": 0.5, "beta": 2.0}],
        )
    with pytest.raises(ConfigError):
        SuiteConfig(families={"f": Constant(c=1.0)}, budgets={"NoSuchClaim": 1.0})
    with pytest.raises(ConfigError):
        SuiteConfig(families={"f": Constant(c=1.0)}, allow_list=[{"claim_id": "Nope"}])


def test_config_json_roundtrip():
    cfg = default_config()
    blob = {
        "families": {k: spec_to_json(v) for k, v in cfg.families.items()},
        "grid_level": cfg.grid_level,
        "main": cfg.main,
        "allow_list": cfg.allow_list,
    }
    parsed = SuiteConfig.from_json(json.loads(json.dumps(blob)))
    assert parsed.families == cfg.families
    assert parsed.main == cfg.main


def test_allow_list_gates_aggregate():
    cfg = SuiteConfig(
        families={"affine": AffinePlus(q=0.5)},
        local_stability=[{"family": "affine", "beta": 2.0}],
        budgets={"LocalStability": -1e9},
    )
    result = run_suite(cfg)
    assert not result.passed
    assert result.unexpected_failures()

    cfg2 = SuiteConfig(
        families={"affine": AffinePlus(q=0.5)},
        local_stability=[{"family": "affine", "beta": 2.0}],
        budgets={"LocalStability": -1e9},
        allow_list=[{"claim_id": "LocalStability", "family": "affine"}],
    )
    result2 = run_suite(cfg2)
    assert result2.passed
    assert not result2.unexpected_failures()


def test_write_outputs(tmp_path):
    result = run_suite(default_config())
    write_suite_outputs(result, tmp_path)
    report = (tmp_path / "suite_report.json").read_text()
    parsed = json.loads(report)
    assert isinstance(parsed, list) and len(parsed) == len(result.reports)
    summary = (tmp_path / "suite_summary.csv").read_text().splitlines()
    assert summary[0] == "claim_id,family,verdict,measured_constant,budget,allow_listed"
    assert len(summary) == 1 + len(result.reports)


def test_every_failure_carries_a_witness():
    cfg = SuiteConfig(
        families={"flat": FlatFamily(beta=4.0, delta=0.1), "c1": Constant(c=1.0)},
        main=[{"family": "flat", "alpha": 0.5, "beta": 4.0}],
        integration=[{"family": "c1", "beta": 2.0}],
        budgets={"MainTheorem": 1e-9},
    )
    result = run_suite(cfg)
    fails = [r for r in result.reports if r.verdict == "fail"]
    assert fails
    assert all(r.witnesses for r in fails)
