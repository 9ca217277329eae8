import math

import pytest

from orthoconv.polynomials import AlSalamChihara, DualQKrawtchouk, Hermite, MeixnerPollaczek, UnsupportedFamilyError
from orthoconv.verify import (
    DEGENERATIONS,
    UNITARITY_KINDS,
    _BY_ID,
    Evaluation,
    IdentityId,
    SampleConfig,
    degeneration,
    evaluate_sample,
    list_identities,
    orthogonality_suite,
    sample_rng,
    scaled_residual,
    unitarity_suite,
    verify,
)

SUMMED = [i for i in IdentityId if not i.value.endswith("_ORTHO")]


def test_catalog_is_the_enumeration_in_order():
    ids = [info.id for info in list_identities()]
    assert ids == list(IdentityId)
    assert IdentityId.T4_10 in ids
    assert [info.id for info in list_identities()] == ids
    assert all(info.ranges for info in list_identities())


def test_t34_degree_one_example():
    params = dict(n=1, j=0, k1=1.0, k2=1.0, phi=math.pi / 3, x1=0.2, x2=-0.4)
    assert scaled_residual(evaluate_sample(IdentityId.T3_4, params)) <= 1e-12


def test_residual_guard_and_value():
    assert scaled_residual(Evaluation(1.0, 1.0, (0.0,))) == 0.0
    assert scaled_residual(Evaluation(3.0, 1.0, (2.0, -2.0))) == pytest.approx(0.5)


@pytest.mark.parametrize("identity", SUMMED, ids=lambda i: i.value)
def test_residual_invariant_under_common_scale(identity):
    cfg = SampleConfig(seed=3, count=3)
    entry = _BY_ID[identity]
    for i in range(cfg.count):
        params = entry.sampler(sample_rng(cfg.seed, i), cfg)
        plain = scaled_residual(evaluate_sample(identity, params))
        scaled = scaled_residual(evaluate_sample(identity, params, scale=1e3))
        assert abs(plain - scaled) <= 1e-15


def test_suites_are_not_pointwise_identities():
    with pytest.raises(ValueError):
        evaluate_sample(IdentityId.CGC_ORTHO, {})


@pytest.mark.parametrize("identity", ["T3_4", "C3_15ii", "T4_5", "T5_5", "RACAH_ORTHO"])
def test_report_independent_of_workers(identity):
    one = verify(identity, SampleConfig(seed=11, count=12, workers=1))
    four = verify(identity, SampleConfig(seed=11, count=12, workers=4))
    assert one.to_dict() == four.to_dict()
    assert one.passed and one.max_scaled_residual <= 1e-8


def test_report_fields():
    rep = verify("C3_8i", SampleConfig(seed=5, count=7))
    d = rep.to_dict()
    assert d["identity"] == "C3_8i" and len(d["samples"]) == 7
    assert d["pass"] == (d["max_scaled_residual"] <= d["config"]["tolerance"])
    assert [s["index"] for s in d["samples"]] == list(range(7))


def test_seed_changes_samples():
    a = verify("T3_4", SampleConfig(seed=1, count=3)).samples[0].parameters
    b = verify("T3_4", SampleConfig(seed=2, count=3)).samples[0].parameters
    assert a != b


def test_tight_tolerance_fails_report():
    rep = verify("T3_4", SampleConfig(seed=0, count=5, tolerance=1e-300))
    assert not rep.passed


@pytest.mark.parametrize(
    "kwargs",
    [dict(count=0), dict(tolerance=0.0), dict(workers=0), dict(ranges={"q": (0.2, 1.0)}), dict(ranges={"zz": (0, 1)}), dict(ranges={"k": (2.0, 1.0)})],
)
def test_sample_config_validation(kwargs):
    with pytest.raises(ValueError):
        SampleConfig(**kwargs)


def test_ranges_override_is_used():
    rep = verify("T3_4", SampleConfig(seed=0, count=10, ranges={"k": (1.0, 1.1)}))
    assert all(1.0 <= s.parameters["k1"] <= 1.1 for s in rep.samples)


@pytest.mark.parametrize(
    "family",
    [MeixnerPollaczek(0.8, 1.1), AlSalamChihara(0.4, 0.2, 0.5), DualQKrawtchouk(1.2, 9, 0.3)],
    ids=lambda f: type(f).__name__,
)
def test_orthogonality_suite_examples(family):
    rep = orthogonality_suite(family, 10)
    assert rep.passed and rep.max_scaled_residual <= 1e-10
    assert orthogonality_suite(family, 1).max_scaled_residual <= 1e-15


def test_orthogonality_suite_errors():
    with pytest.raises(ValueError):
        orthogonality_suite(MeixnerPollaczek(0.8, 1.1), 0)
    with pytest.raises(UnsupportedFamilyError):
        orthogonality_suite(Hermite(), 4)


def test_unitarity_suite_examples():
    assert unitarity_suite("cgc_su11", [0], SampleConfig(count=3)).max_scaled_residual <= 1e-15
    assert unitarity_suite("cgc_su11", [4]).max_scaled_residual <= 1e-11
    rep = unitarity_suite("racah_uq_su11", [3], SampleConfig(count=5, ranges={"q": (0.7, 0.7)}))
    assert rep.max_scaled_residual <= 1e-10
    with pytest.raises(ValueError):
        unitarity_suite("wigner", [1])
    assert "uq_su2_overlap" in UNITARITY_KINDS


def test_degenerations_small_run():
    for name in DEGENERATIONS:
        rep = degeneration(name, SampleConfig(seed=4, count=15))
        assert rep.max_scaled_residual <= (1e-10 if name.endswith("c0") else 1e-12), name
    with pytest.raises(ValueError):
        degeneration("nope")
